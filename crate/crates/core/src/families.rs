//! Concrete recurrence families: the ten-parameter octabasic family, its three
//! one-parameter specializations (little q-Jacobi, a sum of two little
//! q-Jacobi, classical q-Laguerre), their explicit forms and closed-form
//! moments, and numeric checks of the associated discrete measures.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::orthopoly::RecurrenceCoeffs;
use crate::polyring::{Poly, Substitution, Var};
use crate::qseries::{binom2, bracket2, bracket_product, bracket_q, qbinomial, qfactorial};

fn q_pow(e: i64) -> Poly {
    Poly::var_pow(Var::Q, e as i32)
}

fn sign(k: u32) -> Poly {
    Poly::constant(if k % 2 == 0 { 1 } else { -1 })
}

/// `b_n = a[n+1]_{r,s} + b[n]_{t,u}`, `lambda_n = ab[n]_{p,q}[n]_{v,w}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Octabasic;

impl RecurrenceCoeffs for Octabasic {
    fn b(&self, n: usize) -> Poly {
        let n = n as u32;
        &(&Poly::var(Var::A) * &bracket2(n + 1, Var::R, Var::S))
            + &(&Poly::var(Var::B) * &bracket2(n, Var::T, Var::U))
    }

    fn lambda(&self, n: usize) -> Poly {
        let n = n as u32;
        let ab = &Poly::var(Var::A) * &Poly::var(Var::B);
        &(&ab * &bracket2(n, Var::P, Var::Q)) * &bracket2(n, Var::V, Var::W)
    }
}

pub fn octabasic_coeffs() -> Octabasic {
    Octabasic
}

/// The three named specializations of the ten parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecKind {
    /// `r=t=p=v=q^2, s=u=w=q, a=1/q, b=1` (little q-Jacobi).
    T2,
    /// Same brackets with `a=q, b=1` (sum of two little q-Jacobi).
    T3,
    /// `r=t=p=v=b=q^-2, s=u=w=a=q^-1` (q-Laguerre).
    QL,
}

impl SpecKind {
    pub const ALL: [SpecKind; 3] = [SpecKind::T2, SpecKind::T3, SpecKind::QL];

    pub fn name(self) -> &'static str {
        match self {
            SpecKind::T2 => "t2",
            SpecKind::T3 => "t3",
            SpecKind::QL => "ql",
        }
    }

    pub fn specialization(self) -> Specialization {
        match self {
            SpecKind::T2 => spec_theorem2(),
            SpecKind::T3 => spec_theorem3(),
            SpecKind::QL => spec_qlaguerre(),
        }
    }
}

impl fmt::Display for SpecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpecKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpecKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown specialization {s:?} (expected t2, t3 or ql)"))
    }
}

/// An assignment of a Laurent monomial in `q` to each of the ten parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub kind: SpecKind,
    subst: Substitution,
}

impl Specialization {
    fn from_exponents(kind: SpecKind, exps: [(Var, i64); 10]) -> Self {
        let subst = exps.into_iter().map(|(v, e)| (v, q_pow(e))).collect();
        Specialization { kind, subst }
    }

    pub fn substitution(&self) -> &Substitution {
        &self.subst
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        f.substitute(&self.subst)
            .expect("unit monomial images always substitute")
    }

    /// The same map restricted to the chain parameters `a, b, r, s, t, u`.
    pub fn restricted_to_chain(&self) -> Substitution {
        self.subst
            .iter()
            .filter(|(v, _)| matches!(v, Var::A | Var::B | Var::R | Var::S | Var::T | Var::U))
            .map(|(v, p)| (v, p.clone()))
            .collect()
    }
}

pub fn spec_theorem2() -> Specialization {
    use Var::*;
    Specialization::from_exponents(
        SpecKind::T2,
        [(R, 2), (T, 2), (P, 2), (V, 2), (S, 1), (U, 1), (Q, 1), (W, 1), (A, -1), (B, 0)],
    )
}

pub fn spec_theorem3() -> Specialization {
    use Var::*;
    Specialization::from_exponents(
        SpecKind::T3,
        [(R, 2), (T, 2), (P, 2), (V, 2), (S, 1), (U, 1), (Q, 1), (W, 1), (A, 1), (B, 0)],
    )
}

pub fn spec_qlaguerre() -> Specialization {
    use Var::*;
    Specialization::from_exponents(
        SpecKind::QL,
        [(R, -2), (T, -2), (P, -2), (V, -2), (B, -2), (S, -1), (U, -1), (Q, -1), (W, -1), (A, -1)],
    )
}

/// Little q-Jacobi recurrence in the `x q (1-q)` scaling:
/// `b_n = q^{n-1}[n+1+alpha]_q + q^{n+alpha-1}[n]_q`,
/// `lambda_n = q^{2n-3+alpha}[n]_q[n+alpha]_q`.
#[derive(Debug, Clone, Copy)]
pub struct QJacobi {
    pub alpha: u32,
}

impl RecurrenceCoeffs for QJacobi {
    fn b(&self, n: usize) -> Poly {
        let (n, a) = (n as i64, i64::from(self.alpha));
        &(&q_pow(n - 1) * &bracket_q((n + 1 + a) as u32)) + &(&q_pow(n + a - 1) * &bracket_q(n as u32))
    }

    fn lambda(&self, n: usize) -> Poly {
        let (n, a) = (n as i64, i64::from(self.alpha));
        &(&q_pow(2 * n - 3 + a) * &bracket_q(n as u32)) * &bracket_q((n + a) as u32)
    }
}

pub fn qjacobi_coeffs(alpha: u32) -> QJacobi {
    QJacobi { alpha }
}

/// `sum_k [n,k]_q [n]_q...[n-k+1]_q (-1)^k x^{n-k} q^{binom2(k-1)-1}`.
pub fn qjacobi_explicit(n: u32) -> Poly {
    let x = Poly::var(Var::X);
    (0..=n)
        .map(|k| {
            let c = &(&qbinomial(n, k.into()) * &bracket_product(i64::from(n - k) + 1, n.into()))
                * &q_pow(binom2(i64::from(k) - 1) - 1);
            &(&c * &sign(k)) * &x.pow(n - k)
        })
        .sum()
}

/// `b_n = q^{n+1}[n+1]_q + q^{n-1}[n]_q`, `lambda_n = q^{2n-1}[n]_q^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sum2;

impl RecurrenceCoeffs for Sum2 {
    fn b(&self, n: usize) -> Poly {
        let n = n as i64;
        &(&q_pow(n + 1) * &bracket_q((n + 1) as u32)) + &(&q_pow(n - 1) * &bracket_q(n as u32))
    }

    fn lambda(&self, n: usize) -> Poly {
        &q_pow(2 * n as i64 - 1) * &bracket_q(n as u32).pow(2)
    }
}

pub fn sum2_coeffs() -> Sum2 {
    Sum2
}

/// `x^n + sum_{k=1}^n [n,k]_q [n]_q...[n-k+2]_q ([n-k]_q + q^n) (-1)^k x^{n-k} q^{binom2(k)}`.
///
/// The `k = n` summand already equals `(-1)^n q^{binom2(n+1)} n!_q`, so that
/// constant term is not added a second time.
pub fn sum2_explicit(n: u32) -> Poly {
    let x = Poly::var(Var::X);
    let tail: Poly = (1..=n)
        .map(|k| {
            let falling = bracket_product(i64::from(n - k) + 2, n.into());
            let bracket_sum = &bracket_q(n - k) + &q_pow(n.into());
            let c = &(&(&qbinomial(n, k.into()) * &falling) * &bracket_sum) * &q_pow(binom2(k.into()));
            &(&c * &sign(k)) * &x.pow(n - k)
        })
        .sum();
    &x.pow(n) + &tail
}

/// Monic q-Laguerre recurrence in the `x(1-q)` scaling:
/// `b_n = q^{-2n-alpha}[n]_q + q^{-2n-1-alpha}[n+1+alpha]_q`,
/// `lambda_n = q^{1-4n-2alpha}[n]_q[n+alpha]_q`.
#[derive(Debug, Clone, Copy)]
pub struct QLaguerre {
    pub alpha: u32,
}

impl RecurrenceCoeffs for QLaguerre {
    fn b(&self, n: usize) -> Poly {
        let (n, a) = (n as i64, i64::from(self.alpha));
        &(&q_pow(-2 * n - a) * &bracket_q(n as u32))
            + &(&q_pow(-2 * n - 1 - a) * &bracket_q((n + 1 + a) as u32))
    }

    fn lambda(&self, n: usize) -> Poly {
        let (n, a) = (n as i64, i64::from(self.alpha));
        &(&q_pow(1 - 4 * n - 2 * a) * &bracket_q(n as u32)) * &bracket_q((n + a) as u32)
    }
}

pub fn qlaguerre_coeffs(alpha: u32) -> QLaguerre {
    QLaguerre { alpha }
}

/// `sum_k [n,k]_q [n+alpha]_q...[n+alpha-k+1]_q (-1)^k x^{n-k} q^{k(k-alpha-2n)}`.
pub fn qlaguerre_explicit(n: u32, alpha: u32) -> Poly {
    let x = Poly::var(Var::X);
    let (ni, ai) = (i64::from(n), i64::from(alpha));
    (0..=n)
        .map(|k| {
            let ki = i64::from(k);
            let falling = bracket_product(ni + ai - ki + 1, ni + ai);
            let c = &(&qbinomial(n, ki) * &falling) * &q_pow(ki * (ki - ai - 2 * ni));
            &(&c * &sign(k)) * &x.pow(n - k)
        })
        .sum()
}

/// Closed-form moments: `q^{-n} n!_q` (T2), `q n!_q` for `n > 0` (T3),
/// `q^{-binom2(n+1)} n!_q` (QL).
pub fn moment_closed_form(kind: SpecKind, n: u32) -> Poly {
    let fact = qfactorial(n);
    match kind {
        SpecKind::T2 => &q_pow(-i64::from(n)) * &fact,
        SpecKind::T3 if n == 0 => Poly::one(),
        SpecKind::T3 => &q_pow(1) * &fact,
        SpecKind::QL => &q_pow(-binom2(i64::from(n) + 1)) * &fact,
    }
}

/// Moments `q^{-n} [alpha+1]_q ... [alpha+n]_q` of the little q-Jacobi family
/// with second parameter 0, in the `x q (1-q)` scaling.
pub fn qjacobi_moment(alpha: u32, n: u32) -> Poly {
    &q_pow(-i64::from(n)) * &bracket_product(i64::from(alpha) + 1, i64::from(alpha + n))
}

/// Finite product `prod_{k=1}^{m} (1 - q^{k+shift})` in floating point.
fn pochhammer_numeric(q: f64, shift: u32, m: usize) -> f64 {
    (1..=m).map(|k| 1.0 - q.powi((k as u32 + shift) as i32)).product()
}

/// `(q^{1+shift}; q)_inf`, truncated once a factor is within 1e-16 of 1 or
/// after `max_terms` factors.
pub fn pochhammer_infinite(q: f64, shift: u32, max_terms: usize) -> f64 {
    let mut prod = 1.0;
    for k in 1..=max_terms {
        let t = q.powi((k as u32 + shift) as i32);
        if t < 1e-16 {
            break;
        }
        prod *= 1.0 - t;
    }
    prod
}

/// Finitely many point masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    pub q: f64,
    pub truncation: usize,
    /// `(location, mass)` pairs.
    pub atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn moment(&self, n: u32) -> f64 {
        self.atoms
            .iter()
            .map(|&(x, m)| m * x.powi(n as i32))
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.moment(0)
    }
}

/// Mass `1-q` at 0 and `q^i (q;q)_inf / (q;q)_{i-1}` at `q^{i-1}/(1-q)`,
/// `1 <= i <= truncation`.
pub fn prop1_measure(q: f64, truncation: usize) -> DiscreteMeasure {
    let qq_inf = pochhammer_infinite(q, 0, truncation.max(1));
    let mut atoms = vec![(0.0, 1.0 - q)];
    for i in 1..=truncation {
        let mass = q.powi(i as i32) * qq_inf / pochhammer_numeric(q, 0, i - 1);
        atoms.push((q.powi(i as i32 - 1) / (1.0 - q), mass));
    }
    DiscreteMeasure { q, truncation, atoms }
}

/// Little q-Jacobi measure with second parameter 0: mass
/// `q^{(alpha+1) i} (q^{alpha+1};q)_inf / (q;q)_i` at `q^i`, reported at the
/// rescaled location `q^i / (q(1-q))`, `0 <= i <= truncation`.
pub fn qjacobi_measure(alpha: u32, q: f64, truncation: usize) -> DiscreteMeasure {
    let head = pochhammer_infinite(q, alpha, truncation.max(1));
    let atoms = (0..=truncation)
        .map(|i| {
            let mass = q.powi(((alpha + 1) as usize * i) as i32) * head / pochhammer_numeric(q, 0, i);
            (q.powi(i as i32) / (q * (1.0 - q)), mass)
        })
        .collect();
    DiscreteMeasure { q, truncation, atoms }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentError {
    pub n: u32,
    pub numeric: f64,
    pub expected: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub family: String,
    pub q: f64,
    pub truncation: usize,
    pub tolerance: f64,
    pub per_n: Vec<MomentError>,
    pub max_rel_error: f64,
    pub pass: bool,
}

impl MeasureReport {
    fn build(
        family: String,
        measure: &DiscreteMeasure,
        max_n: u32,
        tolerance: f64,
        expected: impl Fn(u32) -> Poly,
    ) -> Self {
        let per_n: Vec<MomentError> = (0..=max_n)
            .map(|n| {
                let numeric = measure.moment(n);
                let exact = expected(n)
                    .eval(&[(Var::Q, measure.q)])
                    .expect("closed forms only involve q");
                let abs_error = (numeric - exact).abs();
                MomentError {
                    n,
                    numeric,
                    expected: exact,
                    abs_error,
                    rel_error: abs_error / exact.abs(),
                }
            })
            .collect();
        let max_rel_error = per_n.iter().map(|e| e.rel_error).fold(0.0, f64::max);
        MeasureReport {
            family,
            q: measure.q,
            truncation: measure.truncation,
            tolerance,
            pass: per_n.iter().all(|e| e.rel_error < tolerance),
            per_n,
            max_rel_error,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

pub const MEASURE_TOLERANCE: f64 = 1e-9;

/// Compares the truncated measure's moments with the closed form `q n!_q`
/// (`1` at `n = 0`).
pub fn prop1_measure_check(q: f64, truncation: usize, max_n: u32) -> MeasureReport {
    MeasureReport::build(
        "prop1".into(),
        &prop1_measure(q, truncation),
        max_n,
        MEASURE_TOLERANCE,
        |n| moment_closed_form(SpecKind::T3, n),
    )
}

pub fn qjacobi_measure_check(alpha: u32, q: f64, truncation: usize, max_n: u32) -> MeasureReport {
    MeasureReport::build(
        format!("qjacobi(alpha={alpha})"),
        &qjacobi_measure(alpha, q, truncation),
        max_n,
        MEASURE_TOLERANCE,
        |n| qjacobi_moment(alpha, n),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{monic_sequence, moments_from_recurrence, Specialized};

    fn q() -> Poly {
        Poly::var(Var::Q)
    }

    #[test]
    fn octabasic_first_coefficients() {
        let c = octabasic_coeffs();
        assert_eq!(c.b(0), Poly::var(Var::A));
        assert_eq!(c.lambda(1), &Poly::var(Var::A) * &Poly::var(Var::B));
        let rs = &Poly::var(Var::R) + &Poly::var(Var::S);
        assert_eq!(c.b(1), &(&Poly::var(Var::A) * &rs) + &Poly::var(Var::B));
    }

    #[test]
    fn specialized_coefficients_examples() {
        let c = octabasic_coeffs();
        assert_eq!(spec_theorem2().apply(&c.b(0)), Poly::var_pow(Var::Q, -1));
        assert_eq!(
            spec_theorem3().apply(&c.b(1)),
            &(&Poly::one() + &q().pow(2)) + &q().pow(3)
        );
        assert_eq!(spec_qlaguerre().apply(&c.lambda(1)), Poly::var_pow(Var::Q, -3));
    }

    #[test]
    fn family_first_values() {
        assert_eq!(qjacobi_coeffs(0).b(0), Poly::var_pow(Var::Q, -1));
        assert_eq!(qjacobi_coeffs(0).lambda(1), Poly::var_pow(Var::Q, -1));
        assert_eq!(sum2_coeffs().b(0), q());
        assert_eq!(sum2_coeffs().lambda(1), q());
        let x = Poly::var(Var::X);
        assert!(qjacobi_explicit(0).is_one());
        assert_eq!(qjacobi_explicit(1), &x - &Poly::var_pow(Var::Q, -1));
        assert_eq!(sum2_explicit(1), &x - &q());
        let expected = &(&x.pow(2) - &(&x * &bracket_q(4))) + &(&q().pow(3) + &q().pow(4));
        assert_eq!(sum2_explicit(2), expected);
        assert_eq!(
            monic_sequence(&qlaguerre_coeffs(0), 1)[1],
            &x - &Poly::var_pow(Var::Q, -1)
        );
        assert_eq!(qlaguerre_explicit(1, 0), &x - &Poly::var_pow(Var::Q, -1));
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(
            moment_closed_form(SpecKind::T2, 2),
            &Poly::var_pow(Var::Q, -2) + &Poly::var_pow(Var::Q, -1)
        );
        assert_eq!(moment_closed_form(SpecKind::T3, 2), &q() + &q().pow(2));
        assert!(moment_closed_form(SpecKind::T3, 0).is_one());
        assert_eq!(moment_closed_form(SpecKind::QL, 1), Poly::var_pow(Var::Q, -1));
        for n in 0..=5 {
            assert_eq!(qjacobi_moment(0, n), moment_closed_form(SpecKind::T2, n));
        }
    }

    #[test]
    fn specializations_match_families_for_small_n() {
        for n in 0..=6 {
            let t2 = Specialized::new(Octabasic, spec_theorem2().substitution().clone());
            assert_eq!(t2.b(n), qjacobi_coeffs(0).b(n));
            let t3 = Specialized::new(Octabasic, spec_theorem3().substitution().clone());
            assert_eq!(t3.b(n), sum2_coeffs().b(n));
            if n > 0 {
                assert_eq!(t2.lambda(n), qjacobi_coeffs(0).lambda(n));
                assert_eq!(t3.lambda(n), sum2_coeffs().lambda(n));
            }
        }
        let mu = moments_from_recurrence(&sum2_coeffs(), 6);
        for n in 0..=6 {
            assert_eq!(mu[n], moment_closed_form(SpecKind::T3, n as u32));
        }
    }

    #[test]
    fn prop1_numeric_examples() {
        let r = prop1_measure_check(0.5, 80, 0);
        assert!((r.per_n[0].numeric - 1.0).abs() < 1e-10);
        assert!(prop1_measure_check(0.5, 80, 6).max_rel_error < 1e-9);
        assert!(prop1_measure_check(0.3, 60, 6).max_rel_error < 1e-9);
        // Too few atoms to capture the mass.
        assert!(!prop1_measure_check(0.5, 3, 2).pass);
    }

    #[test]
    fn qjacobi_numeric_examples() {
        let r = qjacobi_measure_check(0, 0.5, 80, 0);
        assert!((r.per_n[0].numeric - 1.0).abs() < 1e-10);
        assert!(qjacobi_measure_check(0, 0.5, 80, 5).pass);
        assert!(qjacobi_measure_check(1, 0.5, 80, 5).pass);
        for n in 0..=5 {
            let expected = &Poly::var_pow(Var::Q, -(n as i32)) * &qfactorial(n + 1);
            assert_eq!(qjacobi_moment(1, n), expected);
        }
    }

    #[test]
    fn report_serializes() {
        let json = prop1_measure_check(0.5, 80, 2).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["family"], "prop1");
        assert_eq!(v["per_n"].as_array().unwrap().len(), 3);
        assert_eq!(v["pass"], true);
    }
}
