//! Even/odd splitting of a symmetric chain, the odd family's coefficients and
//! moments, and the auxiliary statistics `n(sigma)`, `lsg*`, `rsg*`.

use std::fmt;
use std::str::FromStr;

use crate::families::SpecKind;
use crate::orthopoly::{moments_from_recurrence, MomentSequence, RecurrenceCoeffs};
use crate::permstat::{
    par_fold_permutations, ElementClass, PermError, Permutation, QDistribution, RunDecomposition,
    RunTerm,
};
use crate::polyring::{Poly, PolyError, Substitution, Var};
use crate::qseries::{bracket2, qfactorial};

/// The symmetric chain `b_n = 0`, `lambda_{2n} = b[n]_{t,u}`,
/// `lambda_{2n+1} = a[n+1]_{r,s}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SymmetricChain;

impl SymmetricChain {
    pub fn lambda_even_of(&self, n: usize) -> Poly {
        &Poly::var(Var::B) * &bracket2(n as u32, Var::T, Var::U)
    }

    pub fn lambda_odd_of(&self, n: usize) -> Poly {
        &Poly::var(Var::A) * &bracket2(n as u32 + 1, Var::R, Var::S)
    }

    /// `lambda_m` of the chain for any `m >= 1`.
    pub fn lambda(&self, m: usize) -> Poly {
        if m % 2 == 0 {
            self.lambda_even_of(m / 2)
        } else {
            self.lambda_odd_of(m / 2)
        }
    }
}

/// Even-degree part: `b_n = lambda_{2n} + lambda_{2n+1}`,
/// `lambda_n = lambda_{2n-1} lambda_{2n}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvenCoeffs(pub SymmetricChain);

/// Odd-degree part: `b_n = lambda_{2n+1} + lambda_{2n+2}`,
/// `lambda_n = lambda_{2n} lambda_{2n+1}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct OddCoeffs(pub SymmetricChain);

impl RecurrenceCoeffs for EvenCoeffs {
    fn b(&self, n: usize) -> Poly {
        &self.0.lambda(2 * n) + &self.0.lambda(2 * n + 1)
    }

    fn lambda(&self, n: usize) -> Poly {
        &self.0.lambda(2 * n - 1) * &self.0.lambda(2 * n)
    }
}

impl RecurrenceCoeffs for OddCoeffs {
    fn b(&self, n: usize) -> Poly {
        &self.0.lambda(2 * n + 1) + &self.0.lambda(2 * n + 2)
    }

    fn lambda(&self, n: usize) -> Poly {
        &self.0.lambda(2 * n) * &self.0.lambda(2 * n + 1)
    }
}

pub fn even_coeffs(chain: SymmetricChain) -> EvenCoeffs {
    EvenCoeffs(chain)
}

pub fn odd_coeffs(chain: SymmetricChain) -> OddCoeffs {
    OddCoeffs(chain)
}

/// `p -> r, q -> s, v -> t, w -> u`.
pub fn chain_identification() -> Substitution {
    Substitution::new()
        .with(Var::P, Poly::var(Var::R))
        .with(Var::Q, Poly::var(Var::S))
        .with(Var::V, Poly::var(Var::T))
        .with(Var::W, Poly::var(Var::U))
}

pub fn odd_moments(chain: SymmetricChain, max_n: usize) -> MomentSequence {
    moments_from_recurrence(&odd_coeffs(chain), max_n)
}

/// Checks `mu_n(odd) = mu_{n+1}(even) / mu_1(even)` for `n <= max_n`.
pub fn odd_quotient_check(chain: SymmetricChain, max_n: usize) -> Result<bool, PolyError> {
    let odd = odd_moments(chain, max_n);
    let even = moments_from_recurrence(&even_coeffs(chain), max_n + 1);
    for n in 0..=max_n {
        if even[n + 1].exact_divide(&even[1])? != odd[n] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which of the three listed odd families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OddFamily {
    /// Little q-Jacobi in the `x q (1-q)` scaling.
    One = 1,
    /// Little q-Jacobi in the `x (1-q)` scaling.
    Two = 2,
    /// q-Laguerre with parameter 1.
    Three = 3,
}

impl OddFamily {
    pub const ALL: [OddFamily; 3] = [OddFamily::One, OddFamily::Two, OddFamily::Three];

    pub fn spec_kind(self) -> SpecKind {
        match self {
            OddFamily::One => SpecKind::T2,
            OddFamily::Two => SpecKind::T3,
            OddFamily::Three => SpecKind::QL,
        }
    }

    /// `q^{-n}(n+1)!_q`, `(n+1)!_q` and `q^{-(n^2+3n)/2}(n+1)!_q`.
    pub fn closed_form(self, n: u32) -> Poly {
        let shift = match self {
            OddFamily::One => -(n as i32),
            OddFamily::Two => 0,
            OddFamily::Three => -(((n * n + 3 * n) / 2) as i32),
        };
        &Poly::var_pow(Var::Q, shift) * &qfactorial(n + 1)
    }
}

impl TryFrom<u32> for OddFamily {
    type Error = String;
    fn try_from(v: u32) -> Result<Self, String> {
        match v {
            1 => Ok(OddFamily::One),
            2 => Ok(OddFamily::Two),
            3 => Ok(OddFamily::Three),
            _ => Err(format!("odd family must be 1, 2 or 3, got {v}")),
        }
    }
}

impl FromStr for OddFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse::<u32>()
            .map_err(|_| format!("odd family must be 1, 2 or 3, got {s:?}"))
            .and_then(OddFamily::try_from)
    }
}

impl fmt::Display for OddFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u32)
    }
}

/// Specialized odd moments `mu_0..mu_N`.
pub fn odd_specialized_moments(which: OddFamily, max_n: usize) -> MomentSequence {
    let subst = which.spec_kind().specialization().restricted_to_chain();
    odd_moments(SymmetricChain, max_n)
        .substitute(&subst)
        .expect("unit monomial images always substitute")
}

pub fn odd_specialization_check(which: OddFamily, max_n: usize) -> bool {
    odd_specialized_moments(which, max_n)
        .iter()
        .enumerate()
        .all(|(n, m)| *m == which.closed_form(n as u32))
}

/// Ingredients of `n(sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuxStatContext {
    /// Largest element of the run holding 1.
    pub d: u32,
    /// Last singleton left-to-right minimum of the portion after 1's run.
    pub c: Option<u32>,
    pub nleft: u32,
    pub n_of_sigma: u32,
}

fn aux_of(word: &[u32], d: &RunDecomposition) -> AuxStatContext {
    let one_run = &d.runs[d.run_of(1)];
    let top = one_run.max;
    let mut running_min = u32::MAX;
    let mut c = None;
    for &v in &word[one_run.end..] {
        if v < running_min {
            running_min = v;
            if d.class_of(v) == ElementClass::Singleton {
                c = Some(v);
            }
        }
    }
    let Some(c) = c else {
        return AuxStatContext {
            d: top,
            c: None,
            nleft: 0,
            n_of_sigma: 0,
        };
    };
    let nleft = word[..one_run.start]
        .iter()
        .filter(|&&v| c < v && v < top)
        .count() as u32;
    AuxStatContext {
        d: top,
        c: Some(c),
        nleft,
        n_of_sigma: 2 * (top - c) - nleft,
    }
}

pub fn aux_stat(sigma: &Permutation) -> AuxStatContext {
    aux_of(sigma.word(), &sigma.decompose())
}

/// `(lsg*(i), rsg*(i))`.
fn starred(d: &RunDecomposition, i: u32) -> (u32, u32) {
    let home = d.run_of(i);
    let one = d.run_of(1);
    let counted = |r: usize| r != one && d.runs[r].straddles(i);
    let mut left = (0..home).filter(|&r| counted(r)).count() as u32;
    let mut right = (home + 1..d.run_count()).filter(|&r| counted(r)).count() as u32;
    if home != one && matches!(d.class_of(i), ElementClass::Opener | ElementClass::Continuator) {
        if one < home {
            left += 1;
        } else {
            right += 1;
        }
    }
    (left, right)
}

pub fn lsg_star(sigma: &Permutation, i: u32) -> Result<u32, PermError> {
    sigma.check_value(i)?;
    Ok(starred(&sigma.decompose(), i).0)
}

pub fn rsg_star(sigma: &Permutation, i: u32) -> Result<u32, PermError> {
    sigma.check_value(i)?;
    Ok(starred(&sigma.decompose(), i).1)
}

/// Totals `(lsg*(sigma), rsg*(sigma))` over all elements.
pub fn star_totals(sigma: &Permutation) -> (u32, u32) {
    star_totals_of(&sigma.decompose(), sigma.len())
}

fn star_totals_of(d: &RunDecomposition, n: usize) -> (u32, u32) {
    (1..=n as u32).fold((0, 0), |(l, r), i| {
        let (a, b) = starred(d, i);
        (l + a, r + b)
    })
}

fn theorem4_of(word: &[u32], run_term: RunTerm) -> i64 {
    let d = RunDecomposition::of(word);
    let (l, r) = star_totals_of(&d, word.len());
    let aux = aux_of(word, &d);
    run_term.value(word.len(), d.run_count()) + 2 * i64::from(l) + i64::from(r) + i64::from(aux.n_of_sigma)
}

/// `run_term + 2 lsg*(sigma) + rsg*(sigma) + n(sigma)`.
pub fn theorem4_stat(sigma: &Permutation, run_term: RunTerm) -> i64 {
    theorem4_of(sigma.word(), run_term)
}

pub fn theorem4_distribution(n: usize, run_term: RunTerm) -> QDistribution {
    par_fold_permutations(
        n,
        QDistribution::default,
        |acc, w| acc.record(theorem4_of(w, run_term)),
        QDistribution::merge,
    )
}

/// Permutations of `S_{n+1}` with 1 and `n+1` in one run and no singleton
/// left-to-right minimum after that run.
pub fn restricted_count(n: usize) -> u64 {
    let top = n as u32 + 1;
    par_fold_permutations(
        n + 1,
        || 0u64,
        |acc, w| {
            let d = RunDecomposition::of(w);
            let aux = aux_of(w, &d);
            if aux.d == top && aux.c.is_none() {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )
}
