//! Monic orthogonal polynomials from three-term recurrences, their moments,
//! and the moment functional.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::polyring::{Poly, PolyError, Substitution, Var};

/// Recurrence coefficients `b_n` (n >= 0) and `lambda_n` (n >= 1) of a monic
/// family `p_{n+1} = (x - b_n) p_n - lambda_n p_{n-1}`.
pub trait RecurrenceCoeffs: Sync {
    fn b(&self, n: usize) -> Poly;
    fn lambda(&self, n: usize) -> Poly;
}

impl<C: RecurrenceCoeffs + ?Sized> RecurrenceCoeffs for &C {
    fn b(&self, n: usize) -> Poly {
        (**self).b(n)
    }
    fn lambda(&self, n: usize) -> Poly {
        (**self).lambda(n)
    }
}

impl<C: RecurrenceCoeffs + ?Sized> RecurrenceCoeffs for Box<C> {
    fn b(&self, n: usize) -> Poly {
        (**self).b(n)
    }
    fn lambda(&self, n: usize) -> Poly {
        (**self).lambda(n)
    }
}

/// Coefficients of another family pushed through a substitution.
pub struct Specialized<C> {
    pub inner: C,
    pub subst: Substitution,
}

impl<C: RecurrenceCoeffs> Specialized<C> {
    pub fn new(inner: C, subst: Substitution) -> Self {
        Specialized { inner, subst }
    }
}

impl<C: RecurrenceCoeffs> RecurrenceCoeffs for Specialized<C> {
    fn b(&self, n: usize) -> Poly {
        self.inner
            .b(n)
            .substitute(&self.subst)
            .expect("specializations map parameters to unit monomials")
    }
    fn lambda(&self, n: usize) -> Poly {
        self.inner
            .lambda(n)
            .substitute(&self.subst)
            .expect("specializations map parameters to unit monomials")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionalError {
    #[error("degree {degree} in x exceeds the {available} available moments")]
    DegreeTooHigh { degree: i32, available: usize },
    #[error("negative power of x in argument of the moment functional")]
    NegativeDegree,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `mu[n]` is the n-th moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence(pub Vec<Poly>);

impl MomentSequence {
    pub fn get(&self, n: usize) -> Option<&Poly> {
        self.0.get(n)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Poly> {
        self.0.iter()
    }

    pub fn substitute(&self, subst: &Substitution) -> Result<MomentSequence, PolyError> {
        self.0
            .iter()
            .map(|m| m.substitute(subst))
            .collect::<Result<_, _>>()
            .map(MomentSequence)
    }
}

impl std::ops::Index<usize> for MomentSequence {
    type Output = Poly;
    fn index(&self, n: usize) -> &Poly {
        &self.0[n]
    }
}

/// `p_0, ..., p_N` as polynomials in `x`.
pub fn monic_sequence<C: RecurrenceCoeffs + ?Sized>(c: &C, max_n: usize) -> Vec<Poly> {
    let x = Poly::var(Var::X);
    let mut out = Vec::with_capacity(max_n + 1);
    out.push(Poly::one());
    if max_n == 0 {
        return out;
    }
    out.push(&x - &c.b(0));
    for n in 1..max_n {
        let next = &(&(&x - &c.b(n)) * &out[n]) - &(&c.lambda(n) * &out[n - 1]);
        out.push(next);
    }
    out
}

/// Moments `mu_0..mu_N` by the level-indexed path recursion: up steps weigh 1,
/// level steps at height k weigh `b_k`, down steps from k+1 weigh `lambda_{k+1}`.
pub fn moments_from_recurrence<C: RecurrenceCoeffs + ?Sized>(
    c: &C,
    max_n: usize,
) -> MomentSequence {
    let levels = max_n / 2 + 1;
    let b: Vec<Poly> = (0..levels).map(|k| c.b(k)).collect();
    let lambda: Vec<Poly> = (0..=levels).map(|k| if k == 0 { Poly::zero() } else { c.lambda(k) }).collect();
    let mut row = vec![Poly::one()];
    let mut mu = Vec::with_capacity(max_n + 1);
    mu.push(Poly::one());
    for m in 1..=max_n {
        // Only heights from which the axis is still reachable matter.
        let top = m.min(max_n - m);
        let next: Vec<Poly> = (0..=top)
            .map(|k| {
                let one = Poly::one();
                let mut pairs = Vec::with_capacity(3);
                if k >= 1 {
                    if let Some(prev) = row.get(k - 1) {
                        pairs.push((&one, prev));
                    }
                }
                if let Some(prev) = row.get(k) {
                    pairs.push((&b[k], prev));
                }
                if let Some(prev) = row.get(k + 1) {
                    pairs.push((&lambda[k + 1], prev));
                }
                Poly::sum_of_products(&pairs)
            })
            .collect();
        mu.push(next[0].clone());
        row = next;
    }
    MomentSequence(mu)
}

/// The moment functional: `x^k -> mu_k`, extended linearly over the
/// non-`x` variables.
pub fn apply_functional(mu: &MomentSequence, f: &Poly) -> Result<Poly, FunctionalError> {
    let parts = f.coefficients_in(Var::X);
    if let Some((&lo, _)) = parts.first_key_value() {
        if lo < 0 {
            return Err(FunctionalError::NegativeDegree);
        }
    }
    if let Some((&hi, _)) = parts.last_key_value() {
        if hi as usize >= mu.len() {
            return Err(FunctionalError::DegreeTooHigh {
                degree: hi,
                available: mu.len(),
            });
        }
    }
    let pairs: Vec<(&Poly, &Poly)> = parts.iter().map(|(&k, c)| (c, &mu[k as usize])).collect();
    Ok(Poly::sum_of_products(&pairs))
}

/// `L(f g)` computed as `sum_i f_i L(x^i g)` without expanding the product.
pub fn apply_functional_product(
    mu: &MomentSequence,
    f: &Poly,
    g: &Poly,
) -> Result<Poly, FunctionalError> {
    let fp = f.coefficients_in(Var::X);
    let gp = g.coefficients_in(Var::X);
    let degree = |p: &BTreeMap<i32, Poly>| p.keys().next_back().copied().unwrap_or(0);
    let low = |p: &BTreeMap<i32, Poly>| p.keys().next().copied().unwrap_or(0);
    if low(&fp) < 0 || low(&gp) < 0 {
        return Err(FunctionalError::NegativeDegree);
    }
    let top = degree(&fp) + degree(&gp);
    if top as usize >= mu.len() {
        return Err(FunctionalError::DegreeTooHigh {
            degree: top,
            available: mu.len(),
        });
    }
    let shifted: Vec<(&Poly, Poly)> = fp
        .iter()
        .map(|(&i, fi)| {
            let pairs: Vec<(&Poly, &Poly)> =
                gp.iter().map(|(&j, gj)| (gj, &mu[(i + j) as usize])).collect();
            (fi, Poly::sum_of_products(&pairs))
        })
        .collect();
    let pairs: Vec<(&Poly, &Poly)> = shifted.iter().map(|(f, s)| (*f, s)).collect();
    Ok(Poly::sum_of_products(&pairs))
}

/// `L(x^i p)` for `i = 0..=max_i`.
pub fn modified_moments(
    mu: &MomentSequence,
    p: &Poly,
    max_i: usize,
) -> Result<Vec<Poly>, FunctionalError> {
    let x = Poly::var(Var::X);
    (0..=max_i)
        .map(|i| apply_functional(mu, &(&x.pow(i as u32) * p)))
        .collect()
}

/// Outcome of an orthogonality check, with the first failing pair if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub max_n: usize,
    pub failures: Vec<(usize, usize)>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `L(p_n p_m) = 0` for `m < n <= N` and `L(p_n^2) = lambda_1...lambda_n`.
pub fn orthogonality_report<C: RecurrenceCoeffs + ?Sized>(
    c: &C,
    max_n: usize,
) -> OrthogonalityReport {
    use rayon::prelude::*;

    let mu = moments_from_recurrence(c, 2 * max_n);
    let polys = monic_sequence(c, max_n);
    let mut norms = vec![Poly::one()];
    for n in 1..=max_n {
        norms.push(&norms[n - 1] * &c.lambda(n));
    }
    // nu[m][i] = L(x^i p_m); then L(p_n p_m) = sum_i [x^i]p_n nu[m][i].
    let x = Poly::var(Var::X);
    let flat: Vec<Poly> = (0..=max_n)
        .flat_map(|m| (0..=max_n).map(move |i| (m, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(m, i)| {
            apply_functional(&mu, &(&x.pow(i as u32) * &polys[m])).expect("moments computed to order 2N")
        })
        .collect();
    let nu: Vec<&[Poly]> = flat.chunks(max_n + 1).collect();
    let coeffs: Vec<_> = polys.iter().map(|p| p.coefficients_in(Var::X)).collect();
    let pairs: Vec<(usize, usize)> = (0..=max_n)
        .flat_map(|n| (0..=n).map(move |m| (n, m)))
        .collect();
    let mut failures: Vec<(usize, usize)> = pairs
        .into_par_iter()
        .filter(|&(n, m)| {
            let terms: Vec<(&Poly, &Poly)> = coeffs[n]
                .iter()
                .map(|(&i, f)| (f, &nu[m][i as usize]))
                .collect();
            let value = Poly::sum_of_products(&terms);
            let expected = if n == m { norms[n].clone() } else { Poly::zero() };
            value != expected
        })
        .collect();
    failures.sort_unstable();
    OrthogonalityReport { max_n, failures }
}

pub fn orthogonality_check<C: RecurrenceCoeffs + ?Sized>(c: &C, max_n: usize) -> bool {
    orthogonality_report(c, max_n).passed()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hermite-like toy family: b_n = 0, lambda_n = n.
    struct Toy;
    impl RecurrenceCoeffs for Toy {
        fn b(&self, _n: usize) -> Poly {
            Poly::zero()
        }
        fn lambda(&self, n: usize) -> Poly {
            Poly::constant(n as i64)
        }
    }

    #[test]
    fn toy_moments_are_double_factorials() {
        let mu = moments_from_recurrence(&Toy, 8);
        let expected = [1, 0, 1, 0, 3, 0, 15, 0, 105];
        for (m, e) in mu.iter().zip(expected) {
            assert_eq!(*m, Poly::constant(e));
        }
        assert!(orthogonality_check(&Toy, 5));
    }

    #[test]
    fn first_polynomials() {
        let p = monic_sequence(&Toy, 2);
        assert!(p[0].is_one());
        assert_eq!(p[1], Poly::var(Var::X));
        assert_eq!(p[2], &Poly::var(Var::X).pow(2) - &Poly::one());
        assert_eq!(monic_sequence(&Toy, 0), vec![Poly::one()]);
    }

    #[test]
    fn functional_errors() {
        let mu = moments_from_recurrence(&Toy, 2);
        assert!(matches!(
            apply_functional(&mu, &Poly::var(Var::X).pow(3)),
            Err(FunctionalError::DegreeTooHigh { degree: 3, .. })
        ));
        assert_eq!(
            apply_functional(&mu, &Poly::var_pow(Var::X, -1)),
            Err(FunctionalError::NegativeDegree)
        );
        assert!(apply_functional(&mu, &Poly::one()).unwrap().is_one());
    }

    #[test]
    fn product_functional_matches_expanded_product() {
        let mu = moments_from_recurrence(&Toy, 8);
        let p = monic_sequence(&Toy, 4);
        for i in 0..=4 {
            for j in 0..=4 {
                assert_eq!(
                    apply_functional_product(&mu, &p[i], &p[j]).unwrap(),
                    apply_functional(&mu, &(&p[i] * &p[j])).unwrap()
                );
            }
        }
    }
}
