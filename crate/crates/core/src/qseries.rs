//! q-brackets, two-parameter brackets, q-factorials, Gaussian binomials and
//! finite q-Pochhammer products, all built without division.

use crate::polyring::{Monomial, Poly, Var};

fn q_pow(e: i32) -> Poly {
    Poly::var_pow(Var::Q, e)
}

/// `[n]_q = 1 + q + ... + q^{n-1}`.
pub fn bracket_q(n: u32) -> Poly {
    Poly::from_terms((0..n as i32).map(|i| (Monomial::var_pow(Var::Q, i), 1)))
}

/// `[n]_{c,d} = sum_{i=0}^{n-1} c^{n-1-i} d^i`.
pub fn bracket2(n: u32, c: Var, d: Var) -> Poly {
    assert_ne!(c, d, "two-parameter bracket needs distinct variables");
    let n = n as i32;
    Poly::from_terms((0..n).map(|i| (Monomial::from_exps(&[(c, n - 1 - i), (d, i)]), 1)))
}

/// `n!_q = [1]_q [2]_q ... [n]_q`.
pub fn qfactorial(n: u32) -> Poly {
    (1..=n).map(bracket_q).product()
}

/// `[a]_q [a+1]_q ... [b]_q`, the empty product being 1.
pub fn bracket_product(lo: i64, hi: i64) -> Poly {
    (lo..=hi)
        .map(|k| bracket_q(u32::try_from(k).expect("negative bracket index")))
        .product()
}

/// Gaussian binomial coefficient via the Pascal recurrence
/// `[n,k] = [n-1,k-1] + q^k [n-1,k]`; zero outside `0 <= k <= n`.
pub fn qbinomial(n: u32, k: i64) -> Poly {
    if k < 0 || k > i64::from(n) {
        return Poly::zero();
    }
    let k = k as usize;
    // row[j] holds [m, j] for the current m.
    let mut row: Vec<Poly> = vec![Poly::one()];
    for m in 1..=n as usize {
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m.min(k) {
            let left = if j > 0 { row[j - 1].clone() } else { Poly::zero() };
            let right = if j < m { row[j].clone() } else { Poly::zero() };
            next.push(&left + &right.mul_monomial(&Monomial::var_pow(Var::Q, j as i32)));
        }
        row = next;
    }
    row.swap_remove(k)
}

/// `(q^{alpha+1}; q)_n = prod_{i=0}^{n-1} (1 - q^{alpha+1+i})`.
pub fn qpochhammer_power(alpha: u32, n: u32) -> Poly {
    (0..n)
        .map(|i| &Poly::one() - &q_pow((alpha + 1 + i) as i32))
        .product()
}

/// `m(m-1)/2` for every integer `m`, negative included.
pub fn binom2(m: i64) -> i64 {
    m * (m - 1) / 2
}
