//! Exact sparse Laurent polynomials over the fixed variable set
//! `a, b, r, s, t, u, p, q, v, w, x`.
//!
//! A [`Poly`] is kept in canonical form at all times: terms sorted by
//! [`Monomial`] (lexicographic in canonical variable order) with no zero
//! coefficients, so structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of variables in the ring.
pub const NUM_VARS: usize = 11;

/// One of the eleven ring variables, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A,
    B,
    R,
    S,
    T,
    U,
    P,
    Q,
    V,
    W,
    X,
}

impl Var {
    pub const ALL: [Var; NUM_VARS] = [
        Var::A,
        Var::B,
        Var::R,
        Var::S,
        Var::T,
        Var::U,
        Var::P,
        Var::Q,
        Var::V,
        Var::W,
        Var::X,
    ];

    /// The ten recurrence parameters (everything except `x`).
    pub const PARAMETERS: [Var; 10] = [
        Var::A,
        Var::B,
        Var::R,
        Var::S,
        Var::T,
        Var::U,
        Var::P,
        Var::Q,
        Var::V,
        Var::W,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::A => "a",
            Var::B => "b",
            Var::R => "r",
            Var::S => "s",
            Var::T => "t",
            Var::U => "u",
            Var::P => "p",
            Var::Q => "q",
            Var::V => "v",
            Var::W => "w",
            Var::X => "x",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Var::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| PolyError::UnknownVariable(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot substitute a non-unit expression for {0} under a negative exponent")]
    NonInvertibleSubstitution(Var),
    #[error("division by zero: {0} evaluated at 0 under a negative exponent")]
    DivisionByZero(Var),
    #[error("no value supplied for variable {0}")]
    UnmappedVariable(Var),
    #[error("divisor does not divide the dividend exactly")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("unknown variable name {0:?}")]
    UnknownVariable(String),
    #[error("invalid coefficient {0:?}")]
    InvalidCoefficient(String),
    #[error("exponent out of range")]
    ExponentOverflow,
}

/// Exponent vector indexed by [`Var::index`]; absent variables have exponent 0.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial([i16; NUM_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NUM_VARS]);

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        let mut m = Self::ONE;
        m.0[v.index()] = narrow(e);
        m
    }

    pub fn from_exps(exps: &[(Var, i32)]) -> Self {
        let mut m = Self::ONE;
        for &(v, e) in exps {
            m.0[v.index()] = narrow(i32::from(m.0[v.index()]) + e);
        }
        m
    }

    #[inline]
    pub fn exp(&self, v: Var) -> i32 {
        i32::from(self.0[v.index()])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Nonzero exponents in canonical variable order.
    pub fn exps(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        Var::ALL
            .iter()
            .map(move |&v| (v, self.exp(v)))
            .filter(|&(_, e)| e != 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0i16; NUM_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i]
                .checked_add(other.0[i])
                .expect("monomial exponent overflow");
        }
        Monomial(out)
    }

    /// Laurent inverse.
    pub fn inv(&self) -> Monomial {
        let mut out = self.0;
        for e in out.iter_mut() {
            *e = -*e;
        }
        Monomial(out)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let mut out = [0i16; NUM_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = narrow(i32::from(self.0[i]) * k);
        }
        Monomial(out)
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn componentwise_min(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o = (*o).min(*b);
        }
        Monomial(out)
    }

    fn without(&self, v: Var) -> Monomial {
        let mut out = self.0;
        out[v.index()] = 0;
        Monomial(out)
    }
}

fn narrow(e: i32) -> i16 {
    i16::try_from(e).expect("monomial exponent overflow")
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.exps() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        Self::term(1, Monomial::var(v))
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::term(1, Monomial::var_pow(v, e))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c.into();
        }
        Self::from_accumulator(acc)
    }

    fn from_accumulator(acc: FxHashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// The single term of a monomial polynomial.
    pub fn as_term(&self) -> Option<(&Monomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    /// Largest exponent of `v` among the terms (None for the zero polynomial).
    pub fn degree_in(&self, v: Var) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exp(v)).max()
    }

    pub fn min_degree_in(&self, v: Var) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exp(v)).min()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) != 0)
    }

    /// Splits `self` as `sum_k c_k * v^k`, returning the map `k -> c_k`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<i32, Poly> {
        let mut parts: BTreeMap<i32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.exp(v))
                .or_default()
                .push((m.without(v), c.clone()));
        }
        // Removing one variable preserves the relative order of the remaining
        // exponent vectors only within a fixed exponent of `v`, so resort.
        parts
            .into_iter()
            .map(|(k, mut terms)| {
                terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                (k, Poly { terms })
            })
            .collect()
    }

    /// Coefficient list `[c_lo, ..., c_hi]` of a univariate polynomial in `v`
    /// together with the lowest exponent. Returns None if other variables occur.
    pub fn univariate_coeffs(&self, v: Var) -> Option<(i32, Vec<BigInt>)> {
        if self.is_zero() {
            return Some((0, Vec::new()));
        }
        if self.terms.iter().any(|(m, _)| !m.without(v).is_one()) {
            return None;
        }
        let lo = self.min_degree_in(v)?;
        let hi = self.degree_in(v)?;
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (m, c) in &self.terms {
            out[(m.exp(v) - lo) as usize] = c.clone();
        }
        Some((lo, out))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        // Multiplying by a monomial is an order-preserving shift.
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Laurent power; negative `k` requires `self` to be a unit monomial (±m).
    pub fn pow_signed(&self, k: i32) -> Option<Poly> {
        if k >= 0 {
            return Some(self.pow(k as u32));
        }
        let (m, c) = self.as_term()?;
        if !(c.is_one() || (-c).is_one()) {
            return None;
        }
        let sign = if k % 2 != 0 { c.clone() } else { BigInt::one() };
        Some(Poly::term(sign, m.pow(k)))
    }

    /// Simultaneous substitution `v -> image(v)` for every mapped variable.
    pub fn substitute(&self, subst: &Substitution) -> Result<Poly, PolyError> {
        if subst.is_monomial() {
            return self.substitute_monomial(subst);
        }
        let mut cache: FxHashMap<(Var, i32), Poly> = FxHashMap::default();
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut fixed = Monomial::ONE;
            let mut factor = Poly::constant(c.clone());
            for (v, e) in m.exps() {
                match subst.get(v) {
                    None => fixed = fixed.mul(&Monomial::var_pow(v, e)),
                    Some(image) => {
                        let power = match cache.get(&(v, e)) {
                            Some(p) => p.clone(),
                            None => {
                                let p = image
                                    .pow_signed(e)
                                    .ok_or(PolyError::NonInvertibleSubstitution(v))?;
                                cache.insert((v, e), p.clone());
                                p
                            }
                        };
                        factor = &factor * &power;
                    }
                }
            }
            for (fm, fc) in factor.terms {
                *acc.entry(fm.mul(&fixed)).or_default() += fc;
            }
        }
        Ok(Poly::from_accumulator(acc))
    }

    fn substitute_monomial(&self, subst: &Substitution) -> Result<Poly, PolyError> {
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut out = Monomial::ONE;
            let mut coeff = c.clone();
            for (v, e) in m.exps() {
                match subst.get(v) {
                    None => out = out.mul(&Monomial::var_pow(v, e)),
                    Some(image) => {
                        let (im, ic) = image.as_term().expect("monomial substitution");
                        if e < 0 && !(ic.is_one() || (-ic).is_one()) {
                            return Err(PolyError::NonInvertibleSubstitution(v));
                        }
                        out = out.mul(&im.pow(e));
                        if !ic.is_one() {
                            coeff *= num_traits::pow(ic.clone(), e.unsigned_abs() as usize);
                        }
                    }
                }
            }
            *acc.entry(out).or_default() += coeff;
        }
        Ok(Poly::from_accumulator(acc))
    }

    /// Numeric value with each variable looked up through `value_of`.
    pub fn eval_with(&self, value_of: impl Fn(Var) -> Option<f64>) -> Result<f64, PolyError> {
        let mut values = [0f64; NUM_VARS];
        let mut known = [false; NUM_VARS];
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (v, e) in m.exps() {
                let i = v.index();
                if !known[i] {
                    values[i] = value_of(v).ok_or(PolyError::UnmappedVariable(v))?;
                    known[i] = true;
                }
                if e < 0 && values[i] == 0.0 {
                    return Err(PolyError::DivisionByZero(v));
                }
                t *= values[i].powi(e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Numeric value at the given point.
    pub fn eval(&self, point: &[(Var, f64)]) -> Result<f64, PolyError> {
        self.eval_with(|v| point.iter().find(|(w, _)| *w == v).map(|&(_, x)| x))
    }

    /// Returns `h` with `self = divisor * h`, or `InexactDivision`.
    pub fn exact_divide(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        if let Some((m, c)) = divisor.as_term() {
            let inv = m.inv();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (k, a) in &self.terms {
                let (q, r) = a.div_rem(c);
                if !r.is_zero() {
                    return Err(PolyError::InexactDivision);
                }
                terms.push((k.mul(&inv), q));
            }
            return Ok(Poly { terms });
        }
        // Clear denominators so both sides are ordinary polynomials; the
        // divisor then has no monomial factor, which makes any Laurent
        // quotient an ordinary polynomial as well.
        let shift_f = self.min_monomial();
        let shift_g = divisor.min_monomial();
        let f = self.mul_monomial(&shift_f.inv());
        let g = divisor.mul_monomial(&shift_g.inv());
        let q = f.divide_polynomial(&g)?;
        Ok(q.mul_monomial(&shift_f.div(&shift_g)))
    }

    fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.iter().map(|(m, _)| *m);
        let first = it.next().unwrap_or(Monomial::ONE);
        it.fold(first, |acc, m| acc.componentwise_min(&m))
    }

    /// Lex-greedy division of ordinary polynomials.
    fn divide_polynomial(&self, g: &Poly) -> Result<Poly, PolyError> {
        let (lead_m, lead_c) = g.terms.last().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((rm, rc)) = rem.terms.last() {
            if !lead_m.divides(rm) {
                return Err(PolyError::InexactDivision);
            }
            let (qc, r) = rc.div_rem(lead_c);
            if !r.is_zero() {
                return Err(PolyError::InexactDivision);
            }
            let qm = rm.div(lead_m);
            rem = &rem - &g.mul_monomial(&qm).scale(&qc);
            quotient.push((qm, qc));
        }
        Ok(Poly::from_terms(quotient))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("poly serialization")
    }

    pub fn from_json(s: &str) -> Result<Poly, serde_json::Error> {
        serde_json::from_str(s)
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let take_b = |c: &BigInt| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, take_b(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, take_b(c))));
        Poly { terms: out }
    }

    fn product(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_monomial(m).scale(c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_monomial(m).scale(c);
        }
        Poly::sum_of_products(&[(self, other)])
    }

    /// `sum_k f_k g_k`, accumulated into a single term map.
    pub fn sum_of_products(pairs: &[(&Poly, &Poly)]) -> Poly {
        if let Some(p) = Self::sum_of_products_small(pairs) {
            return p;
        }
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (f, g) in pairs {
            for (ma, ca) in &f.terms {
                for (mb, cb) in &g.terms {
                    let m = ma.mul(mb);
                    match acc.get_mut(&m) {
                        Some(c) => *c += ca * cb,
                        None => {
                            acc.insert(m, ca * cb);
                        }
                    }
                }
            }
        }
        Poly::from_accumulator(acc)
    }

    /// Machine-integer accumulation; `None` if any coefficient or partial sum
    /// leaves the fast range.
    fn sum_of_products_small(pairs: &[(&Poly, &Poly)]) -> Option<Poly> {
        let small = |p: &Poly| -> Option<Vec<(Monomial, i64)>> {
            p.terms.iter().map(|(m, c)| c.to_i64().map(|c| (*m, c))).collect()
        };
        let mut acc: FxHashMap<Monomial, i128> = FxHashMap::default();
        for (f, g) in pairs {
            let (f, g) = (small(f)?, small(g)?);
            acc.reserve(f.len().max(g.len()));
            for (ma, ca) in &f {
                for (mb, cb) in &g {
                    let prod = i128::from(*ca) * i128::from(*cb);
                    let slot = acc.entry(ma.mul(mb)).or_insert(0);
                    *slot = slot.checked_add(prod)?;
                }
            }
        }
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (m, BigInt::from(c)))
            .collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Some(Poly { terms })
    }
}

/// Variable-to-polynomial map for [`Poly::substitute`]. Unmapped variables map
/// to themselves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<Var, Poly>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, image: Poly) -> Self {
        self.images.insert(v, image);
        self
    }

    pub fn insert(&mut self, v: Var, image: Poly) {
        self.images.insert(v, image);
    }

    pub fn get(&self, v: Var) -> Option<&Poly> {
        self.images.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Poly)> {
        self.images.iter().map(|(v, p)| (*v, p))
    }

    fn is_monomial(&self) -> bool {
        self.images.values().all(|p| p.as_term().is_some())
    }
}

impl FromIterator<(Var, Poly)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Poly)>>(iter: I) -> Self {
        Substitution {
            images: iter.into_iter().collect(),
        }
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.product(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for p in iter {
            for (m, c) in p.terms {
                *acc.entry(m).or_default() += c;
            }
        }
        Poly::from_accumulator(acc)
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |acc, p| &acc * &p)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Poly {
        Poly::constant(c)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

struct ExpsRef<'a>(&'a Monomial);

impl Serialize for ExpsRef<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let exps: Vec<_> = self.0.exps().collect();
        let mut map = serializer.serialize_map(Some(exps.len()))?;
        for (v, e) in exps {
            map.serialize_entry(v.name(), &e)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TermOut<'a> {
    coeff: String,
    exps: ExpsRef<'a>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermOut {
                coeff: c.to_string(),
                exps: ExpsRef(m),
            })?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
struct TermIn {
    coeff: String,
    #[serde(default)]
    exps: BTreeMap<String, i32>,
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<TermIn> = Vec::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let c: BigInt = t
                .coeff
                .trim()
                .parse()
                .map_err(|_| de::Error::custom(PolyError::InvalidCoefficient(t.coeff.clone())))?;
            let mut exps = Vec::with_capacity(t.exps.len());
            for (name, e) in t.exps {
                let v: Var = name.parse().map_err(de::Error::custom)?;
                if i16::try_from(e).is_err() {
                    return Err(de::Error::custom(PolyError::ExponentOverflow));
                }
                exps.push((v, e));
            }
            terms.push((Monomial::from_exps(&exps), c));
        }
        Ok(Poly::from_terms(terms))
    }
}
