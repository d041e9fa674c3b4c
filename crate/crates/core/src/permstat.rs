//! Permutations as words, their run decomposition, the straddle statistics
//! `lsg`/`rsg`, coefficient profiles over them, and exhaustive tallies over
//! the symmetric group.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::polyring::{Monomial, Poly, Var};
use crate::qseries::qfactorial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..{n}: {word:?}")]
    NotAPermutation { word: Vec<u32>, n: usize },
    #[error("cannot parse permutation entry {0:?}")]
    BadEntry(String),
    #[error("value {value} out of range 1..={n}")]
    ValueOutOfRange { value: u32, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("malformed profile field {0:?}")]
    Malformed(String),
    #[error("unknown profile field {0:?}")]
    UnknownField(String),
    #[error("missing profile field {0:?}")]
    MissingField(&'static str),
    #[error("duplicate profile field {0:?}")]
    DuplicateField(String),
}

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(word: Vec<u32>) -> Result<Self, PermError> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            let idx = v as usize;
            if idx == 0 || idx > n || seen[idx] {
                return Err(PermError::NotAPermutation { word, n });
            }
            seen[idx] = true;
        }
        Ok(Permutation(word))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn word(&self) -> &[u32] {
        &self.0
    }

    pub fn into_word(self) -> Vec<u32> {
        self.0
    }

    /// 0-based position of value `v`.
    pub fn position(&self, v: u32) -> usize {
        self.0
            .iter()
            .position(|&w| w == v)
            .expect("value within permutation range")
    }

    pub fn decompose(&self) -> RunDecomposition {
        RunDecomposition::of(&self.0)
    }

    /// Word with `|` at each descent, e.g. `2 6 | 3 5 7 | 4 | 1 8 9`.
    pub fn with_bars(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                out.push_str(if self.0[i - 1] > *v { " | " } else { " " });
            }
            out.push_str(&v.to_string());
        }
        out
    }

    pub fn check_value(&self, i: u32) -> Result<(), PermError> {
        if i == 0 || i as usize > self.len() {
            Err(PermError::ValueOutOfRange {
                value: i,
                n: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Whitespace-separated one-line notation; `|` is accepted as a separator.
impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let word = s
            .split(|c: char| c.is_whitespace() || c == '|' || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| PermError::BadEntry(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(word)
    }
}

/// The four element classes determined by the run structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementClass {
    Opener,
    Closer,
    Continuator,
    Singleton,
}

impl ElementClass {
    pub const ALL: [ElementClass; 4] = [
        ElementClass::Opener,
        ElementClass::Closer,
        ElementClass::Continuator,
        ElementClass::Singleton,
    ];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn short_name(self) -> &'static str {
        match self {
            ElementClass::Opener => "op",
            ElementClass::Closer => "clos",
            ElementClass::Continuator => "cont",
            ElementClass::Singleton => "sing",
        }
    }
}

/// One maximal increasing run: positions `start..end` of the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub min: u32,
    pub max: u32,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    /// Holds both an element smaller and an element greater than `i`.
    #[inline]
    pub fn straddles(&self, i: u32) -> bool {
        self.min < i && i < self.max
    }
}

/// Maximal increasing runs of a word together with the class and run index of
/// every value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunDecomposition {
    pub runs: Vec<Run>,
    class_of: Vec<ElementClass>,
    run_of: Vec<usize>,
}

impl RunDecomposition {
    pub(crate) fn of(word: &[u32]) -> Self {
        let n = word.len();
        let mut runs = Vec::new();
        let mut start = 0;
        for pos in 1..=n {
            if pos == n || word[pos] < word[pos - 1] {
                runs.push(Run {
                    start,
                    end: pos,
                    min: word[start],
                    max: word[pos - 1],
                });
                start = pos;
            }
        }
        let mut class_of = vec![ElementClass::Singleton; n];
        let mut run_of = vec![0; n];
        for (r, run) in runs.iter().enumerate() {
            for pos in run.start..run.end {
                let v = word[pos] as usize - 1;
                run_of[v] = r;
                class_of[v] = if run.len() == 1 {
                    ElementClass::Singleton
                } else if pos == run.start {
                    ElementClass::Opener
                } else if pos + 1 == run.end {
                    ElementClass::Closer
                } else {
                    ElementClass::Continuator
                };
            }
        }
        RunDecomposition {
            runs,
            class_of,
            run_of,
        }
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    pub fn class_of(&self, v: u32) -> ElementClass {
        self.class_of[v as usize - 1]
    }

    /// Index of the run holding value `v`.
    pub fn run_of(&self, v: u32) -> usize {
        self.run_of[v as usize - 1]
    }

    /// Values of the given class, in increasing order.
    pub fn values_in(&self, class: ElementClass) -> Vec<u32> {
        (1..=self.class_of.len() as u32)
            .filter(|&v| self.class_of(v) == class)
            .collect()
    }

    /// Straddling runs strictly left of `v`'s run.
    pub fn lsg(&self, v: u32) -> u32 {
        let r = self.run_of(v);
        self.runs[..r].iter().filter(|run| run.straddles(v)).count() as u32
    }

    /// Straddling runs strictly right of `v`'s run.
    pub fn rsg(&self, v: u32) -> u32 {
        let r = self.run_of(v);
        self.runs[r + 1..].iter().filter(|run| run.straddles(v)).count() as u32
    }

    pub fn class_sums(&self) -> ClassSums {
        let mut sums = ClassSums::default();
        for v in 1..=self.class_of.len() as u32 {
            let c = self.class_of(v).index();
            sums.lsg[c] += self.lsg(v);
            sums.rsg[c] += self.rsg(v);
        }
        sums
    }
}

/// `lsg` and `rsg` summed over each element class, indexed by
/// [`ElementClass::index`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ClassSums {
    pub lsg: [u32; 4],
    pub rsg: [u32; 4],
}

impl ClassSums {
    pub fn lsg_of(&self, c: ElementClass) -> u32 {
        self.lsg[c.index()]
    }

    pub fn rsg_of(&self, c: ElementClass) -> u32 {
        self.rsg[c.index()]
    }

    pub fn lsg_total(&self) -> u32 {
        self.lsg.iter().sum()
    }

    pub fn rsg_total(&self) -> u32 {
        self.rsg.iter().sum()
    }
}

pub fn lsg(sigma: &Permutation, i: u32) -> Result<u32, PermError> {
    sigma.check_value(i)?;
    Ok(sigma.decompose().lsg(i))
}

pub fn rsg(sigma: &Permutation, i: u32) -> Result<u32, PermError> {
    sigma.check_value(i)?;
    Ok(sigma.decompose().rsg(i))
}

pub fn class_sums(sigma: &Permutation) -> ClassSums {
    sigma.decompose().class_sums()
}

/// Which run-count term a statistic starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunTerm {
    NMinusRun,
    RunMinusOne,
}

impl RunTerm {
    pub fn value(self, n: usize, runs: usize) -> i64 {
        match self {
            RunTerm::NMinusRun => n as i64 - runs as i64,
            RunTerm::RunMinusOne => runs as i64 - 1,
        }
    }

    fn token(self) -> &'static str {
        match self {
            RunTerm::NMinusRun => "n-run",
            RunTerm::RunMinusOne => "run-1",
        }
    }
}

/// Coefficients `(c_lsg, c_rsg)` per element class plus a run term and an
/// opener/closer shift: the statistic is
/// `run_term + sum_k c_lsg[k] lsg(k) + c_rsg[k] rsg(k)` with `+shift` added
/// to both opener coefficients and `-shift` to both closer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StatProfile {
    pub run_term: RunTerm,
    pub coeffs: [(i64, i64); 4],
    pub shift: i64,
}

impl StatProfile {
    pub fn uniform(run_term: RunTerm, c_lsg: i64, c_rsg: i64) -> Self {
        StatProfile {
            run_term,
            coeffs: [(c_lsg, c_rsg); 4],
            shift: 0,
        }
    }

    /// `n - run + 2 lsg + rsg`.
    pub fn theorem2() -> Self {
        Self::uniform(RunTerm::NMinusRun, 2, 1)
    }

    /// `run - 1 + 2 lsg + rsg`.
    pub fn theorem3() -> Self {
        Self::uniform(RunTerm::RunMinusOne, 2, 1)
    }

    pub fn with_class(mut self, class: ElementClass, c_lsg: i64, c_rsg: i64) -> Self {
        self.coeffs[class.index()] = (c_lsg, c_rsg);
        self
    }

    pub fn with_shift(mut self, shift: i64) -> Self {
        self.shift = shift;
        self
    }

    /// The sixteen profiles choosing `(2,1)` or `(1,2)` independently per class.
    pub fn sixteen_variants(run_term: RunTerm) -> Vec<StatProfile> {
        (0..16u32)
            .map(|mask| {
                let mut coeffs = [(2, 1); 4];
                for (k, c) in coeffs.iter_mut().enumerate() {
                    if mask >> k & 1 == 1 {
                        *c = (1, 2);
                    }
                }
                StatProfile {
                    run_term,
                    coeffs,
                    shift: 0,
                }
            })
            .collect()
    }

    /// Effective `(c_lsg, c_rsg)` for a class once the shift is applied.
    pub fn effective(&self, class: ElementClass) -> (i64, i64) {
        let (l, r) = self.coeffs[class.index()];
        match class {
            ElementClass::Opener => (l + self.shift, r + self.shift),
            ElementClass::Closer => (l - self.shift, r - self.shift),
            _ => (l, r),
        }
    }

    pub fn evaluate(&self, n: usize, runs: usize, sums: &ClassSums) -> i64 {
        let mut total = self.run_term.value(n, runs);
        for class in ElementClass::ALL {
            let (l, r) = self.effective(class);
            total += l * i64::from(sums.lsg_of(class)) + r * i64::from(sums.rsg_of(class));
        }
        total
    }
}

impl fmt::Display for StatProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run={}", self.run_term.token())?;
        for class in ElementClass::ALL {
            let (l, r) = self.coeffs[class.index()];
            write!(f, "; {}={},{}", class.short_name(), l, r)?;
        }
        write!(f, "; shift={}", self.shift)
    }
}

/// Grammar: `run=n-run|run-1; op=L,R; clos=L,R; cont=L,R; sing=L,R; shift=C`,
/// whitespace-insensitive, `shift` optional.
impl FromStr for StatProfile {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut run_term = None;
        let mut coeffs: [Option<(i64, i64)>; 4] = [None; 4];
        let mut shift = None;
        for field in compact.split(';').filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| ProfileError::Malformed(field.to_string()))?;
            let malformed = || ProfileError::Malformed(field.to_string());
            let duplicate = || ProfileError::DuplicateField(key.to_string());
            match key {
                "run" => {
                    let t = match value {
                        "n-run" => RunTerm::NMinusRun,
                        "run-1" => RunTerm::RunMinusOne,
                        _ => return Err(malformed()),
                    };
                    if run_term.replace(t).is_some() {
                        return Err(duplicate());
                    }
                }
                "shift" => {
                    let c = value.parse().map_err(|_| malformed())?;
                    if shift.replace(c).is_some() {
                        return Err(duplicate());
                    }
                }
                _ => {
                    let class = ElementClass::ALL
                        .into_iter()
                        .find(|c| c.short_name() == key)
                        .ok_or_else(|| ProfileError::UnknownField(key.to_string()))?;
                    let (l, r) = value.split_once(',').ok_or_else(malformed)?;
                    let pair = (
                        l.parse().map_err(|_| malformed())?,
                        r.parse().map_err(|_| malformed())?,
                    );
                    if coeffs[class.index()].replace(pair).is_some() {
                        return Err(duplicate());
                    }
                }
            }
        }
        let mut out = [(0, 0); 4];
        for class in ElementClass::ALL {
            out[class.index()] =
                coeffs[class.index()].ok_or(ProfileError::MissingField(class.short_name()))?;
        }
        Ok(StatProfile {
            run_term: run_term.ok_or(ProfileError::MissingField("run"))?,
            coeffs: out,
            shift: shift.unwrap_or(0),
        })
    }
}

pub fn eval_profile(sigma: &Permutation, profile: &StatProfile) -> i64 {
    let d = sigma.decompose();
    profile.evaluate(sigma.len(), d.run_count(), &d.class_sums())
}

/// Tally `exponent -> count` of a statistic over a set of permutations, i.e.
/// a Laurent polynomial in `q` with nonnegative coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QDistribution(pub BTreeMap<i64, u64>);

impl QDistribution {
    pub fn record(&mut self, exponent: i64) {
        *self.0.entry(exponent).or_insert(0) += 1;
    }

    pub fn merge(mut self, other: QDistribution) -> QDistribution {
        for (e, c) in other.0 {
            *self.0.entry(e).or_insert(0) += c;
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(
            self.0
                .iter()
                .map(|(&e, &c)| (Monomial::var_pow(Var::Q, e as i32), BigInt::from(c))),
        )
    }

    /// True when the tally is exactly `n!_q`.
    pub fn is_qfactorial(&self, n: usize) -> bool {
        self.to_poly() == qfactorial(n as u32)
    }

    /// CSV with header `exponent,count`, one row per exponent in increasing order.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["exponent", "count"]).expect("in-memory csv");
        for (e, c) in &self.0 {
            w.serialize((e, c)).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("ascii csv")
    }

    pub fn from_csv(text: &str) -> Result<QDistribution, csv::Error> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut out = QDistribution::default();
        for row in r.deserialize() {
            let (e, c): (i64, u64) = row?;
            *out.0.entry(e).or_insert(0) += c;
        }
        Ok(out)
    }
}

impl fmt::Display for QDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(e, c)| format!("{e}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Rearranges `w` into its lexicographic successor; false when `w` is the last.
pub fn next_permutation(w: &mut [u32]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

/// Iterator over `S_n` in lexicographic order.
pub struct Permutations {
    current: Option<Vec<u32>>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Permutations {
            current: Some((1..=n as u32).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let out = self.current.take()?;
        let mut succ = out.clone();
        if next_permutation(&mut succ) {
            self.current = Some(succ);
        }
        Some(Permutation(out))
    }
}

pub fn all_permutations(n: usize) -> Permutations {
    Permutations::new(n)
}

/// Parallel fold over `S_n`, split into blocks by first letter. `merge` must
/// be commutative for the result to be independent of scheduling.
pub fn par_fold_permutations<T, I, F, M>(n: usize, init: I, visit: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u32]) + Sync,
    M: Fn(T, T) -> T + Sync,
{
    if n <= 1 {
        let mut acc = init();
        visit(&mut acc, &(1..=n as u32).collect::<Vec<_>>());
        return acc;
    }
    (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut w: Vec<u32> = std::iter::once(first)
                .chain((1..=n as u32).filter(|&v| v != first))
                .collect();
            loop {
                visit(&mut acc, &w);
                if !next_permutation(&mut w[1..]) {
                    break;
                }
            }
            acc
        })
        .reduce(&init, &merge)
}

/// Tallies of several profiles over `S_n` in one pass.
pub fn distributions(n: usize, profiles: &[StatProfile]) -> Vec<QDistribution> {
    par_fold_permutations(
        n,
        || vec![QDistribution::default(); profiles.len()],
        |acc, w| {
            let d = RunDecomposition::of(w);
            let sums = d.class_sums();
            for (tally, p) in acc.iter_mut().zip(profiles) {
                tally.record(p.evaluate(n, d.run_count(), &sums));
            }
        },
        |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
    )
}

pub fn distribution(n: usize, profile: &StatProfile) -> QDistribution {
    distributions(n, std::slice::from_ref(profile))
        .pop()
        .expect("one profile")
}

/// `lsg(op) + rsg(op) == lsg(clos) + rsg(clos)`.
pub fn check_identity_35(sigma: &Permutation) -> bool {
    identity_35_holds(&sigma.decompose().class_sums())
}

fn identity_35_holds(s: &ClassSums) -> bool {
    s.lsg_of(ElementClass::Opener) + s.rsg_of(ElementClass::Opener)
        == s.lsg_of(ElementClass::Closer) + s.rsg_of(ElementClass::Closer)
}

/// Number of permutations of `S_n` violating the opener/closer balance.
pub fn identity_35_violations(n: usize) -> u64 {
    par_fold_permutations(
        n,
        || 0u64,
        |acc, w| {
            if !identity_35_holds(&RunDecomposition::of(w).class_sums()) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )
}

fn weight_monomial(n: usize, d: &RunDecomposition) -> Monomial {
    use ElementClass::*;
    let s = d.class_sums();
    let runs = d.run_count() as i32;
    let e = |x: u32| x as i32;
    Monomial::from_exps(&[
        (Var::A, runs),
        (Var::B, n as i32 - runs),
        (Var::R, e(s.lsg_of(Singleton))),
        (Var::S, e(s.rsg_of(Singleton))),
        (Var::T, e(s.lsg_of(Continuator))),
        (Var::U, e(s.rsg_of(Continuator))),
        (Var::P, e(s.lsg_of(Opener))),
        (Var::Q, e(s.rsg_of(Opener))),
        (Var::V, e(s.lsg_of(Closer))),
        (Var::W, e(s.rsg_of(Closer))),
    ])
}

/// The ten-parameter weight monomial attached to `sigma` by the moment formula.
pub fn theorem1_monomial(sigma: &Permutation) -> Monomial {
    weight_monomial(sigma.len(), &sigma.decompose())
}

pub fn theorem1_weight(sigma: &Permutation) -> Poly {
    Poly::term(1, theorem1_monomial(sigma))
}

/// `mu_n` as the sum of weight monomials over `S_n`.
pub fn moment_via_permutations(n: usize) -> Poly {
    if n == 0 {
        return Poly::one();
    }
    let tally = par_fold_permutations(
        n,
        FxHashMap::<Monomial, u64>::default,
        |acc, w| {
            *acc.entry(weight_monomial(n, &RunDecomposition::of(w)))
                .or_insert(0) += 1;
        },
        |mut a, b| {
            for (m, c) in b {
                *a.entry(m).or_insert(0) += c;
            }
            a
        },
    );
    Poly::from_terms(tally.into_iter().map(|(m, c)| (m, BigInt::from(c))))
}
