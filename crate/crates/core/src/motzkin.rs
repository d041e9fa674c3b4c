//! Weighted Motzkin paths with two kinds of level step, and the insertion
//! bijection between labelled paths of length `n` and `S_n`.
//!
//! A step of kind `K` starting at height `h` carries a label `(j, k)`
//! selecting the monomial `alpha * c^j * d^k` of its bracket weight, where
//! `(c, d)` is the bracket pair of the kind and `alpha` is `a` for steps that
//! begin a run and `b` otherwise. Labels satisfy `j + k = h` for `Ne` and
//! `ESolid`, and `j + k = h - 1` for `Se` and `EDotted`.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::orthopoly::RecurrenceCoeffs;
use crate::permstat::{ElementClass, Permutation};
use crate::polyring::{Monomial, Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("malformed path at step {step}: {reason}")]
    MalformedPath { step: usize, reason: String },
    #[error("cannot parse step {0:?}; expected KIND(j,k)")]
    BadToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StepKind {
    #[serde(rename = "E_SOLID")]
    ESolid,
    #[serde(rename = "E_DOTTED")]
    EDotted,
    #[serde(rename = "NE")]
    Ne,
    #[serde(rename = "SE")]
    Se,
}

impl StepKind {
    /// Enumeration order.
    pub const ALL: [StepKind; 4] = [StepKind::ESolid, StepKind::EDotted, StepKind::Ne, StepKind::Se];

    pub fn name(self) -> &'static str {
        match self {
            StepKind::ESolid => "E_SOLID",
            StepKind::EDotted => "E_DOTTED",
            StepKind::Ne => "NE",
            StepKind::Se => "SE",
        }
    }

    pub fn level_change(self) -> i64 {
        match self {
            StepKind::Ne => 1,
            StepKind::Se => -1,
            StepKind::ESolid | StepKind::EDotted => 0,
        }
    }

    /// Whether a step of this kind inserts a new run (weight prefix `a`).
    pub fn opens_run(self) -> bool {
        matches!(self, StepKind::Ne | StepKind::ESolid)
    }

    /// `j + k` for a step starting at `level`, if the kind is allowed there.
    pub fn label_sum(self, level: usize) -> Option<usize> {
        if self.opens_run() {
            Some(level)
        } else {
            level.checked_sub(1)
        }
    }

    /// Bracket variable pair `(c, d)`.
    pub fn bracket(self) -> (Var, Var) {
        match self {
            StepKind::Ne => (Var::P, Var::Q),
            StepKind::Se => (Var::V, Var::W),
            StepKind::ESolid => (Var::R, Var::S),
            StepKind::EDotted => (Var::T, Var::U),
        }
    }

    pub fn for_class(class: ElementClass) -> StepKind {
        match class {
            ElementClass::Opener => StepKind::Ne,
            ElementClass::Closer => StepKind::Se,
            ElementClass::Singleton => StepKind::ESolid,
            ElementClass::Continuator => StepKind::EDotted,
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StepKind {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StepKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PathError::BadToken(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightedStep {
    pub kind: StepKind,
    pub j: u32,
    pub k: u32,
}

impl WeightedStep {
    pub fn new(kind: StepKind, j: u32, k: u32) -> Self {
        WeightedStep { kind, j, k }
    }

    pub fn monomial(&self) -> Monomial {
        let alpha = if self.kind.opens_run() { Var::A } else { Var::B };
        let (c, d) = self.kind.bracket();
        Monomial::from_exps(&[(alpha, 1), (c, self.j as i32), (d, self.k as i32)])
    }
}

impl fmt::Display for WeightedStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind, self.j, self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WeightedMotzkinPath {
    pub steps: Vec<WeightedStep>,
}

impl WeightedMotzkinPath {
    /// Validates the level profile and every label.
    pub fn new(steps: Vec<WeightedStep>) -> Result<Self, PathError> {
        let path = WeightedMotzkinPath { steps };
        path.levels()?;
        Ok(path)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Heights `h_0 = 0, h_1, ..., h_n = 0`.
    pub fn levels(&self) -> Result<Vec<usize>, PathError> {
        let mut levels = Vec::with_capacity(self.steps.len() + 1);
        let mut h = 0usize;
        levels.push(h);
        for (idx, step) in self.steps.iter().enumerate() {
            let bad = |reason: String| PathError::MalformedPath {
                step: idx + 1,
                reason,
            };
            let sum = step
                .kind
                .label_sum(h)
                .ok_or_else(|| bad(format!("{} not allowed at level 0", step.kind)))?;
            if (step.j + step.k) as usize != sum {
                return Err(bad(format!(
                    "label {step} needs j + k = {sum} at level {h}"
                )));
            }
            h = match step.kind {
                StepKind::Ne => h + 1,
                StepKind::Se => h - 1,
                _ => h,
            };
            levels.push(h);
        }
        if h != 0 {
            return Err(PathError::MalformedPath {
                step: self.steps.len(),
                reason: format!("path ends at level {h}, not 0"),
            });
        }
        Ok(levels)
    }

    pub fn weight_monomial(&self) -> Monomial {
        self.steps
            .iter()
            .fold(Monomial::ONE, |acc, s| acc.mul(&s.monomial()))
    }
}

impl fmt::Display for WeightedMotzkinPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Comma-separated `KIND(j,k)` tokens, e.g. `NE(0,0),SE(0,0)`.
impl FromStr for WeightedMotzkinPath {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut steps = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| PathError::BadToken(rest.to_string()))?;
            let token = &rest[..=close];
            rest = rest[close + 1..].trim_start_matches(',');
            let bad = || PathError::BadToken(token.to_string());
            let (kind, args) = token[..token.len() - 1].split_once('(').ok_or_else(bad)?;
            let (j, k) = args.split_once(',').ok_or_else(bad)?;
            steps.push(WeightedStep {
                kind: kind.parse().map_err(|_| bad())?,
                j: j.parse().map_err(|_| bad())?,
                k: k.parse().map_err(|_| bad())?,
            });
        }
        WeightedMotzkinPath::new(steps)
    }
}

pub fn path_weight(path: &WeightedMotzkinPath) -> Poly {
    Poly::term(1, path.weight_monomial())
}

/// Calls `visit` on every labelled path of length `n`, in the order
/// `E_SOLID < E_DOTTED < NE < SE`, then lexicographic in `(j, k)`.
pub fn for_each_path(n: usize, mut visit: impl FnMut(&WeightedMotzkinPath)) {
    fn extend(
        n: usize,
        level: usize,
        path: &mut WeightedMotzkinPath,
        visit: &mut dyn FnMut(&WeightedMotzkinPath),
    ) {
        let remaining = n - path.steps.len();
        if remaining == 0 {
            if level == 0 {
                visit(path);
            }
            return;
        }
        for kind in StepKind::ALL {
            let Some(sum) = kind.label_sum(level) else {
                continue;
            };
            let next = (level as i64 + kind.level_change()) as usize;
            if next > remaining - 1 {
                continue;
            }
            for j in 0..=sum as u32 {
                path.steps.push(WeightedStep::new(kind, j, sum as u32 - j));
                extend(n, next, path, visit);
                path.steps.pop();
            }
        }
    }
    let mut path = WeightedMotzkinPath::default();
    extend(n, 0, &mut path, &mut visit);
}

pub fn enumerate_paths(n: usize) -> Vec<WeightedMotzkinPath> {
    let mut out = Vec::new();
    for_each_path(n, |p| out.push(p.clone()));
    out
}

/// `mu_n` as the sum of path weights over all labelled paths of length `n`.
pub fn moment_via_paths(n: usize) -> Poly {
    let mut tally: FxHashMap<Monomial, u64> = FxHashMap::default();
    for_each_path(n, |p| *tally.entry(p.weight_monomial()).or_insert(0) += 1);
    Poly::from_terms(tally)
}

/// `mu_n` of an arbitrary family as a sum over unlabelled Motzkin paths:
/// level steps at height `h` weigh `b_h`, down steps from `h` weigh `lambda_h`.
pub fn moment_via_motzkin_paths<C: RecurrenceCoeffs + ?Sized>(c: &C, n: usize) -> Poly {
    fn extend<C: RecurrenceCoeffs + ?Sized>(
        c: &C,
        remaining: usize,
        level: usize,
        weight: &Poly,
        total: &mut Poly,
    ) {
        if remaining == 0 {
            if level == 0 {
                *total += weight;
            }
            return;
        }
        if level + 1 <= remaining - 1 {
            extend(c, remaining - 1, level + 1, weight, total);
        }
        if level <= remaining - 1 {
            extend(c, remaining - 1, level, &(weight * &c.b(level)), total);
        }
        if level >= 1 {
            extend(c, remaining - 1, level - 1, &(weight * &c.lambda(level)), total);
        }
    }
    let mut total = Poly::zero();
    extend(c, n, 0, &Poly::one(), &mut total);
    total
}

/// A block of the partial permutation during insertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub values: Vec<u32>,
    /// Still awaiting a larger element.
    pub active: bool,
}

/// One step of the insertion procedure, for tracing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub i: u32,
    pub kind: StepKind,
    pub j: u32,
    pub k: u32,
    pub level_before: usize,
    pub level_after: usize,
    pub partial: Vec<Block>,
}

impl TraceStep {
    /// `i: KIND(j,k) level h→h' | blocks`, active blocks marked with `*`.
    pub fn render(&self) -> String {
        let blocks: Vec<String> = self
            .partial
            .iter()
            .map(|b| {
                let body: Vec<String> = b.values.iter().map(u32::to_string).collect();
                format!("{}{}", body.join(" "), if b.active { "*" } else { "" })
            })
            .collect();
        format!(
            "{}: {}({},{}) level {}→{} | {}",
            self.i,
            self.kind,
            self.j,
            self.k,
            self.level_before,
            self.level_after,
            blocks.join(" | ")
        )
    }
}

/// Inserts `1..=n` step by step and returns the permutation with the trace.
pub fn path_to_perm_traced(
    path: &WeightedMotzkinPath,
) -> Result<(Permutation, Vec<TraceStep>), PathError> {
    let levels = path.levels()?;
    let mut blocks: Vec<Block> = Vec::new();
    let mut trace = Vec::with_capacity(path.len());
    for (idx, step) in path.steps.iter().enumerate() {
        let i = idx as u32 + 1;
        let j = step.j as usize;
        // Block indices of the active runs, left to right.
        let active: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.active)
            .map(|(p, _)| p)
            .collect();
        debug_assert_eq!(active.len(), levels[idx]);
        match step.kind {
            StepKind::EDotted | StepKind::Se => {
                let target = &mut blocks[active[j]];
                target.values.push(i);
                target.active = step.kind == StepKind::EDotted;
            }
            StepKind::Ne | StepKind::ESolid => {
                // Leftmost slot with exactly j active runs to its left.
                let slot = if j == 0 { 0 } else { active[j - 1] + 1 };
                blocks.insert(
                    slot,
                    Block {
                        values: vec![i],
                        active: step.kind == StepKind::Ne,
                    },
                );
            }
        }
        trace.push(TraceStep {
            i,
            kind: step.kind,
            j: step.j,
            k: step.k,
            level_before: levels[idx],
            level_after: levels[idx + 1],
            partial: blocks.clone(),
        });
    }
    let word: Vec<u32> = blocks.into_iter().flat_map(|b| b.values).collect();
    let sigma = Permutation::new(word).expect("insertion yields a permutation");
    Ok((sigma, trace))
}

pub fn path_to_perm(path: &WeightedMotzkinPath) -> Result<Permutation, PathError> {
    path_to_perm_traced(path).map(|(sigma, _)| sigma)
}

/// Step `i` gets its kind from the class of `i` and label `(lsg(i), rsg(i))`.
pub fn perm_to_path(sigma: &Permutation) -> WeightedMotzkinPath {
    let d = sigma.decompose();
    let steps = (1..=sigma.len() as u32)
        .map(|i| WeightedStep::new(StepKind::for_class(d.class_of(i)), d.lsg(i), d.rsg(i)))
        .collect();
    WeightedMotzkinPath { steps }
}

/// Number of proper runs whose minimum is below `i` and maximum above it.
pub fn proper_runs_straddling(sigma: &Permutation, i: u32) -> usize {
    sigma
        .decompose()
        .runs
        .iter()
        .filter(|r| r.len() >= 2 && r.straddles(i))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permstat::theorem1_weight;
    use StepKind::*;

    fn step(kind: StepKind, j: u32, k: u32) -> WeightedStep {
        WeightedStep::new(kind, j, k)
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_paths(0), vec![WeightedMotzkinPath::default()]);
        let one = enumerate_paths(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].steps, vec![step(ESolid, 0, 0)]);
        let two = enumerate_paths(2);
        assert_eq!(
            two.iter().map(|p| p.steps.clone()).collect::<Vec<_>>(),
            vec![
                vec![step(ESolid, 0, 0), step(ESolid, 0, 0)],
                vec![step(Ne, 0, 0), step(Se, 0, 0)],
            ]
        );
    }

    #[test]
    fn weights() {
        assert!(path_weight(&WeightedMotzkinPath::default()).is_one());
        let p: WeightedMotzkinPath = "E_SOLID(0,0)".parse().unwrap();
        assert_eq!(path_weight(&p), Poly::var(Var::A));
        let p: WeightedMotzkinPath = "NE(0,0),SE(0,0)".parse().unwrap();
        assert_eq!(path_weight(&p), &Poly::var(Var::A) * &Poly::var(Var::B));
    }

    #[test]
    fn insertion_small_cases() {
        let p: WeightedMotzkinPath = "E_SOLID(0,0)".parse().unwrap();
        assert_eq!(path_to_perm(&p).unwrap().word(), &[1]);
        let p: WeightedMotzkinPath = "NE(0,0),SE(0,0)".parse().unwrap();
        assert_eq!(path_to_perm(&p).unwrap().word(), &[1, 2]);
        let p: WeightedMotzkinPath = "E_SOLID(0,0),E_SOLID(0,0)".parse().unwrap();
        assert_eq!(path_to_perm(&p).unwrap().word(), &[2, 1]);
    }

    #[test]
    fn malformed_paths_rejected() {
        assert!(matches!(
            "E_DOTTED(0,0)".parse::<WeightedMotzkinPath>(),
            Err(PathError::MalformedPath { step: 1, .. })
        ));
        assert!(matches!(
            "NE(1,0),SE(0,0)".parse::<WeightedMotzkinPath>(),
            Err(PathError::MalformedPath { step: 1, .. })
        ));
        assert!(matches!(
            "NE(0,0)".parse::<WeightedMotzkinPath>(),
            Err(PathError::MalformedPath { .. })
        ));
        assert!(matches!(
            "XX(0,0)".parse::<WeightedMotzkinPath>(),
            Err(PathError::BadToken(_))
        ));
        assert!("NE(0;0)".parse::<WeightedMotzkinPath>().is_err());
        let bad = WeightedMotzkinPath {
            steps: vec![step(Se, 0, 0)],
        };
        assert!(path_to_perm(&bad).is_err());
    }

    #[test]
    fn worked_example_kinds_and_labels() {
        let sigma: Permutation = "2 6 3 5 7 4 1 8 9".parse().unwrap();
        let path = perm_to_path(&sigma);
        let kinds: Vec<StepKind> = path.steps.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![Ne, Ne, Ne, ESolid, EDotted, Se, Se, EDotted, Se]);
        let d = sigma.decompose();
        for (i, s) in (1..).zip(&path.steps) {
            assert_eq!((s.j, s.k), (d.lsg(i), d.rsg(i)));
        }
        assert!(path.levels().is_ok());
        assert_eq!(path_to_perm(&path).unwrap(), sigma);
    }

    #[test]
    fn eleven_letter_example_round_trips() {
        let sigma: Permutation = "10 | 8 9 11 | 1 3 7 | 5 | 4 6 | 2".parse().unwrap();
        assert_eq!(sigma.len(), 11);
        let path = perm_to_path(&sigma);
        assert!(WeightedMotzkinPath::new(path.steps.clone()).is_ok());
        assert_eq!(path_to_perm(&path).unwrap(), sigma);
        assert_eq!(path_weight(&path), theorem1_weight(&sigma));
    }

    #[test]
    fn trace_rendering() {
        let p: WeightedMotzkinPath = "NE(0,0),E_SOLID(1,0),SE(0,0)".parse().unwrap();
        let (sigma, trace) = path_to_perm_traced(&p).unwrap();
        assert_eq!(sigma.word(), &[1, 3, 2]);
        assert_eq!(trace[0].render(), "1: NE(0,0) level 0→1 | 1*");
        assert_eq!(trace[1].render(), "2: E_SOLID(1,0) level 1→1 | 1* | 2");
        assert_eq!(trace[2].render(), "3: SE(0,0) level 1→0 | 1 3 | 2");
    }

    #[test]
    fn round_trip_and_weight_on_s5() {
        let paths = enumerate_paths(5);
        assert_eq!(paths.len(), 120);
        for path in &paths {
            let sigma = path_to_perm(path).unwrap();
            assert_eq!(&perm_to_path(&sigma), path);
            assert_eq!(path_weight(path), theorem1_weight(&sigma));
        }
    }
}
