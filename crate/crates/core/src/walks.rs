//! Positively folded labeled alcove walks.
//!
//! A walk of type `s₁⋯s_r τ` from `x₀` keeps the current element `x_i`; step `i`
//! either crosses (`x_i = x_{i-1} s_i`) or folds (`x_i = x_{i-1}`). The
//! orientation decides which crossings are positive and where folds are legal.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine_weyl::{AffineHyperplane, AffineWeyl, ExtAffineElement, ReducedWord};
use crate::root_datum::{Coweight, LeviSubset, RootDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

/// Side function of the alcove at infinity attached to a Levi subset `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub levi: LeviSubset,
    /// Indices into `positive_roots()` of `Φ⁺_M`.
    pub levi_positive_roots: Vec<usize>,
    in_levi: Vec<bool>,
}

impl Orientation {
    pub fn for_levi(datum: &RootDatum, levi: &LeviSubset) -> Self {
        let levi_positive_roots = datum.levi_positive_roots(levi);
        let mut in_levi = vec![false; datum.positive_roots().len()];
        for &k in &levi_positive_roots {
            in_levi[k] = true;
        }
        Self {
            levi: levi.clone(),
            levi_positive_roots,
            in_levi,
        }
    }

    /// `+` off the Levi; on the Levi the orientation alcove sits at `𝐚` itself.
    pub fn side(&self, h: &AffineHyperplane) -> Side {
        if !self.in_levi[h.root] || h.level <= 0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }
}

pub fn orientation_for_levi(datum: &RootDatum, levi: &LeviSubset) -> Orientation {
    Orientation::for_levi(datum, levi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StepKind {
    #[serde(rename = "c+")]
    PositiveCrossing,
    #[serde(rename = "c-")]
    NegativeCrossing,
    #[serde(rename = "f+")]
    PositiveFolding,
}

impl StepKind {
    pub fn symbol(&self) -> &'static str {
        match self {
            Self::PositiveCrossing => "c+",
            Self::NegativeCrossing => "c-",
            Self::PositiveFolding => "f+",
        }
    }

    pub fn is_fold(&self) -> bool {
        matches!(self, Self::PositiveFolding)
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for StepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "c+" => Ok(Self::PositiveCrossing),
            "c-" => Ok(Self::NegativeCrossing),
            "f+" => Ok(Self::PositiveFolding),
            other => Err(format!("unknown step label `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepLabel {
    pub kind: StepKind,
    pub step_index: usize,
    pub hyperplane: AffineHyperplane,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalkStats {
    pub cplus: usize,
    pub cminus: usize,
    pub fplus: usize,
}

impl WalkStats {
    pub fn dimension(&self) -> usize {
        self.cplus + self.fplus
    }

    fn record(&mut self, kind: StepKind) {
        match kind {
            StepKind::PositiveCrossing => self.cplus += 1,
            StepKind::NegativeCrossing => self.cminus += 1,
            StepKind::PositiveFolding => self.fplus += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledWalk {
    pub start: ExtAffineElement,
    pub word: ReducedWord,
    pub labels: Vec<StepLabel>,
    pub end: ExtAffineElement,
    pub stats: WalkStats,
}

impl LabeledWalk {
    pub fn kinds(&self) -> Vec<StepKind> {
        self.labels.iter().map(|l| l.kind).collect()
    }

    pub fn label_string(&self) -> String {
        let parts: Vec<&str> = self.labels.iter().map(|l| l.kind.symbol()).collect();
        format!("[{}]", parts.join(","))
    }
}

/// Vertex `end(0)` at which the walk terminates.
pub fn walk_endpoint_vertex(walk: &LabeledWalk) -> Coweight {
    walk.end.translation.clone()
}

pub fn walk_dimension(walk: &LabeledWalk) -> usize {
    walk.stats.dimension()
}

/// What may happen at one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOptions {
    /// The crossing moves away from the orientation: only `c⁺`.
    Forced(AffineHyperplane),
    /// The crossing moves toward the orientation: `c⁻` or `f⁺`.
    Choice(AffineHyperplane),
}

/// Panics if the current alcove lies on its own wall, which only an
/// arithmetic bug can cause.
pub fn classify_step(
    aw: &AffineWeyl<'_>,
    x: &ExtAffineElement,
    s: crate::affine_weyl::SimpleAffineReflection,
    o: &Orientation,
) -> StepOptions {
    let h = aw.wall_hyperplane(x, s);
    let src = match aw.side_of(x, &h) {
        std::cmp::Ordering::Greater => Side::Plus,
        std::cmp::Ordering::Less => Side::Minus,
        std::cmp::Ordering::Equal => panic!("degenerate side: {x} lies on its wall {h:?}"),
    };
    if src == o.side(&h) {
        StepOptions::Forced(h)
    } else {
        StepOptions::Choice(h)
    }
}

/// Filters applied while enumerating.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WalkConstraints {
    pub end_vertex: Option<Coweight>,
    pub end_orbit: Option<BTreeSet<Coweight>>,
    pub min_dimension: Option<usize>,
}

impl WalkConstraints {
    fn accepts(&self, end: &ExtAffineElement, stats: &WalkStats) -> bool {
        self.end_vertex.as_ref().is_none_or(|v| *v == end.translation)
            && self.end_orbit.as_ref().is_none_or(|o| o.contains(&end.translation))
            && self.min_dimension.is_none_or(|d| stats.dimension() >= d)
    }
}

struct Dfs<'a, 'r, F> {
    aw: &'a AffineWeyl<'r>,
    word: &'a ReducedWord,
    o: &'a Orientation,
    constraints: &'a WalkConstraints,
    start: &'a ExtAffineElement,
    labels: Vec<StepLabel>,
    visit: F,
}

impl<F: FnMut(LabeledWalk)> Dfs<'_, '_, F> {
    fn run(&mut self, x: ExtAffineElement, stats: WalkStats) {
        let i = self.labels.len();
        let r = self.word.letters.len();
        if let Some(d) = self.constraints.min_dimension {
            if stats.dimension() + (r - i) < d {
                return;
            }
        }
        if i == r {
            let end = self.aw.mul(&x, &self.word.omega);
            if self.constraints.accepts(&end, &stats) {
                (self.visit)(LabeledWalk {
                    start: self.start.clone(),
                    word: self.word.clone(),
                    labels: self.labels.clone(),
                    end,
                    stats,
                });
            }
            return;
        }
        let s = self.word.letters[i];
        let crossed = || self.aw.mul(&x, &self.aw.reflection(s));
        match classify_step(self.aw, &x, s, self.o) {
            StepOptions::Forced(h) => {
                let next = crossed();
                self.step(next, stats, StepKind::PositiveCrossing, h);
            }
            StepOptions::Choice(h) => {
                let next = crossed();
                self.step(next, stats, StepKind::NegativeCrossing, h);
                self.step(x, stats, StepKind::PositiveFolding, h);
            }
        }
    }

    fn step(&mut self, next: ExtAffineElement, mut stats: WalkStats, kind: StepKind, h: AffineHyperplane) {
        stats.record(kind);
        self.labels.push(StepLabel {
            kind,
            step_index: self.labels.len(),
            hyperplane: h,
        });
        self.run(next, stats);
        self.labels.pop();
    }
}

/// Depth-first enumeration calling `visit` on each accepted walk, `c⁻` before `f⁺`.
pub fn for_each_folded_walk(
    aw: &AffineWeyl<'_>,
    start: &ExtAffineElement,
    word: &ReducedWord,
    o: &Orientation,
    constraints: &WalkConstraints,
    visit: impl FnMut(LabeledWalk),
) {
    let mut dfs = Dfs {
        aw,
        word,
        o,
        constraints,
        start,
        labels: Vec::with_capacity(word.len()),
        visit,
    };
    dfs.run(start.clone(), WalkStats::default());
}

pub fn enumerate_folded_walks(
    aw: &AffineWeyl<'_>,
    start: &ExtAffineElement,
    word: &ReducedWord,
    o: &Orientation,
    constraints: &WalkConstraints,
) -> Vec<LabeledWalk> {
    let mut out = vec![];
    for_each_folded_walk(aw, start, word, o, constraints, |w| out.push(w));
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("walk has {found} labels for a word of length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("step {step}: label {found} is not allowed here")]
    IllegalStep { step: usize, found: StepKind },
}

/// Rebuilds a walk from its label sequence, checking legality at every step.
pub fn replay(
    aw: &AffineWeyl<'_>,
    start: &ExtAffineElement,
    word: &ReducedWord,
    o: &Orientation,
    kinds: &[StepKind],
) -> Result<LabeledWalk, WalkError> {
    if kinds.len() != word.len() {
        return Err(WalkError::LengthMismatch {
            expected: word.len(),
            found: kinds.len(),
        });
    }
    let mut x = start.clone();
    let mut stats = WalkStats::default();
    let mut labels = Vec::with_capacity(kinds.len());
    for (i, (&s, &kind)) in word.letters.iter().zip(kinds).enumerate() {
        let (h, ok) = match classify_step(aw, &x, s, o) {
            StepOptions::Forced(h) => (h, kind == StepKind::PositiveCrossing),
            StepOptions::Choice(h) => (h, kind != StepKind::PositiveCrossing),
        };
        if !ok {
            return Err(WalkError::IllegalStep { step: i, found: kind });
        }
        if !kind.is_fold() {
            x = aw.mul(&x, &aw.reflection(s));
        }
        stats.record(kind);
        labels.push(StepLabel {
            kind,
            step_index: i,
            hyperplane: h,
        });
    }
    Ok(LabeledWalk {
        start: start.clone(),
        word: word.clone(),
        labels,
        end: aw.mul(&x, &word.omega),
        stats,
    })
}

/// Integer polynomial in `q`, `coeffs[k]` the coefficient of `q^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellPolynomial {
    pub coeffs: Vec<i64>,
}

impl CellPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `q^a (q−1)^b`.
    pub fn cell(a: usize, b: usize) -> Self {
        let mut coeffs = vec![0; a + b + 1];
        let mut binom: i64 = 1;
        for k in 0..=b {
            // (q−1)^b = Σ C(b,k) q^k (−1)^{b−k}
            let sign = if (b - k).is_multiple_of(2) { 1 } else { -1 };
            coeffs[a + k] = sign * binom;
            binom = binom * (b - k) as i64 / (k as i64 + 1);
        }
        Self { coeffs }.trimmed()
    }

    pub fn monomial(a: usize) -> Self {
        Self::cell(a, 0)
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0) + other.coeffs.get(k).unwrap_or(&0))
            .collect();
        Self { coeffs }.trimmed()
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
    }
}

impl fmt::Display for CellPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "q")?,
                (1, m) => write!(f, "{m}q")?,
                (k, 1) => write!(f, "q^{k}")?,
                (k, m) => write!(f, "{m}q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `Σ q^{c⁺} (q−1)^{f⁺}` over the walks.
pub fn cell_polynomial<'a>(walks: impl IntoIterator<Item = &'a LabeledWalk>) -> CellPolynomial {
    walks.into_iter().fold(CellPolynomial::zero(), |acc, w| {
        acc.add(&CellPolynomial::cell(w.stats.cplus, w.stats.fplus))
    })
}
