//! Walk families and the multiplicity counts built from them.
//!
//! A branching query `(μ, λ, J)` produces one entry per `w ∈ W₀^μ`: the type
//! `(t_{−w(μ)})₀`, a chosen reduced word, and the walks from `𝐚` ending at the
//! vertex `−λ_w`, positively folded for the orientation attached to `J`.
//! Multiplicities for `Ĝ` are the numbers of walks of dimension `⟨ρ, μ+λ⟩`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine_weyl::{AffineWeyl, ExtAffineElement, ReducedWord};
use crate::root_datum::{Coweight, LeviSubset, RootDatum};
use crate::walks::{cell_polynomial, for_each_folded_walk, CellPolynomial, LabeledWalk, Orientation, WalkConstraints};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiplicityError {
    #[error("⟨2ρ, {0}⟩ is odd")]
    NonIntegral(Coweight),
    #[error("{0} is not dominant")]
    NotDominant(Coweight),
    #[error("{vector} is not dominant for the Levi {levi}")]
    NotLeviDominant { vector: Coweight, levi: LeviSubset },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("W-element #{0} is out of range")]
    BadWeylElement(usize),
    #[error("several closed M-chambers through {target} give distinct candidates: {candidates:?}")]
    AmbiguousChamber {
        target: Coweight,
        candidates: Vec<Coweight>,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

type Result<T> = std::result::Result<T, MultiplicityError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingQuery {
    pub mu: Coweight,
    pub lambda: Coweight,
    pub levi: LeviSubset,
}

impl BranchingQuery {
    pub fn validate(&self, r: &RootDatum) -> Result<()> {
        check_rank(r, &self.mu)?;
        check_rank(r, &self.lambda)?;
        if let Some(j) = self.levi.iter().find(|&j| j >= r.num_simple()) {
            return Err(MultiplicityError::PreconditionViolated(format!(
                "Levi index {} out of range",
                j + 1
            )));
        }
        if !r.is_dominant(&self.mu) {
            return Err(MultiplicityError::NotDominant(self.mu.clone()));
        }
        if !r.is_levi_dominant(&self.lambda, &self.levi) {
            return Err(MultiplicityError::NotLeviDominant {
                vector: self.lambda.clone(),
                levi: self.levi.clone(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorQuery {
    pub mu: Coweight,
    pub lambda: Coweight,
    pub nu: Coweight,
}

impl TensorQuery {
    pub fn validate(&self, r: &RootDatum) -> Result<()> {
        for v in [&self.mu, &self.lambda, &self.nu] {
            check_rank(r, v)?;
            if !r.is_dominant(v) {
                return Err(MultiplicityError::NotDominant(v.clone()));
            }
        }
        Ok(())
    }

    /// `μ* = −w₀(μ)`.
    pub fn mu_star(&self, r: &RootDatum) -> Coweight {
        let (d, _) = r.dominant_rep(&-&self.mu, &LeviSubset::full(r.num_simple()));
        d
    }
}

fn check_rank(r: &RootDatum, v: &Coweight) -> Result<()> {
    if v.rank() != r.rank() {
        return Err(MultiplicityError::RankMismatch {
            expected: r.rank(),
            found: v.rank(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyQuery {
    Branching(BranchingQuery),
    Tensor(TensorQuery),
}

/// Where the walks of an entry must end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Vertex(Coweight),
    Orbit(BTreeSet<Coweight>),
}

impl Target {
    fn constraints(&self, min_dimension: Option<usize>) -> WalkConstraints {
        match self {
            Target::Vertex(v) => WalkConstraints {
                end_vertex: Some(v.clone()),
                end_orbit: None,
                min_dimension,
            },
            Target::Orbit(o) => WalkConstraints {
                end_vertex: None,
                end_orbit: Some(o.clone()),
                min_dimension,
            },
        }
    }
}

/// Why an entry carries no walks without being enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Skip {
    /// `−λ_w ⋠ −w(μ)`.
    Dominance,
    /// `ℓ(type) < bound`, so no walk reaches the maximal dimension.
    TooShort,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    /// Index into `RootDatum::weyl()`.
    pub w: usize,
    pub type_element: ExtAffineElement,
    pub chosen_word: ReducedWord,
    /// `λ_w`, or every candidate when `−w(μ)` lies on M-walls; see [`lambda_w`].
    pub lambda_w_candidates: Vec<Coweight>,
    pub target: Option<Target>,
    pub skipped: Option<Skip>,
    pub walks: Vec<LabeledWalk>,
}

impl FamilyEntry {
    pub fn lambda_w(&self) -> Option<&Coweight> {
        match self.lambda_w_candidates.as_slice() {
            [one] => Some(one),
            _ => None,
        }
    }

    pub fn type_length(&self) -> usize {
        self.chosen_word.len()
    }

    pub fn cell_polynomial(&self) -> CellPolynomial {
        cell_polynomial(&self.walks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkFamily {
    pub query: FamilyQuery,
    pub start: ExtAffineElement,
    pub levi: LeviSubset,
    /// The maximal dimension; `None` when the lattice condition fails.
    pub bound: Option<i64>,
    pub entries: Vec<FamilyEntry>,
}

impl WalkFamily {
    pub fn walks(&self) -> impl Iterator<Item = &LabeledWalk> {
        self.entries.iter().flat_map(|e| e.walks.iter())
    }

    pub fn walk_count(&self) -> usize {
        self.entries.iter().map(|e| e.walks.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.walk_count() == 0
    }

    pub fn cell_polynomial(&self) -> CellPolynomial {
        cell_polynomial(self.walks())
    }
}

/// Knobs for family construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyOptions {
    /// Skip `w` unless `−λ_w ⪯ −w(μ)`.
    pub prune_dominance: bool,
    /// Keep only walks of dimension `bound` and prune the search accordingly.
    pub maximal_only: bool,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self {
            prune_dominance: true,
            maximal_only: false,
        }
    }
}

/// `⟨ρ, μ + λ⟩`.
pub fn dimension_bound(r: &RootDatum, mu: &Coweight, lambda: &Coweight) -> Result<i64> {
    let s = mu + lambda;
    r.rho_pairing(&s).ok_or(MultiplicityError::NonIntegral(s))
}

fn levi_chambers_through(r: &RootDatum, levi: &LeviSubset, target: &Coweight) -> Vec<usize> {
    r.parabolic_subgroup(levi)
        .into_iter()
        .filter(|&u| r.is_levi_dominant(&r.act(r.weyl_inverse(u), target), levi))
        .collect()
}

/// The `W_M`-conjugates `u(d)` of the M-dominant `d ∈ W_M(−λ)`, one for each
/// closed M-chamber `u(C̄_M)` containing `target`.
fn chamber_candidates(r: &RootDatum, levi: &LeviSubset, lambda: &Coweight, target: &Coweight) -> Vec<Coweight> {
    let (d, _) = r.dominant_rep(&-lambda, levi);
    let set: BTreeSet<Coweight> = levi_chambers_through(r, levi, target)
        .into_iter()
        .map(|u| r.act(u, &d))
        .collect();
    set.into_iter().collect()
}

/// `λ_w`, where `−λ_w` is the `W_M`-conjugate of `−λ` in the same closed
/// M-chamber as `−w(μ)`.
///
/// Every closed M-chamber `u(C̄_M)` through `−w(μ)` is tried. When `−w(μ)`
/// lies on M-walls these can give distinct conjugates, reported as
/// [`MultiplicityError::AmbiguousChamber`]. Families do not pick one: their
/// walks may end at any of the candidates, and all of them are needed for the
/// counts to agree with the classical branching rule.
pub fn lambda_w(r: &RootDatum, levi: &LeviSubset, mu: &Coweight, lambda: &Coweight, w: usize) -> Result<Coweight> {
    if w >= r.weyl_order() {
        return Err(MultiplicityError::BadWeylElement(w));
    }
    let target = -&r.act(w, mu);
    let candidates = chamber_candidates(r, levi, lambda, &target);
    match candidates.as_slice() {
        [one] => {
            debug_assert!(same_closed_chamber(r, levi, one, &target));
            Ok(-one)
        }
        _ => Err(MultiplicityError::AmbiguousChamber { target, candidates }),
    }
}

fn same_closed_chamber(r: &RootDatum, levi: &LeviSubset, a: &Coweight, b: &Coweight) -> bool {
    r.levi_positive_roots(levi).into_iter().all(|k| {
        let beta = &r.positive_roots()[k];
        let (x, y) = (beta.pair(a), beta.pair(b));
        x * y >= 0
    })
}

/// `(t_{−w(μ)})₀`, the minimal element of `t_{−w(μ)} W₀`.
pub fn type_element(aw: &AffineWeyl<'_>, mu: &Coweight, w: usize) -> ExtAffineElement {
    let r = aw.datum();
    aw.right_w0_minimal(&aw.translation_of(&r.act(w, mu)))
}

/// Builds `𝒫_μ(λ)` for the orientation of `J`.
pub fn build_p_family(r: &RootDatum, query: &BranchingQuery) -> Result<WalkFamily> {
    build_p_family_with(r, query, FamilyOptions::default(), |aw, x| aw.reduced_word(x))
}

/// [`build_p_family`] with explicit options and word choice per type element.
pub fn build_p_family_with(
    r: &RootDatum,
    query: &BranchingQuery,
    opts: FamilyOptions,
    choose_word: impl Fn(&AffineWeyl<'_>, &ExtAffineElement) -> ReducedWord,
) -> Result<WalkFamily> {
    query.validate(r)?;
    let aw = AffineWeyl::new(r);
    let orientation = Orientation::for_levi(r, &query.levi);
    let bound = dimension_bound(r, &query.mu, &query.lambda).ok();
    let start = aw.identity();
    let mut entries = vec![];
    for w in r.min_coset_reps_stab(&query.mu).expect("μ was validated as dominant") {
        let type_element = type_element(&aw, &query.mu, w);
        let chosen_word = choose_word(&aw, &type_element);
        debug_assert_eq!(aw.evaluate(&chosen_word), type_element);
        let mut entry = FamilyEntry {
            w,
            type_element,
            chosen_word,
            lambda_w_candidates: vec![],
            target: None,
            skipped: None,
            walks: vec![],
        };
        let neg_wmu = -&r.act(w, &query.mu);
        let mut ends = chamber_candidates(r, &query.levi, &query.lambda, &neg_wmu);
        entry.lambda_w_candidates = ends.iter().map(|c| -c).collect();
        if opts.prune_dominance {
            ends.retain(|c| r.dominance_leq(c, &neg_wmu).is_some());
            if ends.is_empty() {
                entry.skipped = Some(Skip::Dominance);
                entries.push(entry);
                continue;
            }
        }
        let target = match ends.as_slice() {
            [one] => Target::Vertex(one.clone()),
            _ => Target::Orbit(ends.into_iter().collect()),
        };
        entry.target = Some(target.clone());
        let min_dimension = if opts.maximal_only {
            match bound {
                Some(b) if b >= 0 && b as usize <= entry.type_length() => Some(b as usize),
                _ => {
                    entry.skipped = Some(Skip::TooShort);
                    entries.push(entry);
                    continue;
                }
            }
        } else {
            None
        };
        let constraints = target.constraints(min_dimension);
        let mut walks = vec![];
        for_each_folded_walk(&aw, &start, &entry.chosen_word, &orientation, &constraints, |wk| {
            if !opts.maximal_only || Some(wk.stats.dimension() as i64) == bound {
                walks.push(wk)
            }
        });
        entry.walks = walks;
        entries.push(entry);
    }
    Ok(WalkFamily {
        query: FamilyQuery::Branching(query.clone()),
        start,
        levi: query.levi.clone(),
        bound,
        entries,
    })
}

/// Keeps the walks of dimension `bound`, checking `c⁻ = ℓ(type) − bound`.
pub fn maximal_family(family: &WalkFamily) -> WalkFamily {
    let mut out = family.clone();
    for entry in &mut out.entries {
        let len = entry.type_length() as i64;
        entry.walks.retain(|wk| {
            let keep = Some(wk.stats.dimension() as i64) == family.bound;
            if keep {
                assert_eq!(wk.stats.cminus as i64, len - family.bound.unwrap());
            }
            keep
        });
    }
    out
}

/// `[V^Ĝ_μ : V^M̂_λ]` as the number of maximal walks.
pub fn branching_multiplicity(r: &RootDatum, levi: &LeviSubset, mu: &Coweight, lambda: &Coweight) -> Result<u64> {
    let query = BranchingQuery {
        mu: mu.clone(),
        lambda: lambda.clone(),
        levi: levi.clone(),
    };
    query.validate(r)?;
    if r.coroot_coords(&(mu - lambda)).is_none() {
        return Ok(0);
    }
    let opts = FamilyOptions {
        prune_dominance: true,
        maximal_only: true,
    };
    let family = build_p_family_with(r, &query, opts, |aw, x| aw.reduced_word(x))?;
    Ok(family.walk_count() as u64)
}

/// `dim V^Ĝ_μ(λ)`; the case `J = ∅`.
pub fn weight_multiplicity(r: &RootDatum, mu: &Coweight, lambda: &Coweight) -> Result<u64> {
    branching_multiplicity(r, &LeviSubset::empty(), mu, lambda)
}

/// The family for `Conv(λ, μ; ν)`: walks of type `(t_{−w(μ*)})₀` from `t_{−ν}𝐚`
/// to a vertex of `W₀(−λ)`, positively folded for the base alcove.
pub fn convolution_walk_family(r: &RootDatum, query: &TensorQuery) -> Result<WalkFamily> {
    tensor_family(r, query, false)
}

fn tensor_family(r: &RootDatum, query: &TensorQuery, maximal_only: bool) -> Result<WalkFamily> {
    query.validate(r)?;
    let aw = AffineWeyl::new(r);
    let full = LeviSubset::full(r.num_simple());
    let orientation = Orientation::for_levi(r, &full);
    let mu_star = query.mu_star(r);
    let shifted = &(&query.mu + &query.lambda) - &query.nu;
    let bound = r.coroot_coords(&shifted).and_then(|_| r.rho_pairing(&shifted));
    let start = aw.translation_of(&query.nu);
    let target = Target::Orbit(r.orbit(&-&query.lambda).into_iter().collect());
    let mut entries = vec![];
    for w in r.min_coset_reps_stab(&mu_star).expect("μ* is dominant") {
        let type_element = type_element(&aw, &mu_star, w);
        let chosen_word = aw.reduced_word(&type_element);
        let mut entry = FamilyEntry {
            w,
            type_element,
            chosen_word,
            lambda_w_candidates: vec![],
            target: Some(target.clone()),
            skipped: None,
            walks: vec![],
        };
        let min_dimension = match (maximal_only, bound) {
            (false, _) => None,
            (true, Some(b)) if b >= 0 && b as usize <= entry.type_length() => Some(b as usize),
            (true, _) => {
                entry.skipped = Some(Skip::TooShort);
                entries.push(entry);
                continue;
            }
        };
        let constraints = target.constraints(min_dimension);
        let mut walks = vec![];
        for_each_folded_walk(&aw, &start, &entry.chosen_word, &orientation, &constraints, |wk| {
            if !maximal_only || Some(wk.stats.dimension() as i64) == bound {
                walks.push(wk)
            }
        });
        entry.walks = walks;
        entries.push(entry);
    }
    Ok(WalkFamily {
        query: FamilyQuery::Tensor(query.clone()),
        start,
        levi: full,
        bound,
        entries,
    })
}

/// `[V^Ĝ_μ ⊗ V^Ĝ_λ : V^Ĝ_ν]`.
pub fn tensor_multiplicity(r: &RootDatum, mu: &Coweight, lambda: &Coweight, nu: &Coweight) -> Result<u64> {
    let query = TensorQuery {
        mu: mu.clone(),
        lambda: lambda.clone(),
        nu: nu.clone(),
    };
    Ok(tensor_family(r, &query, true)?.walk_count() as u64)
}

/// `ℓ^{λ_d}(w″) = Σ_{α>0, w″α<0} ⟨α, λ_d⟩`, checked against `⟨ρ, λ_d − w″λ_d⟩`
/// and against `ℓ(w″)`.
pub fn weighted_length(r: &RootDatum, lambda_d: &Coweight, w2: usize) -> Result<i64> {
    check_rank(r, lambda_d)?;
    if !r.is_dominant(lambda_d) {
        return Err(MultiplicityError::NotDominant(lambda_d.clone()));
    }
    let reps = r.min_coset_reps_stab(lambda_d).expect("checked dominant");
    if !reps.contains(&w2) {
        return Err(MultiplicityError::PreconditionViolated(format!(
            "{} is not minimal in its coset modulo the stabilizer of {lambda_d}",
            r.weyl_element(w2).word_string()
        )));
    }
    let by_inversions: i64 = (0..r.positive_roots().len())
        .filter(|&k| r.act_on_root(w2, k).1)
        .map(|k| r.positive_roots()[k].pair(lambda_d))
        .sum();
    let by_rho = r
        .rho_pairing(&(lambda_d - &r.act(w2, lambda_d)))
        .expect("λ_d − w″λ_d lies in the coroot lattice");
    assert_eq!(by_inversions, by_rho);
    assert!(by_inversions >= r.weyl_element(w2).length as i64);
    Ok(by_inversions)
}

/// The quantities entering the two identity chains for `⟨ρ, μ+λ⟩` and
/// `ℓ((t_{−w(μ)})₀) − ⟨ρ, μ+λ⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthIdentities {
    pub lambda_d: Coweight,
    /// `w″ ∈ W₀^{λ_d}` with `λ = w″(λ_d)`.
    pub w2: usize,
    pub rho_mu_plus_lambda: i64,
    pub length_t_mu: i64,
    pub ht_mu_minus_lambda_d: i64,
    pub weighted_length: i64,
    /// Hyperplanes separating `(t_{−λ})₀𝐚` from the dominant chamber.
    pub separating_count: i64,
    pub type_length: i64,
    pub length_w: i64,
}

impl LengthIdentities {
    /// `ℓ(t_μ) − ht − ℓ^{λ_d}(w″)`.
    pub fn first_chain(&self) -> i64 {
        self.length_t_mu - self.ht_mu_minus_lambda_d - self.weighted_length
    }

    /// `ht + N_{λ_d, w″}`.
    pub fn second_chain(&self) -> i64 {
        self.ht_mu_minus_lambda_d + self.separating_count
    }

    /// `ht + ℓ^{λ_d}(w″) − ℓ(w)`.
    pub fn excess(&self) -> i64 {
        self.ht_mu_minus_lambda_d + self.weighted_length - self.length_w
    }

    pub fn holds(&self) -> bool {
        self.first_chain() == self.rho_mu_plus_lambda
            && self.second_chain() == self.rho_mu_plus_lambda
            && self.type_length - self.rho_mu_plus_lambda == self.excess()
    }
}

/// Evaluates every term independently; equality is left to the caller.
pub fn length_identities(r: &RootDatum, mu: &Coweight, lambda: &Coweight, w: usize) -> Result<LengthIdentities> {
    check_rank(r, mu)?;
    check_rank(r, lambda)?;
    if !r.is_dominant(mu) {
        return Err(MultiplicityError::NotDominant(mu.clone()));
    }
    let reps = r.min_coset_reps_stab(mu).expect("checked dominant");
    if !reps.contains(&w) {
        return Err(MultiplicityError::PreconditionViolated(format!(
            "{} is not minimal modulo the stabilizer of {mu}",
            r.weyl_element(w).word_string()
        )));
    }
    let full = LeviSubset::full(r.num_simple());
    let (lambda_d, u) = r.dominant_rep(lambda, &full);
    let ht = r.dominance_leq(&lambda_d, mu).ok_or_else(|| {
        MultiplicityError::PreconditionViolated(format!("{lambda} is not in the convex hull of W₀({mu})"))
    })?;
    // `u` of minimal length gives `w″ = u⁻¹` minimal in its coset.
    let w2 = r.weyl_inverse(u);
    debug_assert_eq!(r.act(w2, &lambda_d), *lambda);
    let aw = AffineWeyl::new(r);
    Ok(LengthIdentities {
        rho_mu_plus_lambda: dimension_bound(r, mu, lambda)?,
        length_t_mu: aw.length(&aw.translation_of(mu)) as i64,
        ht_mu_minus_lambda_d: ht,
        weighted_length: weighted_length(r, &lambda_d, w2)?,
        separating_count: aw.separating_count_from_chamber(&aw.right_w0_minimal(&aw.translation_of(lambda))) as i64,
        type_length: aw.length(&type_element(&aw, mu, w)) as i64,
        length_w: r.weyl_element(w).length as i64,
        lambda_d,
        w2,
    })
}
