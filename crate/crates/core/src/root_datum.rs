//! Root data in explicit integer coordinates.
//!
//! Roots live in `X*(T) = ℤⁿ` and coroots in `X_*(T) = ℤⁿ`; the canonical
//! pairing is the dot product. From the simple roots and coroots we generate
//! the positive system, `2ρ`, `2ρ∨`, and the whole finite Weyl group as a
//! list sorted by `(length, lexicographic reduced word)`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the number of roots produced by reflection closure.
const ROOT_CLOSURE_BOUND: usize = 10_000;
/// Upper bound on the order of the finite Weyl group.
const WEYL_ORDER_BOUND: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDatumError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("{roots} simple roots and {coroots} simple coroots in rank {rank}")]
    ShapeMismatch { rank: usize, roots: usize, coroots: usize },
    #[error("pairing of simple root {index} with its coroot is {value}, expected 2")]
    DualityMismatch { index: usize, value: i64 },
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    #[error("{0} is not dominant")]
    NotDominant(Coweight),
}

macro_rules! lattice_vector {
    ($name:ident, $what:literal) => {
        #[doc = concat!("Integer coordinate vector of ", $what, ".")]
        #[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub Vec<i64>);

        impl $name {
            pub fn zero(rank: usize) -> Self {
                Self(vec![0; rank])
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[i64] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&c| c == 0)
            }

            pub fn scaled(&self, k: i64) -> Self {
                Self(self.0.iter().map(|c| c * k).collect())
            }
        }

        impl From<Vec<i64>> for $name {
            fn from(v: Vec<i64>) -> Self {
                Self(v)
            }
        }

        impl Add<&$name> for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                debug_assert_eq!(self.0.len(), rhs.0.len());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                &self + &rhs
            }
        }

        impl Sub<&$name> for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                debug_assert_eq!(self.0.len(), rhs.0.len());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                &self - &rhs
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|c| -c).collect())
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                -&self
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    };
}

lattice_vector!(Weight, "a character, an element of X*(T)");
lattice_vector!(Coweight, "a cocharacter, an element of X_*(T)");

impl Weight {
    /// The canonical pairing; both vectors must have the same rank.
    pub fn pair(&self, c: &Coweight) -> i64 {
        debug_assert_eq!(self.0.len(), c.0.len());
        dot(&self.0, &c.0)
    }
}

/// Checked canonical pairing `⟨r, c⟩`.
pub fn pair(r: &Weight, c: &Coweight) -> Result<i64, RootDatumError> {
    if r.rank() != c.rank() {
        return Err(RootDatumError::RankMismatch {
            expected: r.rank(),
            found: c.rank(),
        });
    }
    Ok(r.pair(c))
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub type Matrix = Vec<Vec<i64>>;

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn mat_vec(m: &Matrix, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn transpose(m: &Matrix) -> Matrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

/// User-facing description of a root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumSpec {
    pub name: Option<String>,
    pub rank: usize,
    pub simple_roots: Vec<Weight>,
    pub simple_coroots: Vec<Coweight>,
}

/// Names accepted by [`preset`]. The simple types come in adjoint form; append
/// `sc` (e.g. `B2sc`) for the simply connected form.
pub const PRESET_NAMES: &[&str] = &["A1", "A2", "A3", "B2", "C2", "G2", "GL2", "GL3", "GL4"];

/// Pairing matrix `P[i][j] = ⟨α_i, α_j∨⟩` (Bourbaki numbering).
fn cartan_pairing(kind: &str) -> Option<Matrix> {
    let type_a = |n: usize| -> Matrix {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    };
    Some(match kind {
        "A1" => type_a(1),
        "A2" => type_a(2),
        "A3" => type_a(3),
        "A4" => type_a(4),
        // α₁ long, α₂ short
        "B2" => vec![vec![2, -2], vec![-1, 2]],
        // α₁ short, α₂ long
        "C2" => vec![vec![2, -1], vec![-2, 2]],
        // α₁ short, α₂ long
        "G2" => vec![vec![2, -1], vec![-3, 2]],
        _ => return None,
    })
}

/// Looks up a preset root datum.
pub fn preset(name: &str) -> Result<RootDatumSpec, RootDatumError> {
    if let Some(n) = name.strip_prefix("GL") {
        let n: usize = n
            .parse()
            .ok()
            .filter(|n| (1..=4).contains(n))
            .ok_or_else(|| RootDatumError::UnknownPreset(name.to_string()))?;
        let simple: Vec<Vec<i64>> = (0..n - 1)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect();
        return Ok(RootDatumSpec {
            name: Some(name.to_string()),
            rank: n,
            simple_roots: simple.iter().cloned().map(Weight).collect(),
            simple_coroots: simple.into_iter().map(Coweight).collect(),
        });
    }
    let (kind, simply_connected) = match name.strip_suffix("sc") {
        Some(k) => (k, true),
        None => (name, false),
    };
    let p = cartan_pairing(kind).ok_or_else(|| RootDatumError::UnknownPreset(name.to_string()))?;
    let r = p.len();
    let unit = |i: usize| -> Vec<i64> { (0..r).map(|k| i64::from(k == i)).collect() };
    let (roots, coroots): (Vec<Vec<i64>>, Vec<Vec<i64>>) = if simply_connected {
        ((0..r).map(|i| p[i].clone()).collect(), (0..r).map(unit).collect())
    } else {
        (
            (0..r).map(unit).collect(),
            (0..r).map(|j| (0..r).map(|i| p[i][j]).collect()).collect(),
        )
    };
    Ok(RootDatumSpec {
        name: Some(name.to_string()),
        rank: r,
        simple_roots: roots.into_iter().map(Weight).collect(),
        simple_coroots: coroots.into_iter().map(Coweight).collect(),
    })
}

/// A subset `J` of simple-root indices (0-based) selecting a standard Levi.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviSubset(BTreeSet<usize>);

impl LeviSubset {
    /// `J = ∅`, the torus (`P = B`).
    pub fn empty() -> Self {
        Self::default()
    }

    /// `J = Δ`, the whole group (`P = G`).
    pub fn full(num_simple: usize) -> Self {
        Self((0..num_simple).collect())
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every subset of `{0, .., num_simple - 1}`, smallest first.
    pub fn all(num_simple: usize) -> Vec<LeviSubset> {
        let mut out: Vec<LeviSubset> = (0u32..(1 << num_simple))
            .map(|mask| Self::from_indices((0..num_simple).filter(|i| mask & (1 << i) != 0)))
            .collect();
        out.sort_by_key(|j| (j.len(), j.0.iter().copied().collect::<Vec<_>>()));
        out
    }
}

impl fmt::Display for LeviSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// An element of `W₀`, stored with both of its matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteWeylElement {
    pub index: usize,
    /// Action on `X_*(T)`.
    pub coweight_matrix: Matrix,
    /// Contragredient action on `X*(T)`.
    pub weight_matrix: Matrix,
    /// Lexicographically smallest reduced word in simple-reflection indices.
    pub word: Vec<usize>,
    pub length: usize,
}

impl FiniteWeylElement {
    pub fn act(&self, v: &Coweight) -> Coweight {
        Coweight(mat_vec(&self.coweight_matrix, &v.0))
    }

    pub fn act_weight(&self, x: &Weight) -> Weight {
        Weight(mat_vec(&self.weight_matrix, &x.0))
    }

    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            "e".to_string()
        } else {
            self.word
                .iter()
                .map(|i| format!("s{}", i + 1))
                .collect::<Vec<_>>()
                .join("")
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    spec: RootDatumSpec,
    pairing: Matrix,
    pairing_inv: Vec<Vec<Rational64>>,
    positive_roots: Vec<Weight>,
    positive_coroots: Vec<Coweight>,
    root_coeffs: Vec<Vec<i64>>,
    root_index: HashMap<Weight, usize>,
    two_rho: Weight,
    two_rho_check: Coweight,
    weyl: Vec<FiniteWeylElement>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    simple_reflections: Vec<usize>,
    /// `root_action[w][i] = (j, negative)` with `w(β_i) = ±β_j`.
    root_action: Vec<Vec<(usize, bool)>>,
    components: Vec<Vec<usize>>,
    highest_roots: Vec<usize>,
}

impl RootDatum {
    pub fn from_preset(name: &str) -> Result<Self, RootDatumError> {
        Self::new(preset(name)?)
    }

    /// Generates `Φ⁺`, `Φ∨⁺`, `2ρ` and `W₀` from simple data.
    pub fn new(spec: RootDatumSpec) -> Result<Self, RootDatumError> {
        let n = spec.rank;
        let r = spec.simple_roots.len();
        if n == 0 || r != spec.simple_coroots.len() || r > n {
            return Err(RootDatumError::ShapeMismatch {
                rank: n,
                roots: r,
                coroots: spec.simple_coroots.len(),
            });
        }
        for v in spec
            .simple_roots
            .iter()
            .map(Weight::rank)
            .chain(spec.simple_coroots.iter().map(Coweight::rank))
        {
            if v != n {
                return Err(RootDatumError::RankMismatch { expected: n, found: v });
            }
        }
        let pairing: Matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| spec.simple_roots[i].pair(&spec.simple_coroots[j]))
                    .collect()
            })
            .collect();
        for (i, row) in pairing.iter().enumerate() {
            if row[i] != 2 {
                return Err(RootDatumError::DualityMismatch {
                    index: i,
                    value: row[i],
                });
            }
            for j in 0..r {
                if i != j && (row[j] > 0 || (row[j] == 0) != (pairing[j][i] == 0)) {
                    return Err(RootDatumError::NotFiniteType(format!(
                        "pairing entries ({i},{j}) = {} and ({j},{i}) = {} are not generalized Cartan",
                        row[j], pairing[j][i]
                    )));
                }
            }
        }
        let pairing_inv = rational_inverse(&pairing)
            .ok_or_else(|| RootDatumError::NotFiniteType("singular Cartan matrix".to_string()))?;

        let (positive_roots, positive_coroots, root_coeffs) = generate_roots(&spec, &pairing)?;
        let root_index: HashMap<Weight, usize> = positive_roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let two_rho = positive_roots.iter().fold(Weight::zero(n), |acc, b| &acc + b);
        let two_rho_check = positive_coroots.iter().fold(Coweight::zero(n), |acc, b| &acc + b);

        let weyl = generate_weyl(&spec)?;
        let index_of: HashMap<&Matrix, usize> = weyl.iter().map(|w| (&w.coweight_matrix, w.index)).collect();
        let order = weyl.len();
        let mut mul = vec![0; order * order];
        for a in &weyl {
            for b in &weyl {
                let m = mat_mul(&a.coweight_matrix, &b.coweight_matrix);
                mul[a.index * order + b.index] = index_of[&m];
            }
        }
        let inv: Vec<usize> = (0..order)
            .map(|a| (0..order).find(|&b| mul[a * order + b] == 0).unwrap())
            .collect();
        let simple_reflections: Vec<usize> = (0..r)
            .map(|i| weyl.iter().find(|w| w.word == [i]).unwrap().index)
            .collect();
        let root_action = weyl
            .iter()
            .map(|w| {
                positive_roots
                    .iter()
                    .map(|b| {
                        let img = w.act_weight(b);
                        match root_index.get(&img) {
                            Some(&j) => (j, false),
                            None => (root_index[&-&img], true),
                        }
                    })
                    .collect()
            })
            .collect();

        // Connected components of the Dynkin diagram.
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; r];
        for start in 0..r {
            if seen[start] {
                continue;
            }
            let mut comp = vec![];
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(i) = queue.pop_front() {
                comp.push(i);
                for j in 0..r {
                    if !seen[j] && pairing[i][j] != 0 {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        let highest_roots = components
            .iter()
            .map(|comp| {
                (0..positive_roots.len())
                    .filter(|&k| comp.iter().any(|&i| root_coeffs[k][i] > 0))
                    .max_by_key(|&k| root_coeffs[k].iter().sum::<i64>())
                    .unwrap()
            })
            .collect();

        Ok(Self {
            spec,
            pairing,
            pairing_inv,
            positive_roots,
            positive_coroots,
            root_coeffs,
            root_index,
            two_rho,
            two_rho_check,
            weyl,
            mul,
            inv,
            simple_reflections,
            root_action,
            components,
            highest_roots,
        })
    }

    /// The datum with roots and coroots exchanged.
    pub fn dual(&self) -> RootDatum {
        let spec = RootDatumSpec {
            name: self.spec.name.as_ref().map(|n| format!("{n}^")),
            rank: self.spec.rank,
            simple_roots: self.spec.simple_coroots.iter().map(|c| Weight(c.0.clone())).collect(),
            simple_coroots: self.spec.simple_roots.iter().map(|c| Coweight(c.0.clone())).collect(),
        };
        RootDatum::new(spec).expect("dual of a valid root datum is valid")
    }

    pub fn spec(&self) -> &RootDatumSpec {
        &self.spec
    }

    pub fn name(&self) -> Option<&str> {
        self.spec.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn num_simple(&self) -> usize {
        self.spec.simple_roots.len()
    }

    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.spec.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &Coweight {
        &self.spec.simple_coroots[i]
    }

    /// `P[i][j] = ⟨α_i, α_j∨⟩`.
    pub fn cartan_pairing(&self) -> &Matrix {
        &self.pairing
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[Coweight] {
        &self.positive_coroots
    }

    /// Coefficients of positive root `k` in the simple roots.
    pub fn root_coefficients(&self, k: usize) -> &[i64] {
        &self.root_coeffs[k]
    }

    pub fn positive_root_index(&self, beta: &Weight) -> Option<usize> {
        self.root_index.get(beta).copied()
    }

    pub fn two_rho(&self) -> &Weight {
        &self.two_rho
    }

    /// Sum of the positive coroots.
    pub fn two_rho_check(&self) -> &Coweight {
        &self.two_rho_check
    }

    pub fn weyl(&self) -> &[FiniteWeylElement] {
        &self.weyl
    }

    pub fn weyl_element(&self, w: usize) -> &FiniteWeylElement {
        &self.weyl[w]
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn simple_reflection(&self, i: usize) -> usize {
        self.simple_reflections[i]
    }

    pub fn weyl_mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.weyl.len() + b]
    }

    pub fn weyl_inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `w(β_k) = ±β_j`, returned as `(j, negative)`.
    pub fn act_on_root(&self, w: usize, k: usize) -> (usize, bool) {
        self.root_action[w][k]
    }

    /// Index of the element built from a word of simple-reflection indices.
    pub fn weyl_from_word(&self, word: &[usize]) -> usize {
        word.iter()
            .fold(0, |acc, &i| self.weyl_mul(acc, self.simple_reflections[i]))
    }

    /// Index of the reflection `s_β` for positive root `k`.
    pub fn reflection_of_root(&self, k: usize) -> usize {
        let beta = &self.positive_roots[k];
        let beta_c = &self.positive_coroots[k];
        let n = self.rank();
        let m: Matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j) - beta_c.0[i] * beta.0[j]).collect())
            .collect();
        self.weyl
            .iter()
            .find(|w| w.coweight_matrix == m)
            .expect("root reflection lies in W₀")
            .index
    }

    /// Simple-root index sets of the irreducible components.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Positive-root index of the highest root of each component.
    pub fn highest_roots(&self) -> &[usize] {
        &self.highest_roots
    }

    pub fn act(&self, w: usize, v: &Coweight) -> Coweight {
        self.weyl[w].act(v)
    }

    pub fn act_weight(&self, w: usize, x: &Weight) -> Weight {
        self.weyl[w].act_weight(x)
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, w: usize) -> usize {
        self.root_action[w].iter().filter(|(_, neg)| *neg).count()
    }

    /// Elements of the parabolic subgroup `W_J`, in list order.
    pub fn parabolic_subgroup(&self, levi: &LeviSubset) -> Vec<usize> {
        self.weyl
            .iter()
            .filter(|w| w.word.iter().all(|&i| levi.contains(i)))
            .map(|w| w.index)
            .collect()
    }

    /// Positive roots in the span of `{α_j : j ∈ J}`.
    pub fn levi_positive_roots(&self, levi: &LeviSubset) -> Vec<usize> {
        (0..self.positive_roots.len())
            .filter(|&k| {
                self.root_coeffs[k]
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || levi.contains(i))
            })
            .collect()
    }

    pub fn is_dominant(&self, v: &Coweight) -> bool {
        self.is_levi_dominant(v, &LeviSubset::full(self.num_simple()))
    }

    pub fn is_levi_dominant(&self, v: &Coweight, levi: &LeviSubset) -> bool {
        levi.iter().all(|j| self.simple_root(j).pair(v) >= 0)
    }

    pub fn is_weight_dominant(&self, x: &Weight) -> bool {
        (0..self.num_simple()).all(|j| x.pair(self.simple_coroot(j)) >= 0)
    }

    /// `J`-dominant representative `vd = u(v)` with `u ∈ W_J` of minimal length.
    pub fn dominant_rep(&self, v: &Coweight, levi: &LeviSubset) -> (Coweight, usize) {
        let mut v = v.clone();
        let mut u = self.identity();
        while let Some(j) = levi.iter().find(|&j| self.simple_root(j).pair(&v) < 0) {
            let s = self.simple_reflections[j];
            v = self.act(s, &v);
            u = self.weyl_mul(s, u);
        }
        (v, u)
    }

    /// Dominant representative of a character under the contragredient action.
    pub fn dominant_weight_rep(&self, x: &Weight, levi: &LeviSubset) -> (Weight, usize) {
        let mut x = x.clone();
        let mut u = self.identity();
        while let Some(j) = levi.iter().find(|&j| x.pair(self.simple_coroot(j)) < 0) {
            let s = self.simple_reflections[j];
            x = self.act_weight(s, &x);
            u = self.weyl_mul(s, u);
        }
        (x, u)
    }

    /// Simple reflections fixing a dominant `mu`.
    pub fn stabilizer_simple(&self, mu: &Coweight) -> LeviSubset {
        LeviSubset::from_indices((0..self.num_simple()).filter(|&i| self.simple_root(i).pair(mu) == 0))
    }

    /// Minimal-length representatives of `W₀ / W_{0,μ}`, sorted by
    /// `(length, word)`.
    pub fn min_coset_reps_stab(&self, mu: &Coweight) -> Result<Vec<usize>, RootDatumError> {
        if !self.is_dominant(mu) {
            return Err(RootDatumError::NotDominant(mu.clone()));
        }
        let stab = self.stabilizer_simple(mu);
        Ok(self
            .weyl
            .iter()
            .filter(|w| {
                stab.iter().all(|i| {
                    let ws = self.weyl_mul(w.index, self.simple_reflections[i]);
                    self.weyl[ws].length > w.length
                })
            })
            .map(|w| w.index)
            .collect())
    }

    /// The `W₀`-orbit of `v`, sorted.
    pub fn orbit(&self, v: &Coweight) -> Vec<Coweight> {
        let set: BTreeSet<Coweight> = self.weyl.iter().map(|w| w.act(v)).collect();
        set.into_iter().collect()
    }

    /// Coordinates of `v` in the simple coroots, if `v` lies in the coroot lattice.
    pub fn coroot_coords(&self, v: &Coweight) -> Option<Vec<i64>> {
        let b: Vec<i64> = self.spec.simple_roots.iter().map(|a| a.pair(v)).collect();
        // Σ_i c_i ⟨α_j, α_i∨⟩ = ⟨α_j, v⟩, i.e. P c = b.
        let c = solve_integral(&self.pairing_inv, &b)?;
        let back = c
            .iter()
            .zip(&self.spec.simple_coroots)
            .fold(Coweight::zero(self.rank()), |acc, (&ci, a)| &acc + &a.scaled(ci));
        (back == *v).then_some(c)
    }

    /// Coordinates of `x` in the simple roots, if `x` lies in the root lattice.
    pub fn root_coords(&self, x: &Weight) -> Option<Vec<i64>> {
        let b: Vec<i64> = self.spec.simple_coroots.iter().map(|c| x.pair(c)).collect();
        // Σ_i c_i ⟨α_i, α_j∨⟩ = ⟨x, α_j∨⟩, i.e. Pᵀ c = b.
        let inv_t: Vec<Vec<Rational64>> = (0..b.len())
            .map(|i| (0..b.len()).map(|j| self.pairing_inv[j][i]).collect())
            .collect();
        let c = solve_integral(&inv_t, &b)?;
        let back = c
            .iter()
            .zip(&self.spec.simple_roots)
            .fold(Weight::zero(self.rank()), |acc, (&ci, a)| &acc + &a.scaled(ci));
        (back == *x).then_some(c)
    }

    /// Rational coordinates `c` with `⟨α_j, Σ c_i α_i∨⟩ = b_j`.
    pub(crate) fn coroot_coords_from_pairings(&self, b: &[Rational64]) -> Vec<Rational64> {
        self.pairing_inv
            .iter()
            .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// `v1 ⪯ v2`: returns `Some(ht(v2 - v1))` when `v2 - v1` is a
    /// nonnegative integer combination of simple coroots.
    pub fn dominance_leq(&self, v1: &Coweight, v2: &Coweight) -> Option<i64> {
        let d = v2 - v1;
        let c = self.coroot_coords(&d)?;
        if c.iter().any(|&x| x < 0) {
            return None;
        }
        let twice = self.two_rho.pair(&d);
        assert!(twice % 2 == 0, "⟨2ρ, {d}⟩ is odd on the coroot cone");
        debug_assert_eq!(twice / 2, c.iter().sum::<i64>());
        Some(twice / 2)
    }

    /// `λ₁ ⪯ λ₂` on the character side (nonnegative root combination).
    pub fn weight_leq(&self, x1: &Weight, x2: &Weight) -> bool {
        self.root_coords(&(x2 - x1)).is_some_and(|c| c.iter().all(|&x| x >= 0))
    }

    /// Dominant coweights with `⟨2ρ, μ⟩ ≤ bound`, one per class modulo the
    /// center: coordinates past the semisimple rank are fixed at zero. Sorted by
    /// `(⟨2ρ, μ⟩, μ)`.
    pub fn dominant_coweights(&self, bound: i64) -> Vec<Coweight> {
        let n = self.num_simple();
        let lead: Matrix = (0..n).map(|i| self.simple_root(i).0[..n].to_vec()).collect();
        let Some(inv) = rational_inverse(&lead) else {
            return vec![];
        };
        let weights = self.root_coords(&self.two_rho).expect("2ρ lies in the root lattice");
        let mut out = vec![];
        let mut a = vec![0i64; n];
        fn rec(
            r: &RootDatum,
            inv: &[Vec<Rational64>],
            weights: &[i64],
            a: &mut Vec<i64>,
            i: usize,
            left: i64,
            out: &mut Vec<Coweight>,
        ) {
            if i == a.len() {
                if let Some(head) = solve_integral(inv, a) {
                    let mut v = head;
                    v.resize(r.rank(), 0);
                    out.push(Coweight(v));
                }
                return;
            }
            let mut k = 0;
            while k * weights[i] <= left {
                a[i] = k;
                rec(r, inv, weights, a, i + 1, left - k * weights[i], out);
                k += 1;
            }
            a[i] = 0;
        }
        rec(self, &inv, &weights, &mut a, 0, bound, &mut out);
        out.sort_by_key(|v| (self.two_rho.pair(v), v.clone()));
        debug_assert!(out.iter().all(|v| self.is_dominant(v)));
        out
    }

    /// `⟨ρ, v⟩`, asserting integrality.
    pub fn rho_pairing(&self, v: &Coweight) -> Option<i64> {
        let twice = self.two_rho.pair(v);
        (twice % 2 == 0).then_some(twice / 2)
    }
}

fn rational_inverse(m: &Matrix) -> Option<Vec<Vec<Rational64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&x| Rational64::from_integer(x))
                .chain((0..n).map(|j| Rational64::from_integer(i64::from(i == j))))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != Rational64::from_integer(0))?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            let f = row[col];
            if r != col && f != Rational64::from_integer(0) {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn solve_integral(inv: &[Vec<Rational64>], b: &[i64]) -> Option<Vec<i64>> {
    inv.iter()
        .map(|row| {
            let x: Rational64 = row.iter().zip(b).map(|(r, &y)| r * Rational64::from_integer(y)).sum();
            x.is_integer().then(|| x.to_integer())
        })
        .collect()
}

type RootTriple = (Vec<Weight>, Vec<Coweight>, Vec<Vec<i64>>);

fn generate_roots(spec: &RootDatumSpec, pairing: &Matrix) -> Result<RootTriple, RootDatumError> {
    let r = spec.simple_roots.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut all: Vec<(Weight, Coweight, Vec<i64>)> = Vec::new();
    let mut queue = VecDeque::new();
    for i in 0..r {
        let coeffs: Vec<i64> = (0..r).map(|k| i64::from(k == i)).collect();
        seen.insert(coeffs.clone());
        queue.push_back((spec.simple_roots[i].clone(), spec.simple_coroots[i].clone(), coeffs));
    }
    while let Some((b, bc, c)) = queue.pop_front() {
        for i in 0..r {
            let k = b.pair(&spec.simple_coroots[i]);
            let kc = spec.simple_roots[i].pair(&bc);
            let nb = &b - &spec.simple_roots[i].scaled(k);
            let nbc = &bc - &spec.simple_coroots[i].scaled(kc);
            let mut nc = c.clone();
            nc[i] -= k;
            if seen.insert(nc.clone()) {
                if seen.len() > ROOT_CLOSURE_BOUND {
                    return Err(RootDatumError::NotFiniteType(
                        "reflection closure of the simple roots is too large".to_string(),
                    ));
                }
                queue.push_back((nb, nbc, nc));
            }
        }
        all.push((b, bc, c));
    }
    let _ = pairing;
    let mut pos: Vec<(Weight, Coweight, Vec<i64>)> =
        all.into_iter().filter(|(_, _, c)| c.iter().all(|&x| x >= 0)).collect();
    if pos.iter().any(|(_, _, c)| c.iter().any(|&x| x < 0)) {
        return Err(RootDatumError::NotFiniteType("mixed-sign root".to_string()));
    }
    pos.sort_by(|a, b| {
        let ha: i64 = a.2.iter().sum();
        let hb: i64 = b.2.iter().sum();
        ha.cmp(&hb).then_with(|| b.2.cmp(&a.2))
    });
    let mut roots = vec![];
    let mut coroots = vec![];
    let mut coeffs = vec![];
    for (b, bc, c) in pos {
        roots.push(b);
        coroots.push(bc);
        coeffs.push(c);
    }
    Ok((roots, coroots, coeffs))
}

fn generate_weyl(spec: &RootDatumSpec) -> Result<Vec<FiniteWeylElement>, RootDatumError> {
    let n = spec.rank;
    let r = spec.simple_roots.len();
    let gens: Vec<Matrix> = (0..r)
        .map(|i| {
            let a = &spec.simple_roots[i].0;
            let ac = &spec.simple_coroots[i].0;
            (0..n)
                .map(|row| (0..n).map(|col| i64::from(row == col) - ac[row] * a[col]).collect())
                .collect()
        })
        .collect();
    let id = identity(n);
    let mut seen: HashMap<Matrix, usize> = HashMap::from([(id.clone(), 0)]);
    let mut elems: Vec<(Matrix, Vec<usize>)> = vec![(id, vec![])];
    // Breadth-first with words extended on the right; processing each level in
    // lexicographic order makes the first word found the lex-smallest.
    let mut head = 0;
    while head < elems.len() {
        let (m, word) = elems[head].clone();
        head += 1;
        for (i, g) in gens.iter().enumerate() {
            let nm = mat_mul(&m, g);
            if !seen.contains_key(&nm) {
                let mut nw = word.clone();
                nw.push(i);
                seen.insert(nm.clone(), elems.len());
                elems.push((nm, nw));
                if elems.len() > WEYL_ORDER_BOUND {
                    return Err(RootDatumError::NotFiniteType("Weyl group is too large".to_string()));
                }
            }
        }
    }
    Ok(elems
        .into_iter()
        .enumerate()
        .map(|(index, (m, word))| {
            // The contragredient of w is (w⁻¹)ᵀ; W₀ matrices are unimodular.
            let weight_matrix = transpose(&integer_inverse(&m));
            FiniteWeylElement {
                index,
                length: word.len(),
                coweight_matrix: m,
                weight_matrix,
                word,
            }
        })
        .collect())
}

fn integer_inverse(m: &Matrix) -> Matrix {
    let inv = rational_inverse(m).expect("Weyl group matrices are invertible");
    inv.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    assert!(x.is_integer());
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    #[test]
    fn classification_sizes() {
        for (name, roots, order) in [
            ("A1", 1, 2),
            ("A2", 3, 6),
            ("A3", 6, 24),
            ("B2", 4, 8),
            ("C2", 4, 8),
            ("G2", 6, 12),
            ("GL2", 1, 2),
            ("GL3", 3, 6),
            ("GL4", 6, 24),
            ("B2sc", 4, 8),
        ] {
            let r = RootDatum::from_preset(name).unwrap();
            assert_eq!(r.positive_roots().len(), roots, "{name}");
            assert_eq!(r.weyl_order(), order, "{name}");
            for i in 0..r.num_simple() {
                assert_eq!(r.two_rho().pair(r.simple_coroot(i)), 2, "{name}");
            }
        }
    }

    #[test]
    fn presets_match_expected_rho() {
        let a2 = RootDatum::from_preset("A2").unwrap();
        assert_eq!(a2.two_rho(), &Weight(vec![2, 2]));
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        assert_eq!(gl3.rank(), 3);
        assert_eq!(gl3.num_simple(), 2);
        assert_eq!(gl3.two_rho(), &Weight(vec![2, 0, -2]));
        assert_eq!(gl3.two_rho().pair(&cw(&[3, 1, 0])), 6);
    }

    #[test]
    fn pairing_checks_rank() {
        assert_eq!(pair(&Weight(vec![1, 2]), &cw(&[3, 4])), Ok(11));
        assert!(matches!(
            pair(&Weight(vec![1]), &cw(&[3, 4])),
            Err(RootDatumError::RankMismatch { .. })
        ));
        let r = RootDatum::from_preset("G2").unwrap();
        for i in 0..2 {
            assert_eq!(r.simple_root(i).pair(r.simple_coroot(i)), 2);
            assert_eq!(r.simple_root(i).pair(&Coweight::zero(2)), 0);
        }
    }

    #[test]
    fn lengths_are_inversion_counts() {
        for name in PRESET_NAMES {
            let r = RootDatum::from_preset(name).unwrap();
            for w in r.weyl() {
                assert_eq!(w.length, r.inversion_count(w.index));
                assert_eq!(r.weyl_from_word(&w.word), w.index);
            }
        }
    }

    #[test]
    fn contragredient_compatibility() {
        for name in PRESET_NAMES {
            let r = RootDatum::from_preset(name).unwrap();
            let n = r.rank();
            let v = Coweight((0..n as i64).map(|k| 3 * k - 2).collect());
            let x = Weight((0..n as i64).map(|k| 5 - k * k).collect());
            for w in r.weyl() {
                let winv = r.weyl_inverse(w.index);
                assert_eq!(x.pair(&w.act(&v)), r.act_weight(winv, &x).pair(&v));
            }
        }
    }

    #[test]
    fn act_examples() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let s1 = gl3.simple_reflection(0);
        assert_eq!(gl3.act(s1, &cw(&[3, 1, 0])), cw(&[1, 3, 0]));
        assert_eq!(gl3.act(0, &cw(&[3, 1, 0])), cw(&[3, 1, 0]));
        let a1 = RootDatum::from_preset("A1").unwrap();
        let ac = a1.simple_coroot(0).clone();
        assert_eq!(a1.act(a1.simple_reflection(0), &ac), -&ac);
    }

    #[test]
    fn dominant_rep_examples() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let full = LeviSubset::full(2);
        let (vd, u) = gl3.dominant_rep(&cw(&[0, 1, 3]), &full);
        assert_eq!(vd, cw(&[3, 1, 0]));
        assert_eq!(gl3.act(u, &cw(&[0, 1, 3])), vd);
        let (vd, u) = gl3.dominant_rep(&cw(&[3, 1, 0]), &full);
        assert_eq!((vd, u), (cw(&[3, 1, 0]), 0));
        let a1 = RootDatum::from_preset("A1").unwrap();
        let ac = a1.simple_coroot(0).clone();
        let (vd, u) = a1.dominant_rep(&-&ac, &LeviSubset::full(1));
        assert_eq!(vd, ac);
        assert_eq!(u, a1.simple_reflection(0));
    }

    #[test]
    fn dominant_rep_is_minimal_in_levi() {
        for name in ["A2", "B2", "G2", "GL3", "A3"] {
            let r = RootDatum::from_preset(name).unwrap();
            let n = r.rank() as i64;
            for levi in LeviSubset::all(r.num_simple()) {
                let wj = r.parabolic_subgroup(&levi);
                for seed in 0..20i64 {
                    let v = Coweight((0..n).map(|k| (seed * (k + 3) % 7) - 3).collect());
                    let (vd, u) = r.dominant_rep(&v, &levi);
                    assert!(r.is_levi_dominant(&vd, &levi));
                    let best = wj
                        .iter()
                        .filter(|&&w| r.is_levi_dominant(&r.act(w, &v), &levi))
                        .map(|&w| r.weyl_element(w).length)
                        .min()
                        .unwrap();
                    assert_eq!(r.weyl_element(u).length, best);
                    let (again, u2) = r.dominant_rep(&vd, &levi);
                    assert_eq!((again, u2), (vd, 0));
                }
            }
        }
    }

    #[test]
    fn coset_reps() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let mu = cw(&[3, 1, 0]);
        let reps = gl3.min_coset_reps_stab(&mu).unwrap();
        assert_eq!(reps.len(), 6);
        assert_eq!(gl3.min_coset_reps_stab(&cw(&[0, 0, 0])).unwrap(), vec![0]);
        assert!(matches!(
            gl3.min_coset_reps_stab(&cw(&[0, 1, 3])),
            Err(RootDatumError::NotDominant(_))
        ));
        for name in ["A2", "B2", "G2", "A3"] {
            let r = RootDatum::from_preset(name).unwrap();
            for mu in [cw(&vec![1; r.rank()]), {
                let mut v = vec![0; r.rank()];
                v[0] = 2;
                cw(&v)
            }] {
                let reps = r.min_coset_reps_stab(&mu).unwrap();
                let images: BTreeSet<Coweight> = reps.iter().map(|&w| r.act(w, &mu)).collect();
                assert_eq!(images.len(), reps.len());
                assert_eq!(images.into_iter().collect::<Vec<_>>(), r.orbit(&mu));
            }
        }
    }

    #[test]
    fn dominance_examples() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        assert_eq!(gl3.dominance_leq(&cw(&[1, 1, 2]), &cw(&[3, 1, 0])), Some(4));
        assert_eq!(gl3.dominance_leq(&cw(&[3, 1, 0]), &cw(&[3, 1, 0])), Some(0));
        // Different central character.
        assert_eq!(gl3.dominance_leq(&cw(&[1, 1, 1]), &cw(&[3, 1, 0])), None);
        let a1 = RootDatum::from_preset("A1").unwrap();
        assert_eq!(a1.dominance_leq(a1.simple_coroot(0), &Coweight::zero(1)), None);
    }

    #[test]
    fn highest_roots() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let h = gl3.highest_roots()[0];
        assert_eq!(gl3.positive_roots()[h], Weight(vec![1, 0, -1]));
        let g2 = RootDatum::from_preset("G2").unwrap();
        assert_eq!(g2.root_coefficients(g2.highest_roots()[0]), &[3, 2]);
        let b2 = RootDatum::from_preset("B2").unwrap();
        assert_eq!(b2.root_coefficients(b2.highest_roots()[0]), &[1, 2]);
    }

    #[test]
    fn rejects_bad_specs() {
        let bad = RootDatumSpec {
            name: None,
            rank: 1,
            simple_roots: vec![Weight(vec![1])],
            simple_coroots: vec![Coweight(vec![1])],
        };
        assert!(matches!(
            RootDatum::new(bad),
            Err(RootDatumError::DualityMismatch { .. })
        ));
        // Affine A1: ⟨α_i, α_j∨⟩ = -2 both ways has infinite closure.
        let affine = RootDatumSpec {
            name: None,
            rank: 2,
            simple_roots: vec![Weight(vec![1, 0]), Weight(vec![0, 1])],
            simple_coroots: vec![Coweight(vec![2, -2]), Coweight(vec![-2, 2])],
        };
        assert!(matches!(RootDatum::new(affine), Err(RootDatumError::NotFiniteType(_))));
        assert!(matches!(
            RootDatum::from_preset("E8"),
            Err(RootDatumError::UnknownPreset(_))
        ));
    }

    #[test]
    fn double_dual() {
        for name in PRESET_NAMES {
            let r = RootDatum::from_preset(name).unwrap();
            let dd = r.dual().dual();
            assert_eq!(dd.spec().simple_roots, r.spec().simple_roots);
            assert_eq!(dd.spec().simple_coroots, r.spec().simple_coroots);
            assert_eq!(r.dual().positive_roots().len(), r.positive_roots().len());
        }
    }
}
