//! Classical character computations for the dual group `Ĝ`.
//!
//! Everything here runs on the dual datum (roots and coroots exchanged) and
//! shares nothing with the walk code beyond the root-datum layer. Weights of
//! `Ĝ` are cocharacters of `T`, so the public API speaks in [`Coweight`]s.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::root_datum::{Coweight, LeviSubset, RootDatum, Weight};

/// Default cap on `⟨2ρ, μ⟩` for the partition-function oracle.
pub const KOSTANT_CAP: i64 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} is not dominant")]
    NotDominant(Coweight),
    #[error("⟨2ρ, μ⟩ = {value} exceeds the cap {cap}")]
    CapExceeded { value: i64, cap: i64 },
}

/// The root datum of `Ĝ`.
#[derive(Clone, Debug)]
pub struct DualDatum {
    datum: RootDatum,
}

impl DualDatum {
    pub fn of(r: &RootDatum) -> Self {
        Self { datum: r.dual() }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    /// The datum of `G` again.
    pub fn original(&self) -> RootDatum {
        self.datum.dual()
    }

    /// `2ρ̂`, the sum of the positive roots of `Ĝ`.
    pub fn two_rho(&self) -> Coweight {
        Coweight(self.datum.two_rho().0.clone())
    }

    fn to_weight(v: &Coweight) -> Weight {
        Weight(v.0.clone())
    }

    fn to_coweight(x: &Weight) -> Coweight {
        Coweight(x.0.clone())
    }

    fn is_dominant(&self, x: &Weight) -> bool {
        self.datum.is_weight_dominant(x)
    }

    /// `Q(x, y) = Σ_{γ∈Φ∨(Ĝ)} ⟨x,γ⟩⟨y,γ⟩`, summed over all (not just positive) coroots.
    fn form(&self, x: &Weight, y: &Weight) -> i64 {
        2 * self
            .datum
            .positive_coroots()
            .iter()
            .map(|g| x.pair(g) * y.pair(g))
            .sum::<i64>()
    }
}

/// Weight multiplicities of one irreducible `Ĝ`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub highest_weight: Coweight,
    mults: BTreeMap<Coweight, u64>,
}

impl CharacterTable {
    pub fn get(&self, lam: &Coweight) -> u64 {
        self.mults.get(lam).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coweight, u64)> {
        self.mults.iter().map(|(k, &v)| (k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = &Coweight> {
        self.mults.keys()
    }

    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn dimension(&self) -> u64 {
        self.mults.values().sum()
    }
}

/// Freudenthal's recursion, descending from `μ` by height.
pub fn freudenthal_character(d: &DualDatum, mu: &Coweight) -> Result<CharacterTable, OracleError> {
    let r = d.datum();
    let top = DualDatum::to_weight(mu);
    if !d.is_dominant(&top) {
        return Err(OracleError::NotDominant(mu.clone()));
    }
    let full = LeviSubset::full(r.num_simple());
    let in_support = |x: &Weight| {
        let (dom, _) = r.dominant_weight_rep(x, &full);
        r.weight_leq(&dom, &top)
    };

    // Breadth-first by subtracting simple roots visits weights in height order.
    let mut order: Vec<Weight> = vec![top.clone()];
    let mut seen: HashMap<Weight, usize> = HashMap::from([(top.clone(), 0)]);
    let mut queue = VecDeque::from([top.clone()]);
    while let Some(x) = queue.pop_front() {
        for i in 0..r.num_simple() {
            let y = &x - r.simple_root(i);
            if !seen.contains_key(&y) && in_support(&y) {
                seen.insert(y.clone(), order.len());
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }

    let two_rho = r.two_rho().clone();
    let casimir = |x: &Weight| d.form(x, x) + d.form(x, &two_rho);
    let c_top = casimir(&top);
    let mut mult: HashMap<Weight, u64> = HashMap::from([(top.clone(), 1)]);
    for lam in order.iter().skip(1) {
        let mut num: i64 = 0;
        for alpha in r.positive_roots() {
            let mut k = 1;
            loop {
                let x = lam + &alpha.scaled(k);
                match mult.get(&x) {
                    Some(&m) => num += m as i64 * d.form(&x, alpha),
                    None if seen.contains_key(&x) => unreachable!("height order violated"),
                    None => break,
                }
                k += 1;
            }
        }
        let denom = c_top - casimir(lam);
        assert!(denom > 0, "Freudenthal denominator vanished at {lam}");
        assert_eq!((2 * num) % denom, 0, "Freudenthal quotient not integral at {lam}");
        let m = 2 * num / denom;
        assert!(m >= 0);
        mult.insert(lam.clone(), m as u64);
    }
    Ok(CharacterTable {
        highest_weight: mu.clone(),
        mults: mult
            .into_iter()
            .filter(|&(_, m)| m > 0)
            .map(|(k, m)| (DualDatum::to_coweight(&k), m))
            .collect(),
    })
}

/// Kostant partition function over the positive roots of `Ĝ`, memoized.
struct Partitions {
    /// Positive roots in simple-root coordinates.
    roots: Vec<Vec<i64>>,
    memo: HashMap<(Vec<i64>, usize), u64>,
}

impl Partitions {
    fn new(r: &RootDatum) -> Self {
        Self {
            roots: (0..r.positive_roots().len())
                .map(|k| r.root_coefficients(k).to_vec())
                .collect(),
            memo: HashMap::new(),
        }
    }

    fn count(&mut self, v: &[i64], k: usize) -> u64 {
        if v.iter().any(|&c| c < 0) {
            return 0;
        }
        if k == self.roots.len() {
            return u64::from(v.iter().all(|&c| c == 0));
        }
        let key = (v.to_vec(), k);
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let mut total = 0;
        let mut cur = v.to_vec();
        while cur.iter().all(|&c| c >= 0) {
            total += self.count(&cur, k + 1);
            for (c, g) in cur.iter_mut().zip(&self.roots[k]) {
                *c -= g;
            }
        }
        self.memo.insert(key, total);
        total
    }
}

/// Kostant's alternating sum `Σ_w ε(w) P(w(μ+ρ̂) − (λ+ρ̂))`.
pub fn kostant_multiplicity(d: &DualDatum, mu: &Coweight, lam: &Coweight) -> Result<u64, OracleError> {
    kostant_multiplicity_capped(d, mu, lam, KOSTANT_CAP)
}

pub fn kostant_multiplicity_capped(d: &DualDatum, mu: &Coweight, lam: &Coweight, cap: i64) -> Result<u64, OracleError> {
    let r = d.datum();
    let mu_w = DualDatum::to_weight(mu);
    if !d.is_dominant(&mu_w) {
        return Err(OracleError::NotDominant(mu.clone()));
    }
    // ⟨2ρ, μ⟩ in terms of G, i.e. μ paired with the coroot sum of Ĝ.
    let value = mu_w.pair(r.two_rho_check());
    if value > cap {
        return Err(OracleError::CapExceeded { value, cap });
    }
    let lam_w = DualDatum::to_weight(lam);
    let two_rho = r.two_rho();
    let shifted_mu = &mu_w.scaled(2) + two_rho;
    let shifted_lam = &lam_w.scaled(2) + two_rho;
    let mut parts = Partitions::new(r);
    let mut total: i64 = 0;
    for w in r.weyl() {
        let twice = &w.act_weight(&shifted_mu) - &shifted_lam;
        if twice.0.iter().any(|c| c % 2 != 0) {
            continue;
        }
        let v = Weight(twice.0.iter().map(|c| c / 2).collect());
        if let Some(coords) = r.root_coords(&v) {
            let p = parts.count(&coords, 0) as i64;
            total += if w.length % 2 == 0 { p } else { -p };
        }
    }
    assert!(total >= 0, "Kostant sum negative");
    Ok(total as u64)
}

/// `[V_μ : V^M̂_λ] = Σ_{w∈W_M} ε(w) m_μ(w(λ+ρ̂_M) − ρ̂_M)`.
pub fn branching_oracle(d: &DualDatum, levi: &LeviSubset, mu: &Coweight, lam: &Coweight) -> Result<i64, OracleError> {
    let table = freudenthal_character(d, mu)?;
    Ok(branching_from_table(d, levi, &table, lam))
}

/// Branching with a precomputed character of `V_μ`.
pub fn branching_from_table(d: &DualDatum, levi: &LeviSubset, table: &CharacterTable, lam: &Coweight) -> i64 {
    let r = d.datum();
    let two_rho_m = r
        .levi_positive_roots(levi)
        .iter()
        .fold(Weight::zero(r.rank()), |acc, &k| &acc + &r.positive_roots()[k]);
    let shifted = &DualDatum::to_weight(lam).scaled(2) + &two_rho_m;
    let mut total = 0i64;
    for w in r.parabolic_subgroup(levi) {
        let twice = &r.act_weight(w, &shifted) - &two_rho_m;
        let x = Coweight(twice.0.iter().map(|c| c / 2).collect());
        let m = table.get(&x) as i64;
        total += if r.weyl_element(w).length.is_multiple_of(2) {
            m
        } else {
            -m
        };
    }
    total
}

/// `[V_μ ⊗ V_λ : V_ν] = Σ_w ε(w) m_μ(w(ν+ρ̂) − (λ+ρ̂))`.
pub fn tensor_oracle(d: &DualDatum, mu: &Coweight, lam: &Coweight, nu: &Coweight) -> Result<i64, OracleError> {
    let table = freudenthal_character(d, mu)?;
    for v in [lam, nu] {
        if !d.is_dominant(&DualDatum::to_weight(v)) {
            return Err(OracleError::NotDominant(v.clone()));
        }
    }
    Ok(tensor_from_table(d, &table, lam, nu))
}

pub fn tensor_from_table(d: &DualDatum, table: &CharacterTable, lam: &Coweight, nu: &Coweight) -> i64 {
    let r = d.datum();
    let two_rho = r.two_rho();
    let shifted_nu = &DualDatum::to_weight(nu).scaled(2) + two_rho;
    let shifted_lam = &DualDatum::to_weight(lam).scaled(2) + two_rho;
    let mut total = 0i64;
    for w in r.weyl() {
        let twice = &w.act_weight(&shifted_nu) - &shifted_lam;
        let x = Coweight(twice.0.iter().map(|c| c / 2).collect());
        let m = table.get(&x) as i64;
        total += if w.length % 2 == 0 { m } else { -m };
    }
    total
}

/// Weyl's dimension formula for `V^Ĝ_μ`.
pub fn weyl_dimension(d: &DualDatum, mu: &Coweight) -> Result<u64, OracleError> {
    let r = d.datum();
    if !d.is_dominant(&DualDatum::to_weight(mu)) {
        return Err(OracleError::NotDominant(mu.clone()));
    }
    Ok(weyl_dimension_levi(d, &LeviSubset::full(r.num_simple()), mu))
}

/// Dimension of the irreducible `M̂`-module of `M`-dominant highest weight `λ`.
pub fn weyl_dimension_levi(d: &DualDatum, levi: &LeviSubset, lam: &Coweight) -> u64 {
    let r = d.datum();
    let ks = r.levi_positive_roots(levi);
    let two_rho_m = ks
        .iter()
        .fold(Weight::zero(r.rank()), |acc, &k| &acc + &r.positive_roots()[k]);
    let shifted = &DualDatum::to_weight(lam).scaled(2) + &two_rho_m;
    let (mut num, mut den) = (1i128, 1i128);
    for &k in &ks {
        let g = &r.positive_coroots()[k];
        num *= i128::from(shifted.pair(g));
        den *= i128::from(two_rho_m.pair(g));
    }
    assert!(num % den == 0 && num >= 0, "Weyl dimension not a natural number");
    (num / den) as u64
}
