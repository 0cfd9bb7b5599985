//! The extended affine Weyl group `W = X_*(T) ⋊ W₀` acting on the apartment.
//!
//! Alcoves are never built as polytopes. The alcove `x(𝐚)` is tracked through
//! the image of one interior point `p₀` of the base alcove, kept as an integer
//! vector `D·p₀` so every side test is an integer comparison.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::root_datum::{Coweight, RootDatum};

/// `(λ, w)` acting by `v ↦ w(v) + λ`; `finite` indexes `RootDatum::weyl()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtAffineElement {
    pub translation: Coweight,
    pub finite: usize,
}

/// A simple affine reflection: a finite `s_i` or the `s₀` of one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleAffineReflection {
    Finite(usize),
    Affine(usize),
}

impl SimpleAffineReflection {
    /// Display form: `s1`, `s2`, .. for finite letters, `s0` (or `s0@c` when
    /// there is more than one component).
    pub fn label(&self, num_components: usize) -> String {
        match *self {
            Self::Finite(i) => format!("s{}", i + 1),
            Self::Affine(c) if num_components > 1 => format!("s0@{}", c + 1),
            Self::Affine(_) => "s0".to_string(),
        }
    }
}

impl FromStr for SimpleAffineReflection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('s')
            .ok_or_else(|| format!("letter `{s}` must start with `s`"))?;
        if let Some(c) = body.strip_prefix("0@") {
            let c: usize = c.parse().map_err(|_| format!("bad component in `{s}`"))?;
            if c == 0 {
                return Err(format!("components are 1-based in `{s}`"));
            }
            return Ok(Self::Affine(c - 1));
        }
        match body.parse::<usize>() {
            Ok(0) => Ok(Self::Affine(0)),
            Ok(i) => Ok(Self::Finite(i - 1)),
            Err(_) => Err(format!("bad letter `{s}`")),
        }
    }
}

/// `H(β, k) = {v : ⟨β, v⟩ = k}` with `β = positive_roots()[root]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineHyperplane {
    pub root: usize,
    pub level: i64,
}

impl AffineHyperplane {
    /// Normalizes `(±β, k)` so the root is positive.
    pub fn normalized(root: usize, negative: bool, level: i64) -> Self {
        if negative {
            Self { root, level: -level }
        } else {
            Self { root, level }
        }
    }
}

/// The exact point `numer / denom` of the apartment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ApartmentPoint {
    pub numer: Coweight,
    pub denom: i64,
}

impl ApartmentPoint {
    pub fn coords(&self) -> Vec<Rational64> {
        self.numer.0.iter().map(|&n| Rational64::new(n, self.denom)).collect()
    }
}

/// `letters` followed by the length-zero element `omega`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedWord {
    pub letters: Vec<SimpleAffineReflection>,
    pub omega: ExtAffineElement,
}

impl ReducedWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Affine Weyl group of a root datum together with the base point data.
#[derive(Clone, Debug)]
pub struct AffineWeyl<'r> {
    datum: &'r RootDatum,
    /// `D·p₀`.
    base_numer: Coweight,
    denom: i64,
    /// Positive-root index of `θ̃_c` per component.
    highest: Vec<usize>,
}

impl<'r> AffineWeyl<'r> {
    pub fn new(datum: &'r RootDatum) -> Self {
        let comps = datum.components();
        let mut comp_of = vec![0; datum.num_simple()];
        for (c, comp) in comps.iter().enumerate() {
            for &i in comp {
                comp_of[i] = c;
            }
        }
        let highest: Vec<usize> = datum.highest_roots().to_vec();
        // ⟨α_j, p₀⟩ = 1/h_c with h_c = ht(θ̃_c) + 1, so 0 < ⟨β, p₀⟩ < 1 on Φ⁺.
        let b: Vec<Rational64> = (0..datum.num_simple())
            .map(|j| {
                let h: i64 = datum.root_coefficients(highest[comp_of[j]]).iter().sum();
                Rational64::new(1, h + 1)
            })
            .collect();
        let c = datum.coroot_coords_from_pairings(&b);
        let p0: Vec<Rational64> = (0..datum.rank())
            .map(|k| {
                c.iter()
                    .enumerate()
                    .map(|(i, ci)| ci * Rational64::from_integer(datum.simple_coroot(i).0[k]))
                    .sum()
            })
            .collect();
        let denom = p0.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
        let base_numer = Coweight(
            p0.iter()
                .map(|x| (x * Rational64::from_integer(denom)).to_integer())
                .collect(),
        );
        for beta in datum.positive_roots() {
            let v = beta.pair(&base_numer);
            assert!(0 < v && v < denom, "base point is not interior");
        }
        Self {
            datum,
            base_numer,
            denom,
            highest,
        }
    }

    pub fn datum(&self) -> &'r RootDatum {
        self.datum
    }

    pub fn num_components(&self) -> usize {
        self.highest.len()
    }

    /// Interior point `p₀` of the base alcove.
    pub fn base_point(&self) -> ApartmentPoint {
        ApartmentPoint {
            numer: self.base_numer.clone(),
            denom: self.denom,
        }
    }

    pub fn identity(&self) -> ExtAffineElement {
        ExtAffineElement {
            translation: Coweight::zero(self.datum.rank()),
            finite: self.datum.identity(),
        }
    }

    /// `t_{−λ}`, the element acting by translation by `−λ`.
    pub fn translation_of(&self, lam: &Coweight) -> ExtAffineElement {
        self.raw_translation(&-lam)
    }

    /// `t_λ`, translation by `+λ`.
    pub fn raw_translation(&self, lam: &Coweight) -> ExtAffineElement {
        ExtAffineElement {
            translation: lam.clone(),
            finite: self.datum.identity(),
        }
    }

    pub fn finite(&self, w: usize) -> ExtAffineElement {
        ExtAffineElement {
            translation: Coweight::zero(self.datum.rank()),
            finite: w,
        }
    }

    pub fn mul(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> ExtAffineElement {
        ExtAffineElement {
            translation: &x.translation + &self.datum.act(x.finite, &y.translation),
            finite: self.datum.weyl_mul(x.finite, y.finite),
        }
    }

    pub fn inverse(&self, x: &ExtAffineElement) -> ExtAffineElement {
        let winv = self.datum.weyl_inverse(x.finite);
        ExtAffineElement {
            translation: -&self.datum.act(winv, &x.translation),
            finite: winv,
        }
    }

    pub fn act(&self, x: &ExtAffineElement, v: &Coweight) -> Coweight {
        &self.datum.act(x.finite, v) + &x.translation
    }

    /// Simple affine reflections in tie-break order: finite indices, then the
    /// `s₀` of each component.
    pub fn simple_reflections(&self) -> Vec<SimpleAffineReflection> {
        (0..self.datum.num_simple())
            .map(SimpleAffineReflection::Finite)
            .chain((0..self.highest.len()).map(SimpleAffineReflection::Affine))
            .collect()
    }

    pub fn reflection(&self, s: SimpleAffineReflection) -> ExtAffineElement {
        match s {
            SimpleAffineReflection::Finite(i) => self.finite(self.datum.simple_reflection(i)),
            SimpleAffineReflection::Affine(c) => {
                let k = self.highest[c];
                ExtAffineElement {
                    translation: self.datum.positive_coroots()[k].clone(),
                    finite: self.datum.reflection_of_root(k),
                }
            }
        }
    }

    /// The hyperplane fixed by `s`, a wall of the base alcove.
    pub fn base_wall(&self, s: SimpleAffineReflection) -> AffineHyperplane {
        match s {
            SimpleAffineReflection::Finite(i) => AffineHyperplane {
                root: self
                    .datum
                    .positive_root_index(self.datum.simple_root(i))
                    .expect("simple roots are positive"),
                level: 0,
            },
            SimpleAffineReflection::Affine(c) => AffineHyperplane {
                root: self.highest[c],
                level: 1,
            },
        }
    }

    pub fn label(&self, s: SimpleAffineReflection) -> String {
        s.label(self.num_components())
    }

    pub fn parse_letter(&self, s: &str) -> Result<SimpleAffineReflection, String> {
        let letter: SimpleAffineReflection = s.parse()?;
        let ok = match letter {
            SimpleAffineReflection::Finite(i) => i < self.datum.num_simple(),
            SimpleAffineReflection::Affine(c) => c < self.num_components(),
        };
        if ok {
            Ok(letter)
        } else {
            Err(format!("letter `{s}` is out of range for this datum"))
        }
    }

    /// `D·x(p₀)`.
    pub fn scaled_image(&self, x: &ExtAffineElement) -> Coweight {
        &self.datum.act(x.finite, &self.base_numer) + &x.translation.scaled(self.denom)
    }

    pub fn image_of_base_point(&self, x: &ExtAffineElement) -> ApartmentPoint {
        ApartmentPoint {
            numer: self.scaled_image(x),
            denom: self.denom,
        }
    }

    /// `⌊⟨β, x(p₀)⟩⌋` for every positive root.
    fn floors(&self, x: &ExtAffineElement) -> impl Iterator<Item = i64> + '_ {
        let img = self.scaled_image(x);
        let d = self.denom;
        self.datum
            .positive_roots()
            .iter()
            .map(move |b| b.pair(&img).div_euclid(d))
    }

    /// Number of affine hyperplanes separating `x(𝐚)` from `𝐚`.
    pub fn length(&self, x: &ExtAffineElement) -> usize {
        self.floors(x).map(|f| f.unsigned_abs() as usize).sum()
    }

    /// Number of affine hyperplanes separating `x(𝐚)` from the dominant chamber.
    pub fn separating_count_from_chamber(&self, x: &ExtAffineElement) -> usize {
        self.floors(x).map(|f| (-f).max(0) as usize).sum()
    }

    /// Greedy left-descent stripping with the fixed tie-break order.
    pub fn reduced_word(&self, x: &ExtAffineElement) -> ReducedWord {
        let gens: Vec<(SimpleAffineReflection, ExtAffineElement)> = self
            .simple_reflections()
            .into_iter()
            .map(|s| (s, self.reflection(s)))
            .collect();
        let mut letters = vec![];
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        while len > 0 {
            let (s, next) = gens
                .iter()
                .map(|(s, g)| (*s, self.mul(g, &cur)))
                .find(|(_, y)| self.length(y) < len)
                .expect("an element of positive length has a left descent");
            letters.push(s);
            cur = next;
            len -= 1;
        }
        ReducedWord { letters, omega: cur }
    }

    /// Every reduced word of `x`, in lexicographic order of the tie-break.
    pub fn all_reduced_words(&self, x: &ExtAffineElement) -> Vec<ReducedWord> {
        let gens: Vec<(SimpleAffineReflection, ExtAffineElement)> = self
            .simple_reflections()
            .into_iter()
            .map(|s| (s, self.reflection(s)))
            .collect();
        let mut memo: HashMap<ExtAffineElement, Vec<Vec<SimpleAffineReflection>>> = HashMap::new();
        let omega = self.reduced_word(x).omega;
        self.words_rec(x, &gens, &mut memo)
            .into_iter()
            .map(|letters| ReducedWord {
                letters,
                omega: omega.clone(),
            })
            .collect()
    }

    fn words_rec(
        &self,
        x: &ExtAffineElement,
        gens: &[(SimpleAffineReflection, ExtAffineElement)],
        memo: &mut HashMap<ExtAffineElement, Vec<Vec<SimpleAffineReflection>>>,
    ) -> Vec<Vec<SimpleAffineReflection>> {
        if let Some(v) = memo.get(x) {
            return v.clone();
        }
        let len = self.length(x);
        let out = if len == 0 {
            vec![vec![]]
        } else {
            let mut out = vec![];
            for (s, g) in gens {
                let y = self.mul(g, x);
                if self.length(&y) < len {
                    for tail in self.words_rec(&y, gens, memo) {
                        let mut w = Vec::with_capacity(len);
                        w.push(*s);
                        w.extend(tail);
                        out.push(w);
                    }
                }
            }
            out
        };
        memo.insert(x.clone(), out.clone());
        out
    }

    pub fn evaluate(&self, word: &ReducedWord) -> ExtAffineElement {
        let prod = word
            .letters
            .iter()
            .fold(self.identity(), |acc, &s| self.mul(&acc, &self.reflection(s)));
        self.mul(&prod, &word.omega)
    }

    /// The minimal-length element of `x W₀`.
    pub fn right_w0_minimal(&self, x: &ExtAffineElement) -> ExtAffineElement {
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        'outer: loop {
            for i in 0..self.datum.num_simple() {
                let y = self.mul(&cur, &self.finite(self.datum.simple_reflection(i)));
                let ly = self.length(&y);
                if ly < len {
                    cur = y;
                    len = ly;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// The wall `x(H_s)` of the alcove `x(𝐚)`.
    pub fn wall_hyperplane(&self, x: &ExtAffineElement, s: SimpleAffineReflection) -> AffineHyperplane {
        let h = self.base_wall(s);
        let (j, negative) = self.datum.act_on_root(x.finite, h.root);
        // ⟨w(β₀), λ⟩ with w(β₀) = ±β_j.
        let shift = self.datum.positive_roots()[j].pair(&x.translation);
        let shift = if negative { -shift } else { shift };
        AffineHyperplane::normalized(j, negative, h.level + shift)
    }

    /// Sign of `⟨β, x(p₀)⟩ − k`; never zero for a valid alcove image.
    pub fn side_of(&self, x: &ExtAffineElement, h: &AffineHyperplane) -> std::cmp::Ordering {
        let v = self.datum.positive_roots()[h.root].pair(&self.scaled_image(x));
        v.cmp(&(h.level * self.denom))
    }

    /// Elements of length `≤ max_len` reachable from the identity with simple
    /// affine reflections, keyed by breadth-first distance.
    pub fn ball(&self, max_len: usize) -> Vec<(ExtAffineElement, usize)> {
        let gens: Vec<ExtAffineElement> = self
            .simple_reflections()
            .into_iter()
            .map(|s| self.reflection(s))
            .collect();
        let mut seen: BTreeSet<ExtAffineElement> = BTreeSet::from([self.identity()]);
        let mut out = vec![(self.identity(), 0)];
        let mut frontier = vec![self.identity()];
        for d in 1..=max_len {
            let mut next = vec![];
            for x in &frontier {
                for g in &gens {
                    let y = self.mul(x, g);
                    if seen.insert(y.clone()) {
                        out.push((y.clone(), d));
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    pub fn word_labels(&self, word: &ReducedWord) -> Vec<String> {
        word.letters.iter().map(|&s| self.label(s)).collect()
    }

    pub fn format_word(&self, word: &ReducedWord) -> String {
        let mut s: String = word.letters.iter().map(|&l| self.label(l)).collect();
        if s.is_empty() {
            s.push('e');
        }
        if word.omega != self.identity() {
            s.push('τ');
        }
        s
    }
}

impl fmt::Display for ExtAffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t{}, w#{})", self.translation, self.finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SimpleAffineReflection::{Affine, Finite};

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    #[test]
    fn base_point_examples() {
        let a1 = RootDatum::from_preset("A1").unwrap();
        let aw = AffineWeyl::new(&a1);
        let p = aw.base_point();
        assert_eq!(
            Rational64::new(a1.simple_root(0).pair(&p.numer), p.denom),
            Rational64::new(1, 2)
        );
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let aw = AffineWeyl::new(&gl3);
        assert_eq!(
            aw.base_point().coords(),
            vec![Rational64::new(1, 3), Rational64::new(0, 1), Rational64::new(-1, 3)]
        );
        for name in crate::root_datum::PRESET_NAMES {
            let r = RootDatum::from_preset(name).unwrap();
            let aw = AffineWeyl::new(&r);
            let p = aw.base_point();
            for b in r.positive_roots() {
                let v = b.pair(&p.numer);
                assert!(0 < v && v < p.denom, "{name}");
            }
        }
    }

    #[test]
    fn translations() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let aw = AffineWeyl::new(&gl3);
        assert_eq!(aw.translation_of(&cw(&[0, 0, 0])), aw.identity());
        assert_eq!(aw.translation_of(&cw(&[3, 1, 0])).translation, cw(&[-3, -1, 0]));
        let a = cw(&[2, 0, 1]);
        let b = cw(&[1, 5, -2]);
        assert_eq!(
            aw.mul(&aw.translation_of(&a), &aw.translation_of(&b)),
            aw.translation_of(&(&a + &b))
        );
    }

    #[test]
    fn length_examples() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let aw = AffineWeyl::new(&gl3);
        assert_eq!(aw.length(&aw.identity()), 0);
        let t = aw.translation_of(&cw(&[3, 1, 0]));
        assert_eq!(aw.length(&t), 6);
        let w = aw.reduced_word(&t);
        assert_eq!(w.len(), 6);
        assert_eq!(aw.length(&w.omega), 0);
        assert_eq!(aw.evaluate(&w), t);
        // Coordinate sum is a homomorphism killing W_aff, so τ carries all of it.
        assert_eq!(w.omega.translation.0.iter().sum::<i64>(), -4);
        let a1 = RootDatum::from_preset("A1").unwrap();
        let aw = AffineWeyl::new(&a1);
        let t = aw.translation_of(a1.simple_coroot(0));
        assert_eq!(aw.length(&t), 2);
        let w = aw.reduced_word(&t);
        assert_eq!(w.letters, vec![Finite(0), Affine(0)]);
        assert_eq!(w.omega, aw.identity());
    }

    #[test]
    fn wall_examples() {
        let a1 = RootDatum::from_preset("A1").unwrap();
        let aw = AffineWeyl::new(&a1);
        let e = aw.identity();
        assert_eq!(
            aw.wall_hyperplane(&e, Finite(0)),
            AffineHyperplane { root: 0, level: 0 }
        );
        assert_eq!(
            aw.wall_hyperplane(&e, Affine(0)),
            AffineHyperplane { root: 0, level: 1 }
        );
        let s1 = aw.reflection(Finite(0));
        assert_eq!(
            aw.wall_hyperplane(&s1, Affine(0)),
            AffineHyperplane { root: 0, level: -1 }
        );
    }

    #[test]
    fn walls_are_walls() {
        for name in ["A1", "A2", "B2", "G2", "GL3"] {
            let r = RootDatum::from_preset(name).unwrap();
            let aw = AffineWeyl::new(&r);
            for (x, _) in aw.ball(4) {
                for s in aw.simple_reflections() {
                    let h = aw.wall_hyperplane(&x, s);
                    let xs = aw.mul(&x, &aw.reflection(s));
                    assert_ne!(aw.side_of(&x, &h), aw.side_of(&xs, &h));
                    assert_ne!(aw.side_of(&x, &h), std::cmp::Ordering::Equal);
                }
            }
        }
    }

    #[test]
    fn geometric_length_matches_word_length() {
        for name in ["A1", "A2", "B2", "G2", "GL3"] {
            let r = RootDatum::from_preset(name).unwrap();
            let aw = AffineWeyl::new(&r);
            for (x, d) in aw.ball(4) {
                assert_eq!(aw.length(&x), d, "{name} {x}");
            }
        }
    }

    #[test]
    fn length_parity_and_omega() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let aw = AffineWeyl::new(&gl3);
        let omega = aw.reduced_word(&aw.translation_of(&cw(&[1, 0, 0]))).omega;
        assert_eq!(aw.length(&omega), 0);
        for (x, _) in aw.ball(4) {
            let l = aw.length(&x);
            assert_eq!(aw.length(&aw.mul(&x, &omega)), l);
            for s in aw.simple_reflections() {
                let ls = aw.length(&aw.mul(&x, &aw.reflection(s)));
                assert_eq!(ls.abs_diff(l), 1);
            }
        }
    }

    #[test]
    fn right_minimal_examples() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let aw = AffineWeyl::new(&gl3);
        let mu = cw(&[3, 1, 0]);
        let t = aw.translation_of(&mu);
        assert_eq!(aw.right_w0_minimal(&t), t);
        let s1 = gl3.simple_reflection(0);
        let x = aw.right_w0_minimal(&aw.translation_of(&gl3.act(s1, &mu)));
        assert_eq!(aw.length(&x), 5);
        let w0 = gl3.weyl_order() - 1;
        let x = aw.right_w0_minimal(&aw.translation_of(&gl3.act(w0, &mu)));
        assert_eq!(aw.length(&x), 3);
        assert_eq!(aw.format_word(&aw.reduced_word(&x)), "s0s1s2τ");
    }

    #[test]
    fn separation_examples() {
        let gl3 = RootDatum::from_preset("GL3").unwrap();
        let aw = AffineWeyl::new(&gl3);
        assert_eq!(aw.separating_count_from_chamber(&aw.identity()), 0);
        let mu = cw(&[3, 1, 0]);
        // ⟨ρ, μ + w(μ)⟩ over the orbit of (3,1,0).
        let mut counts: Vec<usize> = gl3
            .weyl()
            .iter()
            .map(|w| {
                let x = aw.right_w0_minimal(&aw.translation_of(&w.act(&mu)));
                let n = aw.separating_count_from_chamber(&x);
                let expect = gl3.rho_pairing(&(&mu + &w.act(&mu))).unwrap();
                assert_eq!(n as i64, expect);
                n
            })
            .collect();
        counts.sort_unstable();
        assert_eq!(counts, vec![0, 1, 2, 4, 5, 6]);
        assert_eq!(aw.separating_count_from_chamber(&aw.raw_translation(&mu)), 0);
    }

    #[test]
    fn round_trip_reduced_words() {
        for name in ["A1", "A2", "B2", "G2", "GL3"] {
            let r = RootDatum::from_preset(name).unwrap();
            let aw = AffineWeyl::new(&r);
            for (x, d) in aw.ball(6) {
                let w = aw.reduced_word(&x);
                assert_eq!(w.len(), d);
                assert_eq!(aw.evaluate(&w), x);
                for w in aw.all_reduced_words(&x) {
                    assert_eq!(aw.evaluate(&w), x);
                }
            }
        }
    }

    #[test]
    fn letter_parsing() {
        assert_eq!("s1".parse::<SimpleAffineReflection>(), Ok(Finite(0)));
        assert_eq!("s0".parse::<SimpleAffineReflection>(), Ok(Affine(0)));
        assert_eq!("s0@2".parse::<SimpleAffineReflection>(), Ok(Affine(1)));
        assert!("t1".parse::<SimpleAffineReflection>().is_err());
        assert_eq!(Affine(1).label(2), "s0@2");
        assert_eq!(Affine(0).label(1), "s0");
    }
}
