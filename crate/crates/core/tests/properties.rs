use std::collections::BTreeSet;

use alcove_core::affine_weyl::{AffineWeyl, ReducedWord};
use alcove_core::multiplicity::{
    branching_multiplicity, build_p_family, dimension_bound, maximal_family, weight_multiplicity, BranchingQuery,
};
use alcove_core::oracle::{freudenthal_character, DualDatum};
use alcove_core::root_datum::{Coweight, LeviSubset, RootDatum};
use alcove_core::walks::{
    cell_polynomial, classify_step, enumerate_folded_walks, replay, CellPolynomial, LabeledWalk, Orientation, StepKind,
    StepOptions, WalkConstraints,
};
use proptest::prelude::*;

const RANK2: &[&str] = &[
    "A1", "A1sc", "A2", "A2sc", "B2", "B2sc", "C2", "C2sc", "G2", "GL2", "GL3",
];

fn datum(name: &str) -> RootDatum {
    RootDatum::from_preset(name).unwrap()
}

fn levi_from_bits(r: &RootDatum, bits: u8) -> LeviSubset {
    LeviSubset::from_indices((0..r.num_simple()).filter(|i| bits >> i & 1 == 1))
}

/// Picks an element of length ≤ `max_len` and one of its reduced words.
fn pick_word(aw: &AffineWeyl<'_>, max_len: usize, elem: usize, word: usize) -> (ReducedWord, usize) {
    let ball = aw.ball(max_len);
    let (x, len) = &ball[elem % ball.len()];
    let words = aw.all_reduced_words(x);
    (words[word % words.len()].clone(), *len)
}

fn all_walks(aw: &AffineWeyl<'_>, word: &ReducedWord, o: &Orientation) -> Vec<LabeledWalk> {
    enumerate_folded_walks(aw, &aw.identity(), word, o, &WalkConstraints::default())
}

/// Every label sequence that replays legally, found by brute force over `3^r` sequences.
fn naive_walks(aw: &AffineWeyl<'_>, word: &ReducedWord, o: &Orientation) -> BTreeSet<Vec<StepKind>> {
    const KINDS: [StepKind; 3] = [
        StepKind::PositiveCrossing,
        StepKind::NegativeCrossing,
        StepKind::PositiveFolding,
    ];
    let r = word.len();
    let mut out = BTreeSet::new();
    for code in 0..3usize.pow(r as u32) {
        let kinds: Vec<StepKind> = (0..r).map(|i| KINDS[code / 3usize.pow(i as u32) % 3]).collect();
        if replay(aw, &aw.identity(), word, o, &kinds).is_ok() {
            out.insert(kinds);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn mass_identity_for_any_reduced_word(
        name in prop::sample::select(RANK2),
        elem in any::<usize>(),
        word in any::<usize>(),
        bits in any::<u8>(),
    ) {
        let r = datum(name);
        let aw = AffineWeyl::new(&r);
        let (w, len) = pick_word(&aw, 6, elem, word);
        let o = Orientation::for_levi(&r, &levi_from_bits(&r, bits));
        prop_assert_eq!(cell_polynomial(&all_walks(&aw, &w, &o)), CellPolynomial::monomial(len));
    }

    #[test]
    fn enumeration_matches_brute_force(
        name in prop::sample::select(RANK2),
        elem in any::<usize>(),
        bits in any::<u8>(),
    ) {
        let r = datum(name);
        let aw = AffineWeyl::new(&r);
        let (w, _) = pick_word(&aw, 6, elem, 0);
        let o = Orientation::for_levi(&r, &levi_from_bits(&r, bits));
        let walks = all_walks(&aw, &w, &o);
        let got: BTreeSet<Vec<StepKind>> = walks.iter().map(LabeledWalk::kinds).collect();
        prop_assert_eq!(got.len(), walks.len());
        prop_assert_eq!(got, naive_walks(&aw, &w, &o));
    }

    #[test]
    fn walks_replay_and_fold_only_where_allowed(
        name in prop::sample::select(RANK2),
        elem in any::<usize>(),
        bits in any::<u8>(),
    ) {
        let r = datum(name);
        let aw = AffineWeyl::new(&r);
        let (w, _) = pick_word(&aw, 6, elem, 0);
        let o = Orientation::for_levi(&r, &levi_from_bits(&r, bits));
        for wk in all_walks(&aw, &w, &o) {
            let json = serde_json::to_string(&wk).unwrap();
            let back: LabeledWalk = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&replay(&aw, &wk.start, &wk.word, &o, &back.kinds()).unwrap(), &wk);
            let mut x = wk.start.clone();
            for (label, &s) in wk.labels.iter().zip(&wk.word.letters) {
                let options = classify_step(&aw, &x, s, &o);
                if label.kind.is_fold() {
                    prop_assert!(matches!(options, StepOptions::Choice(_)));
                } else {
                    x = aw.mul(&x, &aw.reflection(s));
                }
            }
            prop_assert_eq!(aw.mul(&x, &w.omega), wk.end.clone());
            prop_assert_eq!(wk.stats.cplus + wk.stats.cminus + wk.stats.fplus, w.len());
        }
    }

    #[test]
    fn unfolded_walks_count_at_q_equal_one(
        name in prop::sample::select(RANK2),
        elem in any::<usize>(),
        bits in any::<u8>(),
    ) {
        let r = datum(name);
        let aw = AffineWeyl::new(&r);
        let (w, _) = pick_word(&aw, 6, elem, 0);
        let o = Orientation::for_levi(&r, &levi_from_bits(&r, bits));
        let walks = all_walks(&aw, &w, &o);
        let unfolded = walks.iter().filter(|wk| wk.stats.fplus == 0).count() as i64;
        prop_assert_eq!(cell_polynomial(&walks).eval(1), unfolded);
    }

    #[test]
    fn group_law(
        name in prop::sample::select(RANK2),
        a in any::<usize>(),
        b in any::<usize>(),
        v in prop::collection::vec(-5i64..=5, 3),
    ) {
        let r = datum(name);
        let aw = AffineWeyl::new(&r);
        let ball = aw.ball(4);
        let (x, lx) = &ball[a % ball.len()];
        let (y, ly) = &ball[b % ball.len()];
        let xy = aw.mul(x, y);
        let v = Coweight(v[..r.rank()].to_vec());
        prop_assert_eq!(aw.act(&xy, &v), aw.act(x, &aw.act(y, &v)));
        prop_assert!(aw.length(&xy) <= lx + ly);
        prop_assert_eq!(aw.length(&aw.inverse(x)), *lx);
        prop_assert_eq!(aw.mul(x, &aw.inverse(x)), aw.identity());
        prop_assert_eq!(aw.evaluate(&aw.reduced_word(&xy)), xy);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weight_multiplicity_is_weyl_invariant(
        name in prop::sample::select(&["A2", "B2", "C2sc", "G2", "GL3"][..]),
        m in any::<usize>(),
        l in any::<usize>(),
        w in any::<usize>(),
    ) {
        let r = datum(name);
        let mus = r.dominant_coweights(8);
        let mu = &mus[m % mus.len()];
        let support: Vec<Coweight> = freudenthal_character(&DualDatum::of(&r), mu).unwrap().support().cloned().collect();
        let lam = &support[l % support.len()];
        let moved = r.act(w % r.weyl_order(), lam);
        prop_assert_eq!(weight_multiplicity(&r, mu, lam), weight_multiplicity(&r, mu, &moved));
    }

    #[test]
    fn families_respect_the_dimension_bound(
        name in prop::sample::select(&["A1", "A2", "B2", "G2", "GL3"][..]),
        m in any::<usize>(),
        l in any::<usize>(),
        bits in any::<u8>(),
    ) {
        let r = datum(name);
        let levi = levi_from_bits(&r, bits);
        let mus = r.dominant_coweights(8);
        let mu = &mus[m % mus.len()];
        let table = freudenthal_character(&DualDatum::of(&r), mu).unwrap();
        let support: Vec<&Coweight> = table.support().filter(|x| r.is_levi_dominant(x, &levi)).collect();
        let lam = support[l % support.len()];
        let q = BranchingQuery { mu: mu.clone(), lambda: lam.clone(), levi: levi.clone() };
        let fam = build_p_family(&r, &q).unwrap();
        let bound = dimension_bound(&r, mu, lam).unwrap();
        for e in &fam.entries {
            for wk in &e.walks {
                prop_assert!(wk.stats.dimension() as i64 <= bound);
                prop_assert!(wk.stats.cminus as i64 >= e.type_length() as i64 - bound);
            }
        }
        let max = maximal_family(&fam).walk_count() as u64;
        prop_assert_eq!(branching_multiplicity(&r, &levi, mu, lam), Ok(max));
    }
}
