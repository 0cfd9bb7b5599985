//! `alcove verify`: walk counts against the classical oracles on a small grid.

use alcove_core::affine_weyl::AffineWeyl;
use alcove_core::multiplicity::{branching_multiplicity, length_identities, tensor_multiplicity, weight_multiplicity};
use alcove_core::oracle::{branching_from_table, freudenthal_character, tensor_oracle, DualDatum};
use alcove_core::root_datum::{LeviSubset, RootDatum};
use alcove_core::walks::{cell_polynomial, enumerate_folded_walks, CellPolynomial, Orientation, WalkConstraints};

struct Tally {
    name: &'static str,
    checked: usize,
    failed: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failed: vec![],
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed.push(what());
        }
    }

    fn report(self) -> usize {
        if self.failed.is_empty() {
            println!("PASS {} ({} checks)", self.name, self.checked);
            return 0;
        }
        println!("FAIL {} ({} of {} checks)", self.name, self.failed.len(), self.checked);
        for f in self.failed.iter().take(5) {
            println!("    {f}");
        }
        1
    }
}

/// Runs every suite and returns the number that failed.
pub fn run_all(r: &RootDatum, bound: i64) -> usize {
    let d = DualDatum::of(r);
    let aw = AffineWeyl::new(r);
    let mus = r.dominant_coweights(bound);
    let levis = LeviSubset::all(r.num_simple());

    let mut weight = Tally::new("weight multiplicities = Freudenthal");
    let mut sum = Tally::new("sum of weight multiplicities = Weyl dimension");
    let mut branch = Tally::new("branching multiplicities = alternating-sum oracle");
    let mut prv = Tally::new("PRV: Weyl-orbit weights occur once");
    let mut chains = Tally::new("length identity chains");
    for mu in &mus {
        let table = match freudenthal_character(&d, mu) {
            Ok(t) => t,
            Err(e) => {
                weight.check(false, || format!("oracle failed for {mu}: {e}"));
                continue;
            }
        };
        let mut total = 0;
        for (lam, m) in table.iter() {
            let got = weight_multiplicity(r, mu, lam);
            weight.check(got == Ok(m), || format!("μ={mu} λ={lam}: walks {got:?}, oracle {m}"));
            total += got.unwrap_or(0);
            for w in r.min_coset_reps_stab(mu).unwrap_or_default() {
                let id = length_identities(r, mu, lam, w);
                chains.check(id.as_ref().is_ok_and(|i| i.holds()), || {
                    format!("μ={mu} λ={lam} w={}: {id:?}", r.weyl_element(w).word_string())
                });
            }
        }
        sum.check(total == table.dimension(), || {
            format!("μ={mu}: {total} vs {}", table.dimension())
        });
        let orbit = r.orbit(mu);
        for levi in &levis {
            for lam in table.support().filter(|l| r.is_levi_dominant(l, levi)) {
                let want = branching_from_table(&d, levi, &table, lam);
                let got = branching_multiplicity(r, levi, mu, lam);
                branch.check(got == Ok(want as u64), || {
                    format!("μ={mu} λ={lam} J={levi}: walks {got:?}, oracle {want}")
                });
                if orbit.contains(lam) {
                    prv.check(got == Ok(1), || format!("μ={mu} λ={lam} J={levi}: {got:?}"));
                }
            }
        }
    }

    let mut tensor = Tally::new("tensor multiplicities = Brauer-Klimyk");
    let lams = r.dominant_coweights(bound.min(6));
    for mu in &mus {
        for lam in &lams {
            let top = mu + lam;
            for nu in r.dominant_coweights(r.two_rho().pair(&top)) {
                if r.dominance_leq(&nu, &top).is_none() {
                    continue;
                }
                let want = tensor_oracle(&d, mu, lam, &nu);
                let got = tensor_multiplicity(r, mu, lam, &nu);
                tensor.check(matches!((&got, &want), (Ok(g), Ok(w)) if *g as i64 == *w), || {
                    format!("μ={mu} λ={lam} ν={nu}: walks {got:?}, oracle {want:?}")
                });
            }
        }
    }

    let mut mass = Tally::new("mass identity Σ q^c+(q-1)^f+ = q^ℓ");
    let max_len = bound.clamp(0, 8) as usize;
    for (x, len) in aw.ball(max_len) {
        let word = aw.reduced_word(&x);
        for levi in &levis {
            let o = Orientation::for_levi(r, levi);
            let walks = enumerate_folded_walks(&aw, &aw.identity(), &word, &o, &WalkConstraints::default());
            let poly = cell_polynomial(&walks);
            mass.check(poly == CellPolynomial::monomial(len), || {
                format!("{} J={levi}: {poly}", aw.format_word(&word))
            });
        }
    }

    [weight, sum, branch, prv, chains, tensor, mass]
        .into_iter()
        .map(Tally::report)
        .sum()
}
