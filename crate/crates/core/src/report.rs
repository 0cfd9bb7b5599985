//! JSON records for walks and multiplicity queries.

use serde::{Deserialize, Serialize};

use crate::affine_weyl::{AffineWeyl, ExtAffineElement, ReducedWord, SimpleAffineReflection};
use crate::multiplicity::{maximal_family, FamilyQuery, Skip, WalkFamily};
use crate::root_datum::{Coweight, RootDatum};
use crate::walks::{replay, LabeledWalk, Orientation, StepKind, WalkError};

/// `[translation, finite word]`, e.g. `[[-1,-1,-2], ["s1","s2"]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord(pub Vec<i64>, pub Vec<String>);

impl ElementRecord {
    pub fn of(r: &RootDatum, x: &ExtAffineElement) -> Self {
        let word = r
            .weyl_element(x.finite)
            .word
            .iter()
            .map(|i| format!("s{}", i + 1))
            .collect();
        Self(x.translation.0.clone(), word)
    }

    pub fn to_element(&self, r: &RootDatum) -> Result<ExtAffineElement, String> {
        if self.0.len() != r.rank() {
            return Err(format!(
                "translation has {} coordinates, expected {}",
                self.0.len(),
                r.rank()
            ));
        }
        let mut idx = vec![];
        for l in &self.1 {
            match l.parse::<SimpleAffineReflection>()? {
                SimpleAffineReflection::Finite(i) if i < r.num_simple() => idx.push(i),
                _ => return Err(format!("`{l}` is not a finite simple reflection")),
            }
        }
        Ok(ExtAffineElement {
            translation: Coweight(self.0.clone()),
            finite: r.weyl_from_word(&idx),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub start: ElementRecord,
    pub type_word: Vec<String>,
    pub omega: ElementRecord,
    pub labels: Vec<String>,
    pub end_vertex: Vec<i64>,
    pub cplus: usize,
    pub cminus: usize,
    pub fplus: usize,
    pub dim: usize,
}

impl WalkRecord {
    pub fn of(aw: &AffineWeyl<'_>, walk: &LabeledWalk) -> Self {
        let r = aw.datum();
        Self {
            start: ElementRecord::of(r, &walk.start),
            type_word: aw.word_labels(&walk.word),
            omega: ElementRecord::of(r, &walk.word.omega),
            labels: walk.labels.iter().map(|l| l.kind.symbol().to_string()).collect(),
            end_vertex: walk.end.translation.0.clone(),
            cplus: walk.stats.cplus,
            cminus: walk.stats.cminus,
            fplus: walk.stats.fplus,
            dim: walk.stats.dimension(),
        }
    }

    /// Replays the record, failing on any illegal step or inconsistent field.
    pub fn replay(&self, aw: &AffineWeyl<'_>, o: &Orientation) -> Result<LabeledWalk, ReplayError> {
        let r = aw.datum();
        let start = self.start.to_element(r).map_err(ReplayError::Parse)?;
        let omega = self.omega.to_element(r).map_err(ReplayError::Parse)?;
        let letters = self
            .type_word
            .iter()
            .map(|l| aw.parse_letter(l))
            .collect::<Result<Vec<_>, _>>()
            .map_err(ReplayError::Parse)?;
        let kinds = self
            .labels
            .iter()
            .map(|l| l.parse::<StepKind>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(ReplayError::Parse)?;
        let word = ReducedWord { letters, omega };
        let walk = replay(aw, &start, &word, o, &kinds)?;
        if WalkRecord::of(aw, &walk) != *self {
            return Err(ReplayError::Mismatch);
        }
        Ok(walk)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("recorded statistics or endpoint disagree with the replayed walk")]
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerW {
    pub w_word: String,
    pub type_word: String,
    /// `null` when `−w(μ)` lies on M-walls with several candidates, or for tensor queries.
    pub lambda_w: Option<Vec<i64>>,
    pub lambda_w_candidates: Vec<Vec<i64>>,
    pub skipped: Option<Skip>,
    pub walk_count: usize,
    pub max_walk_count: usize,
    pub cell_polynomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub query: FamilyQuery,
    pub per_w: Vec<PerW>,
    pub multiplicity: u64,
    pub dimension_bound: Option<i64>,
}

impl MultiplicityReport {
    /// Summarizes an unfiltered family; the multiplicity is its maximal part.
    pub fn of(r: &RootDatum, family: &WalkFamily) -> Self {
        let aw = AffineWeyl::new(r);
        let max = maximal_family(family);
        let per_w = family
            .entries
            .iter()
            .zip(&max.entries)
            .map(|(e, m)| PerW {
                w_word: r.weyl_element(e.w).word_string(),
                type_word: aw.format_word(&e.chosen_word),
                lambda_w: e.lambda_w().map(|v| v.0.clone()),
                lambda_w_candidates: e.lambda_w_candidates.iter().map(|v| v.0.clone()).collect(),
                skipped: e.skipped.clone(),
                walk_count: e.walks.len(),
                max_walk_count: m.walks.len(),
                cell_polynomial: e.cell_polynomial().to_string(),
            })
            .collect();
        Self {
            query: family.query.clone(),
            per_w,
            multiplicity: max.walk_count() as u64,
            dimension_bound: family.bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplicity::{build_p_family, BranchingQuery};
    use crate::root_datum::LeviSubset;

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    #[test]
    fn walk_records_round_trip() {
        let r = RootDatum::from_preset("GL3").unwrap();
        let aw = AffineWeyl::new(&r);
        let q = BranchingQuery {
            mu: cw(&[3, 1, 0]),
            lambda: cw(&[1, 1, 2]),
            levi: LeviSubset::empty(),
        };
        let fam = build_p_family(&r, &q).unwrap();
        let o = Orientation::for_levi(&r, &q.levi);
        assert!(fam.walk_count() > 2);
        for wk in fam.walks() {
            let rec = WalkRecord::of(&aw, wk);
            let json = serde_json::to_string(&rec).unwrap();
            let back: WalkRecord = serde_json::from_str(&json).unwrap();
            assert_eq!(back.replay(&aw, &o).unwrap(), *wk);
        }
    }

    #[test]
    fn tampered_record_is_rejected() {
        let r = RootDatum::from_preset("A1").unwrap();
        let aw = AffineWeyl::new(&r);
        let o = Orientation::for_levi(&r, &LeviSubset::empty());
        let q = BranchingQuery {
            mu: cw(&[2]),
            lambda: cw(&[0]),
            levi: LeviSubset::empty(),
        };
        let fam = build_p_family(&r, &q).unwrap();
        let mut rec = WalkRecord::of(&aw, fam.walks().next().unwrap());
        rec.cplus += 1;
        assert_eq!(rec.replay(&aw, &o), Err(ReplayError::Mismatch));
        rec.labels.pop();
        assert!(matches!(rec.replay(&aw, &o), Err(ReplayError::Walk(_))));
    }

    #[test]
    fn report_shape() {
        let r = RootDatum::from_preset("GL3").unwrap();
        let q = BranchingQuery {
            mu: cw(&[3, 1, 0]),
            lambda: cw(&[2, 1, 1]),
            levi: LeviSubset::empty(),
        };
        let rep = MultiplicityReport::of(&r, &build_p_family(&r, &q).unwrap());
        assert_eq!(rep.multiplicity, 2);
        assert_eq!(rep.dimension_bound, Some(4));
        assert_eq!(rep.per_w.len(), 6);
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["query", "per_w", "multiplicity", "dimension_bound"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: MultiplicityReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }
}
