//! Static SVG pictures of walks in a semisimple-rank-2 apartment.
//!
//! Points are projected along the center: a vector is first written in simple
//! coroot coordinates, then sent to the plane by the Cholesky factor of the
//! Gram matrix of `Q(x, y) = Σ_{β∈Φ} ⟨β,x⟩⟨β,y⟩`, so reflections become
//! Euclidean reflections.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use thiserror::Error;

use crate::affine_weyl::{AffineWeyl, ExtAffineElement};
use crate::multiplicity::{build_p_family_with, type_element, BranchingQuery, FamilyOptions};
use crate::root_datum::{Coweight, LeviSubset, RootDatum};
use crate::walks::{LabeledWalk, StepKind, StepLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("rendering needs semisimple rank 2, this datum has {0} simple roots")]
    NotRank2(usize),
    #[error(transparent)]
    Query(#[from] crate::multiplicity::MultiplicityError),
}

const SCALE: f64 = 60.0;
const MARGIN: f64 = 0.75;
const PALETTE: &[&str] = &[
    "#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
];

/// What to draw.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub walks: Vec<LabeledWalk>,
    /// Bold vertices `W₀(−μ)` with their translation alcoves shaded.
    pub mu: Option<Coweight>,
    /// Alcoves `x(𝐚)` labelled with a string.
    pub labels: Vec<(ExtAffineElement, String)>,
}

type P2 = (f64, f64);

struct Projector<'r> {
    aw: AffineWeyl<'r>,
    /// Upper-triangular `Lᵀ` with `Gram = L Lᵀ`.
    lt: [[f64; 2]; 2],
    /// Base-alcove vertices in `X_*(T) ⊗ ℚ`.
    base: Vec<Vec<Rational64>>,
}

fn to_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn cholesky_upper(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let l00 = m[0][0].sqrt();
    let l10 = m[1][0] / l00;
    let l11 = (m[1][1] - l10 * l10).sqrt();
    [[l00, l10], [0.0, l11]]
}

impl<'r> Projector<'r> {
    fn new(r: &'r RootDatum) -> Result<Self, RenderError> {
        if r.num_simple() != 2 {
            return Err(RenderError::NotRank2(r.num_simple()));
        }
        let coroot_pairings: Vec<Vec<i64>> = r
            .positive_roots()
            .iter()
            .map(|b| (0..2).map(|i| b.pair(r.simple_coroot(i))).collect())
            .collect();
        let mut gram = [[0.0; 2]; 2];
        for p in &coroot_pairings {
            for i in 0..2 {
                for j in 0..2 {
                    // Each ±β contributes, hence the factor 2.
                    gram[i][j] += 2.0 * (p[i] * p[j]) as f64;
                }
            }
        }
        // Pairings ⟨α_i, v⟩ at the vertices: a product of one simplex per component.
        let mut corners: Vec<Vec<Rational64>> = vec![vec![Rational64::from(0); 2]];
        for (c, comp) in r.components().iter().enumerate() {
            let coeffs = r.root_coefficients(r.highest_roots()[c]);
            let mut next = corners.clone();
            for &i in comp {
                for v in &corners {
                    let mut v = v.clone();
                    v[i] = Rational64::new(1, coeffs[i]);
                    next.push(v);
                }
            }
            corners = next;
        }
        let base = corners
            .into_iter()
            .map(|a| {
                let c = r.coroot_coords_from_pairings(&a);
                (0..r.rank())
                    .map(|k| (0..2).map(|i| c[i] * Rational64::from(r.simple_coroot(i).0[k])).sum())
                    .collect()
            })
            .collect();
        Ok(Self {
            aw: AffineWeyl::new(r),
            lt: cholesky_upper(gram),
            base,
        })
    }

    fn datum(&self) -> &'r RootDatum {
        self.aw.datum()
    }

    fn project(&self, v: &[Rational64]) -> P2 {
        let r = self.datum();
        let a: Vec<Rational64> = (0..2)
            .map(|i| {
                r.simple_root(i)
                    .0
                    .iter()
                    .zip(v)
                    .map(|(&x, &y)| Rational64::from(x) * y)
                    .sum()
            })
            .collect();
        let c: Vec<f64> = r.coroot_coords_from_pairings(&a).into_iter().map(to_f64).collect();
        (self.lt[0][0] * c[0] + self.lt[0][1] * c[1], self.lt[1][1] * c[1])
    }

    fn project_int(&self, v: &Coweight) -> P2 {
        let q: Vec<Rational64> = v.0.iter().map(|&x| Rational64::from(x)).collect();
        self.project(&q)
    }

    fn alcove(&self, x: &ExtAffineElement) -> Vec<P2> {
        let m = &self.datum().weyl_element(x.finite).coweight_matrix;
        let mut pts: Vec<P2> = self
            .base
            .iter()
            .map(|v| {
                let img: Vec<Rational64> = m
                    .iter()
                    .zip(&x.translation.0)
                    .map(|(row, &t)| {
                        row.iter()
                            .zip(v)
                            .map(|(&a, &b)| Rational64::from(a) * b)
                            .sum::<Rational64>()
                            + Rational64::from(t)
                    })
                    .collect();
                self.project(&img)
            })
            .collect();
        let (cx, cy) = centroid(&pts);
        pts.sort_by(|p, q| {
            let a = (p.1 - cy).atan2(p.0 - cx);
            let b = (q.1 - cy).atan2(q.0 - cx);
            a.total_cmp(&b)
        });
        pts
    }

    /// Plane normal of `⟨β, ·⟩`.
    fn normal(&self, k: usize) -> P2 {
        let r = self.datum();
        let p: Vec<f64> = (0..2)
            .map(|i| r.positive_roots()[k].pair(r.simple_coroot(i)) as f64)
            .collect();
        // n = L⁻¹ p with L lower-triangular.
        let l = [[self.lt[0][0], 0.0], [self.lt[0][1], self.lt[1][1]]];
        let n0 = p[0] / l[0][0];
        let n1 = (p[1] - l[1][0] * n0) / l[1][1];
        (n0, n1)
    }
}

fn centroid(pts: &[P2]) -> P2 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    (sx / n, sy / n)
}

fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

struct Frame {
    min: P2,
    max: P2,
}

impl Frame {
    fn svg(&self, p: P2) -> (String, String) {
        (fmt3((p.0 - self.min.0) * SCALE), fmt3((self.max.1 - p.1) * SCALE))
    }

    fn points(&self, pts: &[P2]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.svg(p);
                format!("{x},{y}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Segment of `n·x = k` inside the frame.
    fn clip(&self, n: P2, k: f64) -> Option<(P2, P2)> {
        let eps = 1e-9;
        let mut hits: Vec<P2> = vec![];
        if n.1.abs() > eps {
            for x in [self.min.0, self.max.0] {
                let y = (k - n.0 * x) / n.1;
                if y >= self.min.1 - eps && y <= self.max.1 + eps {
                    hits.push((x, y));
                }
            }
        }
        if n.0.abs() > eps {
            for y in [self.min.1, self.max.1] {
                let x = (k - n.1 * y) / n.0;
                if x >= self.min.0 - eps && x <= self.max.0 + eps {
                    hits.push((x, y));
                }
            }
        }
        hits.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6 && (a.1 - b.1).abs() < 1e-6);
        let first = *hits.first()?;
        let far = hits.iter().copied().max_by(|a, b| {
            let da = (a.0 - first.0).hypot(a.1 - first.1);
            let db = (b.0 - first.0).hypot(b.1 - first.1);
            da.total_cmp(&db)
        })?;
        ((far.0 - first.0).hypot(far.1 - first.1) > 1e-6).then_some((first, far))
    }
}

/// Renders the scene as a standalone SVG 1.1 document.
pub fn render_svg(r: &RootDatum, scene: &Scene) -> Result<String, RenderError> {
    let pr = Projector::new(r)?;
    let aw = &pr.aw;

    // Alcove sequence of every walk.
    let paths: Vec<Vec<(ExtAffineElement, Option<StepLabel>)>> = scene
        .walks
        .iter()
        .map(|wk| {
            let mut x = wk.start.clone();
            let mut out = vec![];
            for (l, &s) in wk.labels.iter().zip(&wk.word.letters) {
                out.push((x.clone(), Some(l.clone())));
                if !l.kind.is_fold() {
                    x = aw.mul(&x, &aw.reflection(s));
                }
            }
            out.push((x, None));
            out
        })
        .collect();

    let mut interesting: Vec<P2> = vec![(0.0, 0.0)];
    let orbit = scene.mu.as_ref().map(|mu| r.orbit(&-mu)).unwrap_or_default();
    for v in &orbit {
        interesting.push(pr.project_int(v));
    }
    for p in paths.iter().flatten() {
        interesting.extend(pr.alcove(&p.0));
    }
    for (x, _) in &scene.labels {
        interesting.extend(pr.alcove(x));
    }
    let fold = |f: fn(f64, f64) -> f64, pick: fn(&P2) -> f64, init: f64| interesting.iter().map(pick).fold(init, f);
    let frame = Frame {
        min: (
            fold(f64::min, |p| p.0, f64::INFINITY) - MARGIN,
            fold(f64::min, |p| p.1, f64::INFINITY) - MARGIN,
        ),
        max: (
            fold(f64::max, |p| p.0, f64::NEG_INFINITY) + MARGIN,
            fold(f64::max, |p| p.1, f64::NEG_INFINITY) + MARGIN,
        ),
    };
    let width = fmt3((frame.max.0 - frame.min.0) * SCALE);
    let height = fmt3((frame.max.1 - frame.min.1) * SCALE);

    let mut s = String::new();
    let w = &mut s;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        w,
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker></defs>"##
    )
    .unwrap();
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    // Translation alcoves and the base alcove.
    writeln!(w, r#"<g id="alcoves">"#).unwrap();
    for v in &orbit {
        let x = aw.raw_translation(v);
        writeln!(
            w,
            r##"<polygon points="{}" fill="#cfe8ff"/>"##,
            frame.points(&pr.alcove(&x))
        )
        .unwrap();
    }
    writeln!(
        w,
        r##"<polygon points="{}" fill="#d9d9d9"/>"##,
        frame.points(&pr.alcove(&aw.identity()))
    )
    .unwrap();
    writeln!(w, "</g>").unwrap();

    // Hyperplanes ⟨β, ·⟩ = k crossing the frame.
    writeln!(w, r##"<g id="hyperplanes" stroke="#999999" stroke-width="0.8">"##).unwrap();
    let corners = [
        frame.min,
        (frame.min.0, frame.max.1),
        (frame.max.0, frame.min.1),
        frame.max,
    ];
    for k in 0..r.positive_roots().len() {
        let n = pr.normal(k);
        let vals: Vec<f64> = corners.iter().map(|c| n.0 * c.0 + n.1 * c.1).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min).ceil() as i64;
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max).floor() as i64;
        for level in lo..=hi {
            if let Some((a, b)) = frame.clip(n, level as f64) {
                let (x1, y1) = frame.svg(a);
                let (x2, y2) = frame.svg(b);
                let width = if level == 0 { r#" stroke-width="1.6""# } else { "" };
                writeln!(w, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{width}/>"#).unwrap();
            }
        }
    }
    writeln!(w, "</g>").unwrap();

    // Labels.
    writeln!(
        w,
        r##"<g id="labels" font-family="sans-serif" font-size="11" text-anchor="middle" fill="#c0008f">"##
    )
    .unwrap();
    for (x, text) in &scene.labels {
        let (cx, cy) = frame.svg(centroid(&pr.alcove(x)));
        writeln!(w, r#"<text x="{cx}" y="{cy}">{}</text>"#, xml_escape(text)).unwrap();
    }
    writeln!(w, "</g>").unwrap();

    // Walks, colored by endpoint.
    let mut colors: BTreeMap<Coweight, &str> = BTreeMap::new();
    for wk in &scene.walks {
        let n = colors.len();
        colors
            .entry(wk.end.translation.clone())
            .or_insert(PALETTE[n % PALETTE.len()]);
    }
    writeln!(w, r#"<g id="walks" fill="none" stroke-width="1.8">"#).unwrap();
    for (wk, path) in scene.walks.iter().zip(&paths) {
        let color = colors[&wk.end.translation];
        writeln!(w, r#"<g stroke="{color}" data-labels="{}">"#, wk.label_string()).unwrap();
        for pair in path.windows(2) {
            let (x, label) = (
                &pair[0].0,
                pair[0].1.as_ref().expect("only the last alcove is unlabelled"),
            );
            let kind = label.kind;
            let from = centroid(&pr.alcove(x));
            if kind.is_fold() {
                // Bounce off the wall crossed by the fold.
                let n = pr.normal(label.hyperplane.root);
                let level = label.hyperplane.level as f64;
                let t = (level - (n.0 * from.0 + n.1 * from.1)) / (n.0 * n.0 + n.1 * n.1);
                let wall = (from.0 + t * n.0, from.1 + t * n.1);
                let mid = (from.0 + 0.85 * t * n.0, from.1 + 0.85 * t * n.1);
                let (x1, y1) = frame.svg(from);
                let (x2, y2) = frame.svg(mid);
                writeln!(
                    w,
                    r#"<polyline points="{x1},{y1} {x2},{y2} {x1},{y1}" marker-end="url(#arrow)"/>"#
                )
                .unwrap();
                let (fx, fy) = frame.svg(wall);
                writeln!(w, r#"<circle class="fold" cx="{fx}" cy="{fy}" r="3" fill="{color}"/>"#).unwrap();
            } else {
                let to = centroid(&pr.alcove(&pair[1].0));
                let (x1, y1) = frame.svg(from);
                let (x2, y2) = frame.svg(to);
                let dash = if kind == StepKind::NegativeCrossing {
                    r#" stroke-dasharray="4 2""#
                } else {
                    ""
                };
                writeln!(
                    w,
                    r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{dash} marker-end="url(#arrow)"/>"#
                )
                .unwrap();
            }
        }
        writeln!(w, "</g>").unwrap();
    }
    writeln!(w, "</g>").unwrap();

    // Vertices.
    writeln!(w, r#"<g id="vertices">"#).unwrap();
    for v in &orbit {
        let (x, y) = frame.svg(pr.project_int(v));
        writeln!(w, r#"<circle cx="{x}" cy="{y}" r="4" fill="black"/>"#).unwrap();
    }
    for (v, color) in &colors {
        let (x, y) = frame.svg(pr.project_int(v));
        let x: f64 = x.parse::<f64>().unwrap() - 5.0;
        let y: f64 = y.parse::<f64>().unwrap() - 5.0;
        writeln!(
            w,
            r#"<rect class="endpoint" x="{}" y="{}" width="10" height="10" fill="{color}"/>"#,
            fmt3(x),
            fmt3(y)
        )
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();
    writeln!(w, "</svg>").unwrap();
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Maximal walks for several weights of `V_μ`, with every type alcove labelled
/// by its word in the affine letters (`12012` for `s₁s₂s₀s₁s₂τ`).
pub fn weight_scene(r: &RootDatum, mu: &Coweight, lambdas: &[Coweight]) -> Result<Scene, RenderError> {
    let aw = AffineWeyl::new(r);
    let mut scene = Scene {
        mu: Some(mu.clone()),
        ..Scene::default()
    };
    let reps = r
        .min_coset_reps_stab(mu)
        .map_err(|_| crate::multiplicity::MultiplicityError::NotDominant(mu.clone()))?;
    for w in reps {
        let x = type_element(&aw, mu, w);
        let word = aw.reduced_word(&x);
        let digits: String = aw
            .word_labels(&word)
            .iter()
            .map(|l| l.trim_start_matches('s').to_string())
            .collect();
        scene
            .labels
            .push((x, if digits.is_empty() { "e".into() } else { digits }));
    }
    for lam in lambdas {
        let q = BranchingQuery {
            mu: mu.clone(),
            lambda: lam.clone(),
            levi: LeviSubset::empty(),
        };
        let opts = FamilyOptions {
            prune_dominance: true,
            maximal_only: true,
        };
        let fam = build_p_family_with(r, &q, opts, |aw, x| aw.reduced_word(x))?;
        scene.walks.extend(fam.walks().cloned());
    }
    Ok(scene)
}
