use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use alcove_core::affine_weyl::{AffineWeyl, ReducedWord};
use alcove_core::config::{load_datum, parse_vector};
use alcove_core::multiplicity::{
    build_p_family, convolution_walk_family, maximal_family, BranchingQuery, TensorQuery, WalkFamily,
};
use alcove_core::render::{render_svg, weight_scene, RenderError};
use alcove_core::report::{MultiplicityReport, WalkRecord};
use alcove_core::root_datum::{Coweight, LeviSubset, RootDatum};
use alcove_core::walks::{enumerate_folded_walks, Orientation, WalkConstraints};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

mod verify;

#[derive(Parser)]
#[command(
    name = "alcove",
    version,
    about = "Positively folded alcove walks and the multiplicities they count"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicities for the dual group.
    #[command(subcommand)]
    Mult(Mult),
    /// Enumerate or draw individual walks.
    #[command(subcommand)]
    Walks(Walks),
    /// Cell polynomials of a branching or convolution family.
    Paving(PavingArgs),
    /// Run the invariant suites against the classical oracles.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Mult {
    /// Weight multiplicity dim V_μ(λ).
    Weight(MultArgs),
    /// Branching multiplicity to the Levi selected by --levi.
    Branch(MultArgs),
    /// Tensor multiplicity [V_μ ⊗ V_λ : V_ν].
    Tensor(MultArgs),
}

#[derive(Args)]
struct DatumArg {
    /// Preset name (A2, B2sc, GL3, ...) or path to a datum file.
    #[arg(long)]
    datum: String,
}

#[derive(Args)]
struct MultArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Dominant coweight, e.g. 3,1,0.
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    /// Coweight λ (M-dominant for `branch`, dominant for `tensor`).
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Dominant coweight ν (`tensor` only).
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// 1-based simple-root indices spanning the Levi.
    #[arg(long, default_value = "")]
    levi: String,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// List only walks of maximal dimension.
    #[arg(long)]
    max_dim_only: bool,
}

#[derive(Subcommand)]
enum Walks {
    /// Enumerate positively folded walks of one type.
    Enumerate(EnumerateArgs),
    /// Draw the maximal walks for weights of V_μ (semisimple rank 2).
    Render(RenderArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Letters such as "s1 s0 s2"; a trailing length-zero part is not allowed here.
    #[arg(long, conflicts_with = "type_of")]
    word: Option<String>,
    /// Use the type (t_{-v})_0 for this coweight v.
    #[arg(long, allow_hyphen_values = true)]
    type_of: Option<String>,
    /// Start at the alcove v + a.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    /// Keep walks whose final alcove is y(a) with y(0) equal to this coweight.
    #[arg(long, allow_hyphen_values = true)]
    end_vertex: Option<String>,
    /// Keep walks of at least this dimension.
    #[arg(long)]
    min_dim: Option<usize>,
    /// 1-based simple-root indices fixing the orientation.
    #[arg(long, default_value = "")]
    levi: String,
    /// Print walk records as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Dominant coweight.
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    /// Repeat for several weights.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Vec<String>,
    /// Output file.
    #[arg(long)]
    svg: PathBuf,
}

#[derive(Args)]
struct PavingArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Dominant coweight.
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    /// Coweight λ.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Given: the convolution fiber for (λ, μ; ν). Absent: the branching family.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// 1-based simple-root indices spanning the Levi (branching only).
    #[arg(long, default_value = "")]
    levi: String,
    /// Print the cells as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Largest ⟨2ρ, μ⟩ to sweep.
    #[arg(long, default_value_t = 6)]
    bound: i64,
}

/// Precondition and usage failures exit with 1, failed invariants with 2.
#[derive(Debug)]
struct InvariantFailure(String);

impl std::fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvariantFailure {}

fn vector(r: &RootDatum, s: &str, what: &str) -> Result<Coweight> {
    let v = parse_vector(s).with_context(|| format!("--{what}"))?;
    if v.len() != r.rank() {
        bail!("--{what} has {} entries, the datum has rank {}", v.len(), r.rank());
    }
    Ok(Coweight(v))
}

fn levi(r: &RootDatum, s: &str) -> Result<LeviSubset> {
    let idx = parse_vector(s).context("--levi")?;
    let mut out = vec![];
    for i in idx {
        if i < 1 || i as usize > r.num_simple() {
            bail!("--levi index {i} is outside 1..={}", r.num_simple());
        }
        out.push(i as usize - 1);
    }
    Ok(LeviSubset::from_indices(out))
}

fn datum(d: &DatumArg) -> Result<RootDatum> {
    load_datum(&d.datum).map_err(|e| anyhow!("--datum {}: {e}", d.datum))
}

fn print_family(aw: &AffineWeyl<'_>, family: &WalkFamily, max_only: bool) {
    let r = aw.datum();
    for e in &family.entries {
        let walks: Vec<_> = e
            .walks
            .iter()
            .filter(|w| !max_only || Some(w.stats.dimension() as i64) == family.bound)
            .collect();
        if walks.is_empty() {
            continue;
        }
        println!(
            "w = {}, type {}",
            r.weyl_element(e.w).word_string(),
            aw.format_word(&e.chosen_word)
        );
        for w in walks {
            let star = if Some(w.stats.dimension() as i64) == family.bound {
                "*"
            } else {
                " "
            };
            println!(
                "  {star} {} dim {} end {} cell q^{}(q-1)^{}",
                w.label_string(),
                w.stats.dimension(),
                w.end.translation,
                w.stats.cplus,
                w.stats.fplus
            );
        }
    }
}

fn family_json(aw: &AffineWeyl<'_>, family: &WalkFamily, max_only: bool) -> serde_json::Value {
    let mut v = serde_json::to_value(MultiplicityReport::of(aw.datum(), family)).expect("report serializes");
    let walks: Vec<WalkRecord> = family
        .walks()
        .filter(|w| !max_only || Some(w.stats.dimension() as i64) == family.bound)
        .map(|w| WalkRecord::of(aw, w))
        .collect();
    v["walks"] = serde_json::to_value(walks).expect("walks serialize");
    v
}

fn run_mult(cmd: Mult) -> Result<()> {
    let (args, tensor) = match cmd {
        Mult::Weight(a) => {
            if !a.levi.trim().is_empty() {
                bail!("--levi is not used by `mult weight`; use `mult branch`");
            }
            (a, false)
        }
        Mult::Branch(a) => (a, false),
        Mult::Tensor(a) => (a, true),
    };
    let r = datum(&args.datum)?;
    let aw = AffineWeyl::new(&r);
    let mu = vector(&r, &args.mu, "mu")?;
    let lambda = vector(&r, &args.lambda, "lambda")?;
    let family = if tensor {
        let nu = args.nu.as_deref().ok_or_else(|| anyhow!("`mult tensor` needs --nu"))?;
        let q = TensorQuery {
            mu,
            lambda,
            nu: vector(&r, nu, "nu")?,
        };
        convolution_walk_family(&r, &q)?
    } else {
        if args.nu.is_some() {
            bail!("--nu is only used by `mult tensor`");
        }
        let q = BranchingQuery {
            mu,
            lambda,
            levi: levi(&r, &args.levi)?,
        };
        build_p_family(&r, &q)?
    };
    let m = maximal_family(&family).walk_count();
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&family_json(&aw, &family, args.max_dim_only))?
        );
        return Ok(());
    }
    println!("multiplicity: {m} (family nonempty: {})", !family.is_empty());
    match family.bound {
        Some(b) => println!("dimension bound: {b}"),
        None => println!("dimension bound: none (lattice condition fails)"),
    }
    print_family(&aw, &family, args.max_dim_only);
    Ok(())
}

fn parse_word(aw: &AffineWeyl<'_>, s: &str) -> Result<ReducedWord> {
    let letters = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| aw.parse_letter(t).map_err(|e| anyhow!(e)))
        .collect::<Result<Vec<_>>>()?;
    let word = ReducedWord {
        letters,
        omega: aw.identity(),
    };
    let x = aw.evaluate(&word);
    if aw.length(&x) != word.len() {
        bail!("the word `{s}` is not reduced");
    }
    Ok(word)
}

fn run_walks(cmd: Walks) -> Result<()> {
    match cmd {
        Walks::Enumerate(a) => {
            let r = datum(&a.datum)?;
            let aw = AffineWeyl::new(&r);
            let word = match (&a.word, &a.type_of) {
                (Some(w), None) => parse_word(&aw, w)?,
                (None, Some(v)) => {
                    let v = vector(&r, v, "type-of")?;
                    aw.reduced_word(&aw.right_w0_minimal(&aw.translation_of(&v)))
                }
                _ => bail!("give exactly one of --word and --type-of"),
            };
            let start = match &a.start {
                Some(s) => aw.raw_translation(&vector(&r, s, "start")?),
                None => aw.identity(),
            };
            let constraints = WalkConstraints {
                end_vertex: a
                    .end_vertex
                    .as_deref()
                    .map(|s| vector(&r, s, "end-vertex"))
                    .transpose()?,
                end_orbit: None,
                min_dimension: a.min_dim,
            };
            let o = Orientation::for_levi(&r, &levi(&r, &a.levi)?);
            let walks = enumerate_folded_walks(&aw, &start, &word, &o, &constraints);
            if a.json {
                let recs: Vec<WalkRecord> = walks.iter().map(|w| WalkRecord::of(&aw, w)).collect();
                println!("{}", serde_json::to_string_pretty(&recs)?);
            } else {
                println!("type {}: {} walk(s)", aw.format_word(&word), walks.len());
                for w in &walks {
                    println!(
                        "  {} dim {} (c+ {}, c- {}, f+ {}) end {}",
                        w.label_string(),
                        w.stats.dimension(),
                        w.stats.cplus,
                        w.stats.cminus,
                        w.stats.fplus,
                        w.end.translation
                    );
                }
            }
            Ok(())
        }
        Walks::Render(a) => {
            let r = datum(&a.datum)?;
            let mu = vector(&r, &a.mu, "mu")?;
            let lambdas = a
                .lambda
                .iter()
                .map(|s| vector(&r, s, "lambda"))
                .collect::<Result<Vec<_>>>()?;
            let svg = weight_scene(&r, &mu, &lambdas).and_then(|s| render_svg(&r, &s));
            let svg = match svg {
                Ok(s) => s,
                Err(e @ RenderError::NotRank2(_)) => bail!("{e}"),
                Err(e) => return Err(e.into()),
            };
            std::fs::write(&a.svg, svg).with_context(|| format!("writing {}", a.svg.display()))?;
            println!("wrote {}", a.svg.display());
            Ok(())
        }
    }
}

fn run_paving(a: PavingArgs) -> Result<()> {
    let r = datum(&a.datum)?;
    let aw = AffineWeyl::new(&r);
    let mu = vector(&r, &a.mu, "mu")?;
    let lambda = vector(&r, &a.lambda, "lambda")?;
    let family = match &a.nu {
        Some(nu) => convolution_walk_family(
            &r,
            &TensorQuery {
                mu,
                lambda,
                nu: vector(&r, nu, "nu")?,
            },
        )?,
        None => build_p_family(
            &r,
            &BranchingQuery {
                mu,
                lambda,
                levi: levi(&r, &a.levi)?,
            },
        )?,
    };
    if a.json {
        let per_w: Vec<_> = family
            .entries
            .iter()
            .map(|e| {
                json!({
                    "w_word": r.weyl_element(e.w).word_string(),
                    "type_word": aw.format_word(&e.chosen_word),
                    "cells": e.walks.iter().map(|w| [w.stats.cplus, w.stats.fplus]).collect::<Vec<_>>(),
                    "cell_polynomial": e.cell_polynomial().to_string(),
                })
            })
            .collect();
        let out = json!({
            "query": family.query,
            "per_w": per_w,
            "cell_polynomial": family.cell_polynomial().to_string(),
            "dimension_bound": family.bound,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    for e in &family.entries {
        println!(
            "w = {}, type {}: {}",
            r.weyl_element(e.w).word_string(),
            aw.format_word(&e.chosen_word),
            e.cell_polynomial()
        );
    }
    println!("total: {}", family.cell_polynomial());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mult(m) => run_mult(m),
        Command::Walks(w) => run_walks(w),
        Command::Paving(p) => run_paving(p),
        Command::Verify(v) => {
            let r = datum(&v.datum)?;
            let failures = verify::run_all(&r, v.bound);
            if failures > 0 {
                return Err(InvariantFailure(format!("{failures} check(s) failed")).into());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) if e.is::<InvariantFailure>() => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        // The panic hook has already printed the assertion.
        Err(_) => ExitCode::from(2),
    }
}
