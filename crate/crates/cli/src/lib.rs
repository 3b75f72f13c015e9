//! The `density-lab` command tree.

pub mod output;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use density_cantor::{
    compact_thin, density_profile, thick_cothick_sigma, thickness_certificate, CylinderSet,
};
use density_core::word::{format_binary, parse_binary};
use density_core::{CantorMeasure, Error, Rational, Result};
use density_embedding::{embed_stages, embed_verify, RandomTree};
use density_realline::{
    fat_cantor, halfdensity_set, one_sided_ratio, window_ratio, IntervalSet, Schedule, Side,
};
use density_reductions::{
    compactness_reduction, doubling_transform, p3_membership, sharp_trajectory, MatrixCode, Rho,
    SharpK,
};
use density_spongy::{blur_windows, build_level, spongy_measure, verify, TriadicConfig};
use serde_json::json;

pub use output::{Cell, Report, Table};

/// Depth ceiling when `DENSITY_LAB_MAX_DEPTH` is unset.
pub const DEFAULT_MAX_DEPTH: usize = 24;

#[derive(Debug, Parser)]
#[command(
    name = "density-lab",
    version,
    about = "Exact Lebesgue density computations"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "DENSITY_LAB_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH, hide_env_values = true)]
    pub max_depth: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Triadic spongy construction.
    #[command(subcommand)]
    Spongy(SpongyCmd),
    /// Density ratios of clopen and interval sets.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Measure-preserving embeddings into weighted trees.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Reductions from matrix codes.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Cantor space constructions.
    #[command(subcommand)]
    Cantor(CantorCmd),
    /// Certificate suites.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Args)]
pub struct TriadicArgs {
    #[arg(long = "M", value_parser = parse_rational, default_value = "2")]
    pub m: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1/12")]
    pub eps: Rational,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum SpongyCmd {
    /// Components of level `depth`: word, a, b, measure.
    Build(TriadicArgs),
    /// Blur windows at the outer endpoints of every side node up to `depth`.
    Scan(TriadicArgs),
    /// All node certificates up to `depth`.
    Verify(TriadicArgs),
}

#[derive(Debug, Subcommand)]
pub enum DensityCmd {
    /// Localized measures along the prefixes of `z`.
    Profile {
        /// Cylinder set JSON, inline or a file path.
        #[arg(long)]
        set: String,
        #[arg(long, value_parser = parse_word)]
        z: Word,
    },
    /// Window and one-sided ratios of an interval set at `x`.
    Window {
        /// Interval set JSON, inline or a file path, or `halfdensity`.
        #[arg(long)]
        set: String,
        #[arg(long, value_parser = parse_rational)]
        x: Rational,
        /// `dyadic:N` for `2^{-1}, …, 2^{-N}`, or a comma separated list.
        #[arg(long, value_parser = parse_scales)]
        scales: Scales,
    },
}

#[derive(Debug, Clone)]
pub struct Scales(pub Vec<Rational>);

/// A binary word argument such as `0110`.
#[derive(Debug, Clone)]
pub struct Word(pub Vec<u8>);

#[derive(Debug, Subcommand)]
pub enum EmbedCmd {
    /// Builds stages into a seeded random tree and prints the invariant ledger.
    Stage {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        stages: usize,
    },
    /// The sandwich bound for `word` at stage `h`.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        stages: usize,
        #[arg(long, value_parser = parse_word, default_value = "")]
        word: Word,
        #[arg(long, default_value_t = 0)]
        h: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReduceCmd {
    /// Trajectory of the sharp-point reduction.
    Sharp {
        #[arg(long, value_parser = parse_rational, default_value = "3/8")]
        r: Rational,
        /// `allzero:N`, `rowones:J:N`, a matrix text, or a file path.
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Stage measures and certificate of the compactness reduction.
    Compact {
        #[arg(long)]
        code: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 24)]
        columns: usize,
    },
    /// The doubling transform of a matrix code.
    BlurTransform {
        #[arg(long)]
        code: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CantorCmd {
    /// Thick and co-thick union of thin compacts.
    Thick {
        #[arg(long, default_value_t = 4)]
        stages: usize,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// A thin compact subset of `N_t`.
    CompactThin {
        #[arg(long, value_parser = parse_word)]
        t: Word,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Fat Cantor set with `ε_n = 2^{-2n-1}`.
    FatCantor {
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Runs every built-in certificate.
    All,
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| e.to_string())
}

pub fn parse_word(s: &str) -> std::result::Result<Word, String> {
    parse_binary(s.trim()).map(Word).map_err(|e| e.to_string())
}

pub fn parse_scales(s: &str) -> std::result::Result<Scales, String> {
    let s = s.trim();
    if let Some(n) = s.strip_prefix("dyadic:") {
        let n: i64 = n.parse().map_err(|e| format!("dyadic count: {e}"))?;
        if !(1..=4096).contains(&n) {
            return Err(format!("dyadic count must lie in 1..=4096, got {n}"));
        }
        return Ok(Scales((1..=n).map(|k| Rational::pow2(-k)).collect()));
    }
    let v = s
        .split(',')
        .map(parse_rational)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if v.iter().any(|e| !e.is_positive()) {
        return Err("scales must be positive".to_string());
    }
    Ok(Scales(v))
}

/// The argument itself, or the contents of the file it names.
fn inline_or_file(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if !arg.trim_start().starts_with(['{', '[']) && !arg.contains('\n') && p.is_file() {
        return std::fs::read_to_string(p)
            .map_err(|e| Error::pre("read", format!("{}: {e}", p.display())));
    }
    Ok(arg.to_string())
}

fn matrix_arg(arg: &str) -> Result<MatrixCode> {
    MatrixCode::parse_arg(&inline_or_file(arg)?)
}

fn check_depth(name: &'static str, depth: usize, max: usize) -> Result<()> {
    if depth > max {
        return Err(Error::pre(
            name,
            format!("depth {depth} above the ceiling {max}"),
        ));
    }
    Ok(())
}

fn triadic(a: &TriadicArgs, max: usize) -> Result<TriadicConfig> {
    check_depth("spongy", a.depth, max)?;
    TriadicConfig::new(a.m.clone(), a.eps.clone())
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Report> {
    let max = cli.max_depth;
    match &cli.command {
        Command::Spongy(c) => spongy(c, max),
        Command::Density(c) => density(c),
        Command::Embed(c) => embed(c, max),
        Command::Reduce(c) => reduce(c, max),
        Command::Cantor(c) => cantor(c, max),
        Command::Check(CheckCmd::All) => Ok(check_all()),
    }
}

fn spongy(c: &SpongyCmd, max: usize) -> Result<Report> {
    match c {
        SpongyCmd::Build(a) => {
            let cfg = triadic(a, max)?;
            let mut t = Table::new(&["word", "a", "b", "measure"]);
            for node in build_level(&cfg, a.depth)? {
                let m = spongy_measure(&cfg, &node.s)?;
                let word = density_core::word::format_triadic(&node.s);
                t.push(vec![word.into(), node.a.into(), node.b.into(), m.into()]);
            }
            Ok(Report::table(t))
        }
        SpongyCmd::Scan(a) => {
            let cfg = triadic(a, max)?;
            let f = cfg.f();
            let half = (Rational::integer(2) * &cfg.m).recip();
            let mut t = Table::new(&["word", "x", "wide", "narrow", "gap", "pass"]);
            for n in 1..=a.depth {
                for node in build_level(&cfg, n)? {
                    let x = match node.s.last() {
                        Some(-1) => node.a.clone(),
                        Some(1) => node.b.clone(),
                        _ => continue,
                    };
                    let w = blur_windows(&cfg, &node.s, &x)?;
                    let gap = &w.narrow - &w.wide;
                    let pass = w.narrow == f && w.wide < half;
                    let word = density_core::word::format_triadic(&node.s);
                    t.push(vec![
                        word.into(),
                        x.into(),
                        w.wide.into(),
                        w.narrow.into(),
                        gap.into(),
                        pass.into(),
                    ]);
                }
            }
            Ok(Report::table(t))
        }
        SpongyCmd::Verify(a) => {
            let cfg = triadic(a, max)?;
            let r = verify(&cfg, a.depth)?;
            let mut t = Table::new(&["check", "checked", "failures", "result"]);
            for c in &r.checks {
                t.push(vec![
                    c.name.into(),
                    c.checked.into(),
                    c.failures.len().into(),
                    c.pass().into(),
                ]);
            }
            let mut j = serde_json::to_value(&r).expect("serializable");
            for (c, v) in r
                .checks
                .iter()
                .zip(j["checks"].as_array_mut().expect("array"))
            {
                v["result"] = json!(if c.pass() { "pass" } else { "fail" });
            }
            Ok(Report {
                json: j,
                table: Some(t),
            })
        }
    }
}

fn density(c: &DensityCmd) -> Result<Report> {
    match c {
        DensityCmd::Profile { set, z: Word(z) } => {
            let a = CylinderSet::from_json_str(&inline_or_file(set)?)?;
            let prof = density_profile(&a, z, &CantorMeasure);
            let mut t = Table::new(&["n", "prefix", "ratio"]);
            for (n, r) in prof.into_iter().enumerate() {
                t.push(vec![n.into(), format_binary(&z[..n]).into(), r.into()]);
            }
            Ok(Report::table(t))
        }
        DensityCmd::Window { set, x, scales } => {
            let mut t = Table::new(&["eps", "window", "left", "right"]);
            let mut row = |a: &dyn density_realline::LebesgueSet, e: &Rational| -> Result<()> {
                t.push(vec![
                    e.into(),
                    window_ratio(a, x, e)?.into(),
                    one_sided_ratio(a, x, e, Side::Left)?.into(),
                    one_sided_ratio(a, x, e, Side::Right)?.into(),
                ]);
                Ok(())
            };
            if set == "halfdensity" {
                let a = halfdensity_set();
                for e in &scales.0 {
                    row(&a, e)?;
                }
            } else {
                let a = IntervalSet::from_json_str(&inline_or_file(set)?)?;
                for e in &scales.0 {
                    row(&a, e)?;
                }
            }
            Ok(Report::table(t))
        }
    }
}

fn embed(c: &EmbedCmd, max: usize) -> Result<Report> {
    match c {
        EmbedCmd::Stage { seed, stages } => {
            check_depth("embed", *stages, max.min(4))?;
            let tree = RandomTree::new(*seed);
            let plan = embed_stages(&CantorMeasure, &tree, &tree, None, *stages)?;
            let mut t = Table::new(&[
                "stage",
                "node",
                "fiber_size",
                "fiber_mass",
                "weight",
                "upper",
                "holds",
            ]);
            let mut ledger = Vec::new();
            for k in 0..plan.stages.len() {
                let rows = plan.invariant(&CantorMeasure, &tree, k);
                for r in &rows {
                    t.push(vec![
                        k.into(),
                        density_core::word::format_naturals(&r.node).into(),
                        r.fiber_size.into(),
                        (&r.fiber_mass).into(),
                        (&r.weight).into(),
                        (&r.upper).into(),
                        r.holds.into(),
                    ]);
                }
                ledger.push(json!({ "stage": k, "rows": rows }));
            }
            let j = json!({
                "seed": seed,
                "plan": plan,
                "monotone": plan.is_monotone(),
                "choices_disjoint": plan.choices_disjoint(),
                "invariant": ledger,
            });
            Ok(Report::with_table(&j, t))
        }
        EmbedCmd::Verify {
            seed,
            stages,
            word: Word(word),
            h,
        } => {
            check_depth("embed", *stages, max.min(4))?;
            let tree = RandomTree::new(*seed);
            let plan = embed_stages(&CantorMeasure, &tree, &tree, None, *stages)?;
            let s = embed_verify(&plan, &CantorMeasure, &tree, word, *h)?;
            let mut t = Table::new(&["word", "h", "lower", "mass", "upper", "width", "holds"]);
            t.push(vec![
                format_binary(&s.word).into(),
                s.h.into(),
                (&s.lower).into(),
                (&s.mass).into(),
                (&s.upper).into(),
                (&s.width).into(),
                s.holds.into(),
            ]);
            Ok(Report::with_table(&s, t))
        }
    }
}

fn rho_cell(r: Rho) -> Cell {
    match r {
        Rho::Band(n) => Cell::Int(n as i64),
        other => Cell::Text(other.to_string()),
    }
}

fn reduce(c: &ReduceCmd, max: usize) -> Result<Report> {
    match c {
        ReduceCmd::Sharp { r, matrix, depth } => {
            check_depth("reduce sharp", *depth, max)?;
            let z = matrix_arg(matrix)?;
            let k = SharpK::new(r.clone())?;
            let steps = sharp_trajectory(&k, &z, *depth)?;
            let mut t = Table::new(&["stage", "tilde_length", "rho", "lo", "hi"]);
            for s in &steps {
                t.push(vec![
                    s.stage.into(),
                    s.node.tilde().len().into(),
                    rho_cell(s.rho),
                    (&s.bounds.lo).into(),
                    (&s.bounds.hi).into(),
                ]);
            }
            let j = json!({ "r": r, "matrix": z.to_text(), "steps": steps });
            Ok(Report::with_table(&j, t))
        }
        ReduceCmd::Compact {
            code,
            depth,
            columns,
        } => {
            check_depth("reduce compact", *depth, max)?;
            let z = matrix_arg(code)?;
            let red = compactness_reduction(&z, *columns)?;
            let mut t = Table::new(&["n", "stage_measure", "increment_bound"]);
            let mut stages = Vec::new();
            for n in 0..=*columns {
                let m = red.phi_stage(n, *depth)?.measure(&CantorMeasure);
                let inc = red.increment_bound(n);
                t.push(vec![n.into(), (&m).into(), (&inc).into()]);
                stages.push(json!({ "n": n, "stage_measure": m, "increment_bound": inc }));
            }
            let f = red.f();
            let j = json!({
                "columns": red.columns,
                "depth": depth,
                "in_p3": red.in_p3,
                "steps": red.steps,
                "stages": stages,
                "f_stage_measure": f.stage(*depth)?.measure(&CantorMeasure),
                "f_tail_bound": f.tail_bound(*depth),
                "certificate": red.certificate(&z, *depth)?,
            });
            Ok(Report::with_table(&j, t))
        }
        ReduceCmd::BlurTransform { code } => {
            let z = matrix_arg(code)?;
            let d = doubling_transform(&z);
            let j = json!({
                "input": z.to_text(),
                "output": d.to_text(),
                "in_p3": p3_membership(&z),
                "output_in_p3": p3_membership(&d),
            });
            let mut t = Table::new(&["row", "bits"]);
            for (i, r) in d.rows().iter().enumerate() {
                let bits: String = r.iter().map(|b| char::from(b'0' + b)).collect();
                t.push(vec![i.into(), bits.into()]);
            }
            Ok(Report::with_table(&j, t))
        }
    }
}

fn cantor(c: &CantorCmd, max: usize) -> Result<Report> {
    match c {
        CantorCmd::Thick { stages, depth } => {
            let depth = depth.unwrap_or(*stages);
            check_depth("cantor thick", depth, max)?;
            let tc = thick_cothick_sigma(Arc::new(CantorMeasure), *stages)?;
            let cert =
                thickness_certificate(&tc.approx(), &CylinderSet::full(), depth, &CantorMeasure)?;
            let mut t = Table::new(&["n", "target", "chosen", "home", "eps"]);
            for c in &tc.components {
                t.push(vec![
                    Cell::Int(c.n as i64),
                    c.target.as_str().into(),
                    c.chosen.as_str().into(),
                    c.home.as_str().into(),
                    (&c.eps).into(),
                ]);
            }
            let j = json!({
                "stages": stages,
                "depth": depth,
                "components": tc.components,
                "mass_upper_bound": tc.mass_upper_bound(&CantorMeasure),
                "certificate": cert,
            });
            Ok(Report::with_table(&j, t))
        }
        CantorCmd::CompactThin {
            t: Word(t),
            eps,
            depth,
        } => {
            check_depth("cantor compact-thin", *depth, max)?;
            let k = Arc::new(compact_thin(t, eps.clone(), Arc::new(CantorMeasure))?);
            let approx = density_cantor::ApproxSet::from_arc(k.clone());
            let stage = approx.stage(*depth)?;
            let removals = k.removals(*depth)?;
            let mut tab = Table::new(&["index", "node", "removed", "bound"]);
            for r in &removals {
                tab.push(vec![
                    Cell::Int(r.index as i64),
                    format_binary(&r.node).into(),
                    r.removed
                        .as_deref()
                        .map(format_binary)
                        .unwrap_or_default()
                        .into(),
                    (&r.bound).into(),
                ]);
            }
            let j = json!({
                "home": format_binary(t),
                "eps": eps,
                "depth": depth,
                "measure_lower_bound": k.measure_lower_bound(),
                "stage_measure": stage.measure(&CantorMeasure),
                "tail_bound": approx.tail_bound(*depth),
                "removals": removals,
            });
            Ok(Report::with_table(&j, tab))
        }
        CantorCmd::FatCantor { depth } => {
            check_depth("cantor fat-cantor", *depth, max)?;
            let f = fat_cantor(&Schedule::standard(), *depth)?;
            let mut t = Table::new(&["word", "lo", "hi", "length", "limit_measure"]);
            for (w, n) in &f.nodes {
                t.push(vec![
                    w.as_str().into(),
                    (&n.lo).into(),
                    (&n.hi).into(),
                    (&n.length).into(),
                    (&n.limit_measure).into(),
                ]);
            }
            Ok(Report::with_table(&f, t))
        }
    }
}

/// One line of `check all`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckLine {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: &'static str, r: Result<(bool, String)>) -> CheckLine {
    match r {
        Ok((pass, detail)) => CheckLine { name, pass, detail },
        Err(e) => CheckLine {
            name,
            pass: false,
            detail: e.to_string(),
        },
    }
}

/// The built-in certificate suite at small, fixed sizes.
pub fn check_lines() -> Vec<CheckLine> {
    let q = Rational::new;
    let mut out = Vec::new();
    out.push(outcome(
        "spongy_measure",
        (|| {
            let m = spongy_measure(&TriadicConfig::standard(), &[])?;
            Ok((m == q(5, 9), format!("λ(K) = {m}")))
        })(),
    ));
    out.push(outcome(
        "spongy_verify",
        (|| {
            let r = verify(&TriadicConfig::standard(), 6)?;
            let ok = r.all_pass && r.f == q(5, 18) && r.g_bs == q(5, 27);
            Ok((ok, format!("f = {}, g_bs = {}", r.f, r.g_bs)))
        })(),
    ));
    out.push(outcome(
        "fat_cantor",
        (|| {
            let f = fat_cantor(&Schedule::standard(), 10)?;
            let bad = f
                .nodes
                .iter()
                .filter(|(w, n)| n.limit_measure != Rational::pow2(-(w.len() as i64)))
                .count();
            Ok((bad == 0, format!("{} nodes, {bad} off", f.nodes.len())))
        })(),
    ));
    out.push(outcome(
        "halfdensity_windows",
        (|| {
            let a = halfdensity_set();
            let zero = Rational::zero();
            let mut ok = true;
            for k in 0..=8 {
                let e = Rational::pow2(-2 * k);
                let half = &e / Rational::integer(2);
                ok &= window_ratio(&a, &zero, &e)? == q(1, 2);
                ok &= one_sided_ratio(&a, &zero, &e, Side::Right)? == q(2, 3);
                ok &= one_sided_ratio(&a, &zero, &half, Side::Right)? == q(1, 3);
            }
            Ok((ok, "scales 2^-2k, k ≤ 8".to_string()))
        })(),
    ));
    out.push(outcome(
        "sharp_all_zero",
        (|| {
            let k = SharpK::new(q(3, 8))?;
            let rho: Vec<Rho> = sharp_trajectory(&k, &MatrixCode::all_zero(8), 5)?
                .iter()
                .map(|s| s.rho)
                .collect();
            let ok = rho == (0..5).map(Rho::Band).collect::<Vec<_>>();
            Ok((ok, format!("{rho:?}")))
        })(),
    ));
    out.push(outcome(
        "sharp_row_zero",
        (|| {
            let k = SharpK::new(q(3, 8))?;
            let steps = sharp_trajectory(&k, &MatrixCode::row_ones(0, 1), 5)?;
            let ok = steps[1..]
                .iter()
                .all(|s| s.rho == Rho::Band(0) && s.peak as usize == s.stage);
            Ok((ok, "ρ back to 0 after each ascent".to_string()))
        })(),
    ));
    out.push(outcome(
        "compact_all_zero",
        (|| {
            let r = compactness_reduction(&MatrixCode::all_zero(9), 9)?;
            let ok = (0..=8).all(|n| r.increment_bound(n) <= Rational::pow2(-(n as i64) - 2));
            let f = r.f();
            let m = f.stage(8)?.measure(&CantorMeasure);
            Ok((
                ok && m == Rational::pow2(-8),
                format!("stage 8 measure {m}"),
            ))
        })(),
    ));
    out.push(outcome(
        "sigma_thick_cothick",
        (|| {
            let tc = thick_cothick_sigma(Arc::new(CantorMeasure), 4)?;
            let c = thickness_certificate(&tc.approx(), &CylinderSet::full(), 4, &CantorMeasure)?;
            let mass = tc.mass_upper_bound(&CantorMeasure);
            let ok = c.thick && c.cothick && mass <= q(1, 2);
            Ok((ok, format!("checked {}, mass ≤ {mass}", c.checked)))
        })(),
    ));
    out.push(outcome(
        "embedding_invariant",
        (|| {
            let mut ok = true;
            for seed in 0..3 {
                let tree = RandomTree::new(seed);
                let plan = embed_stages(&CantorMeasure, &tree, &tree, None, 2)?;
                for k in 0..plan.stages.len() {
                    ok &= plan
                        .invariant(&CantorMeasure, &tree, k)
                        .iter()
                        .all(|r| r.holds);
                }
                ok &= plan.is_monotone() && plan.choices_disjoint();
            }
            Ok((ok, "seeds 0..3, 2 stages".to_string()))
        })(),
    ));
    out
}

fn check_all() -> Report {
    let lines = check_lines();
    let mut t = Table::new(&["check", "result", "detail"]);
    for l in &lines {
        t.push(vec![l.name.into(), l.pass.into(), l.detail.as_str().into()]);
    }
    let all = lines.iter().all(|l| l.pass);
    let j = json!({ "checks": lines, "all_pass": all });
    Report::with_table(&j, t)
}

/// Renders a report in the requested format.
pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => report
            .table
            .as_ref()
            .map(|t| t.to_csv())
            .ok_or_else(|| Error::pre("render", "this command has no CSV form")),
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        _ => 1,
    }
}

pub fn error_json(e: &Error) -> String {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string()
}
