//! Command-line front end: `dims`, `typeset`, `knapp`, `balltest`,
//! `verify` and `plot`.
//!
//! Every file written embeds the tool version and the parsed arguments:
//! JSON documents under `version`/`config`, CSV files as leading `#` lines.
//! Exit codes: 0 ok, 1 a verification failed, 2 usage or parse error,
//! 3 resource cap.

pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dimension::{
    closed_form_profile, gamma_estimate, known_profile, linspace_step, profile_from_table, rho_star,
    spectrum_point, union_profile, NuSharpOptions, NuSharpProfile, SpectrumReport,
};
use crate::entropy::cover_table;
use crate::setgen::{parse_set_spec, DilationSetSpec, LogInterval};
use crate::sphere_lab::{ball_test_experiment, lower_bound_experiment, ExperimentOptions, KRule, RadiiChoice};
use crate::svg::{region_svg, SvgOptions};
use crate::typeset::{
    default_p_grid, region_boundary, uncertainty_regions, union_crossings, verify_equivalence, TypeSetRegion,
    BOUNDARY_TOL,
};
use crate::{dimension, Error, Result, VERSION};

#[derive(Debug, Parser, Serialize)]
#[command(name = "sphermax", version, about = "Dimension spectra and power-weight type sets of spherical maximal operators")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Covering-number dimensions: β, Assouad spectrum, ν♯, γ, ρ_*.
    Dims(DimsArgs),
    /// Type-set region in the (1/p, α/p) plane.
    Typeset(TypesetArgs),
    /// Knapp-type lower-bound experiment over a list of scales.
    Knapp(KnappArgs),
    /// Maximal function tested on small balls χ_δ.
    Balltest(BallArgs),
    /// Run a verification suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Render a region JSON written by `typeset` as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args, Serialize)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Write only this format (default: all applicable).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
pub struct DimsArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 16)]
    pub jmax: u32,
    /// ρ grid as lo:hi:step.
    #[arg(long, default_value = "0:2:0.1")]
    pub rho: String,
    /// θ grid for the Assouad spectrum, lo:hi:step.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub theta: String,
    /// Declared log₂ scan range lo:hi for sets without bounded or periodic structure.
    #[arg(long)]
    pub range: Option<String>,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct TypesetArgs {
    #[arg(long, conflicts_with_all = ["closed_form", "union"])]
    pub set: Option<String>,
    /// Assouad-regular profile, e.g. beta=0.5,gamma=1.
    #[arg(long, conflicts_with = "union")]
    pub closed_form: Option<String>,
    /// Union of regular pieces, e.g. "0.25:0.5,0.4:1".
    #[arg(long)]
    pub union: Option<String>,
    /// Estimate ν♯ from covering numbers even when a closed form is known.
    #[arg(long)]
    pub estimate: bool,
    #[arg(long, default_value_t = 16)]
    pub jmax: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Number of p values along the boundary.
    #[arg(long, default_value_t = 200)]
    pub np: usize,
    /// Side of the grid for the equivalence check.
    #[arg(long, default_value_t = 100)]
    pub check: usize,
    #[arg(long)]
    pub title: Option<String>,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct KnappArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Scales j, comma separated.
    #[arg(long, default_value = "6,8,10,12")]
    pub j: String,
    /// half, j-<m> or <num>/<den>.
    #[arg(long, default_value = "half")]
    pub k_rule: String,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 128)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Take the maximal function over all sampled radii of E ∩ I.
    #[arg(long)]
    pub full_sample: bool,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BallArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// δ = 2^{-m} for m in lo:hi.
    #[arg(long, default_value = "4:10")]
    pub levels: String,
    #[command(flatten)]
    pub output: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: verify::Suite,
    /// Restrict to one dimension (default: the suite's standard set).
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 12)]
    pub j: u32,
    #[arg(long, default_value_t = 5)]
    pub k: u32,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub jmax: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct PlotArgs {
    /// Region JSON from `typeset`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "region.svg")]
    pub output: PathBuf,
    #[arg(long)]
    pub title: Option<String>,
    #[arg(long)]
    pub no_inset: bool,
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let echo = serde_json::to_value(&cli).unwrap_or(serde_json::Value::Null);
    let result = match &cli.command {
        Command::Dims(a) => cmd_dims(a, &echo).map(|_| 0),
        Command::Typeset(a) => cmd_typeset(a, &echo).map(|_| 0),
        Command::Knapp(a) => cmd_knapp(a, &echo).map(|_| 0),
        Command::Balltest(a) => cmd_balltest(a, &echo).map(|_| 0),
        Command::Verify(a) => verify::cmd_verify(a),
        Command::Plot(a) => cmd_plot(a, &echo).map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap(_) | Error::OracleCap { .. } => 3,
        _ => 2,
    }
}

/// Parses a set description, printing a caret under the failing byte.
pub fn parse_set(text: &str) -> Result<DilationSetSpec> {
    parse_set_spec(text).inspect_err(|e| {
        if let Error::Syntax { pos, .. } = e {
            let col = text.char_indices().take_while(|&(i, _)| i < *pos).count();
            eprintln!("  {text}\n  {}^", " ".repeat(col));
        }
    })
}

/// `lo:hi:step` grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parameter(format!("bad grid {s:?}; expected lo:hi:step")))?;
    match nums[..] {
        [lo, hi, step] if step > 0.0 && hi >= lo => Ok(linspace_step(lo, hi, step)),
        _ => Err(Error::Parameter(format!("bad grid {s:?}; expected lo:hi:step with step > 0"))),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Parameter(format!("expected lo:hi, got {s:?}")))?;
    let bad = || Error::Parameter(format!("expected lo:hi, got {s:?}"));
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Parameter(format!("bad list entry {x:?} in {s:?}"))))
        .collect()
}

/// `beta=0.5,gamma=1`.
pub fn parse_closed_form(s: &str) -> Result<(f64, f64)> {
    let (mut beta, mut gamma) = (None, None);
    for part in s.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parameter(format!("expected key=value in {s:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::Parameter(format!("bad number in {s:?}")))?;
        match k.trim() {
            "beta" => beta = Some(v),
            "gamma" => gamma = Some(v),
            other => return Err(Error::Parameter(format!("unknown key {other:?}; expected beta, gamma"))),
        }
    }
    match (beta, gamma) {
        (Some(b), Some(g)) => Ok((b, g)),
        _ => Err(Error::Parameter(format!("closed form needs beta and gamma, got {s:?}"))),
    }
}

/// `"b:g,b:g"`.
pub fn parse_union(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',').map(parse_pair).collect()
}

/// Writes files into one directory with the config echo attached.
pub struct Output<'a> {
    dir: &'a Path,
    format: Option<Format>,
    echo: &'a serde_json::Value,
}

impl<'a> Output<'a> {
    pub fn new(args: &'a OutArgs, echo: &'a serde_json::Value) -> Result<Self> {
        fs::create_dir_all(&args.out)?;
        Ok(Output { dir: &args.out, format: args.format, echo })
    }

    pub fn wants(&self, f: Format) -> bool {
        self.format.map_or(true, |g| g == f)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn json(&self, name: &str, value: &impl Serialize) -> Result<PathBuf> {
        let doc = serde_json::json!({ "tool": "sphermax", "version": VERSION, "config": self.echo, "result": value });
        let path = self.path(name);
        fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
        Ok(path)
    }

    pub fn csv(&self, name: &str, body: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<PathBuf> {
        let mut buf = Vec::new();
        writeln!(buf, "# sphermax {VERSION}")?;
        writeln!(buf, "# config: {}", serde_json::to_string(self.echo)?)?;
        body(&mut buf)?;
        let path = self.path(name);
        fs::write(&path, buf)?;
        Ok(path)
    }

    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, body)?;
        Ok(path)
    }
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

#[derive(Serialize)]
struct DimsSummary<'a> {
    spec: &'a DilationSetSpec,
    j_max: u32,
    beta: f64,
    gamma: f64,
    gamma_fell_back: bool,
    rho_star: f64,
    convexity_violation: f64,
    spectrum_flagged: usize,
    known: Option<(f64, f64)>,
    per_scale: &'a [(u32, f64, f64)],
}

fn cmd_dims(a: &DimsArgs, echo: &serde_json::Value) -> Result<()> {
    let spec = parse_set(&a.set)?;
    let rho = parse_grid(&a.rho)?;
    let thetas = parse_grid(&a.theta)?;
    let range = a.range.as_deref().map(parse_pair).transpose()?.map(|(lo, hi)| LogInterval::new(lo, hi)).transpose()?;
    if a.jmax < 10 {
        return Err(Error::Parameter(format!("--jmax must be at least 10, got {}", a.jmax)));
    }
    let table = cover_table(&spec, a.jmax, range)?;
    let beta = dimension::beta_from_table(&table);
    let profile = profile_from_table(&table, &rho, NuSharpOptions { range, ..Default::default() })?;
    let (gamma, fell_back) = gamma_estimate(&profile);
    let spectrum = SpectrumReport {
        points: thetas.iter().filter(|&&t| t > 0.0 && t < 1.0).map(|&t| spectrum_point(&table, t)).collect::<Result<_>>()?,
    };
    let summary = DimsSummary {
        spec: &spec,
        j_max: a.jmax,
        beta: profile.beta,
        gamma,
        gamma_fell_back: fell_back,
        rho_star: rho_star(&profile),
        convexity_violation: profile.convexity_violation,
        spectrum_flagged: spectrum.points.iter().filter(|p| p.flagged).count(),
        known: known_profile(&spec).map(|p| (p.beta, p.gamma)),
        per_scale: &beta.per_scale,
    };
    println!("β = {:.4}  γ = {:.4}{}  ρ_* = {:.4}", summary.beta, gamma, if fell_back { " (fallback)" } else { "" }, summary.rho_star);
    if let Some((b, g)) = summary.known {
        println!("closed form: β = {b:.4}, γ = {g:.4}");
    }
    let out = Output::new(&a.output, echo)?;
    let mut paths = Vec::new();
    if out.wants(Format::Csv) {
        paths.push(out.csv("profile.csv", |w| profile.write_csv(w))?);
        paths.push(out.csv("spectrum.csv", |w| spectrum.write_csv(w))?);
    }
    if out.wants(Format::Json) {
        paths.push(out.json("dims.json", &summary)?);
        if a.output.format == Some(Format::Json) {
            paths.push(out.json("profile.json", &profile)?);
            paths.push(out.json("spectrum.json", &spectrum)?);
        }
    }
    report(&paths);
    Ok(())
}

fn typeset_profile(a: &TypesetArgs) -> Result<(NuSharpProfile, Option<Vec<(f64, f64)>>)> {
    if let Some(cf) = &a.closed_form {
        let (b, g) = parse_closed_form(cf)?;
        return Ok((closed_form_profile(b, g)?, None));
    }
    if let Some(u) = &a.union {
        let parts = parse_union(u)?;
        return Ok((union_profile(&parts)?, Some(parts)));
    }
    let Some(text) = &a.set else {
        return Err(Error::Parameter("one of --set, --closed-form, --union is required".into()));
    };
    let spec = parse_set(text)?;
    if !a.estimate {
        if let Some(p) = known_profile(&spec) {
            return Ok((p, None));
        }
    }
    let grid = linspace_step(0.0, 2.0, 0.05);
    Ok((dimension::nu_sharp_estimate(&spec, &grid, a.jmax)?, None))
}

fn svg_for(region: &TypeSetRegion, title: &str, echo: &serde_json::Value) -> String {
    region_svg(
        region,
        &SvgOptions {
            title: title.to_string(),
            comment: format!("sphermax {VERSION} config: {echo}"),
            zoom_inset: true,
        },
    )
}

fn cmd_typeset(a: &TypesetArgs, echo: &serde_json::Value) -> Result<()> {
    if a.d < 2 {
        return Err(Error::Parameter(format!("--d must be at least 2, got {}", a.d)));
    }
    let (profile, union) = typeset_profile(a)?;
    let grid = default_p_grid(&profile, a.d, a.np);
    let region = region_boundary(&profile, a.d, &grid)?;
    let eq = verify_equivalence(&profile, a.d, a.check, BOUNDARY_TOL);
    println!(
        "β = {:.4}, γ = {:.4}, d = {}: 1/p_β = {:.4}, 1/p_γ = {:.4}",
        profile.beta,
        profile.gamma,
        a.d,
        1.0 / region.p_beta,
        1.0 / region.p_gamma
    );
    println!(
        "equivalence: {} points tested, {} in band, {} disagreements",
        eq.tested,
        eq.skipped_band,
        eq.disagreements.len()
    );
    if let Some(parts) = &union {
        for c in union_crossings(parts, a.d) {
            println!(
                "crossing at p = {:.4} between pieces {:?}{}",
                c.p,
                c.components,
                if c.admissible { "" } else { " (outside [p_β, ∞))" }
            );
        }
    }
    let title = a.title.clone().unwrap_or_else(|| format!("type set, d = {}", a.d));
    let out = Output::new(&a.output, echo)?;
    let mut paths = Vec::new();
    if out.wants(Format::Csv) {
        paths.push(out.csv("region.csv", |w| region.write_csv(w))?);
        if !profile.is_closed_form() {
            let (inner, outer) = uncertainty_regions(&profile, a.d, &grid)?;
            paths.push(out.csv("region_inner.csv", |w| inner.write_csv(w))?);
            paths.push(out.csv("region_outer.csv", |w| outer.write_csv(w))?);
        }
    }
    if out.wants(Format::Json) {
        paths.push(out.json("region.json", &region)?);
        paths.push(out.json("equivalence.json", &eq)?);
    }
    if out.wants(Format::Svg) {
        paths.push(out.text("region.svg", &svg_for(&region, &title, echo))?);
    }
    report(&paths);
    Ok(())
}

fn cmd_knapp(a: &KnappArgs, echo: &serde_json::Value) -> Result<()> {
    let spec = parse_set(&a.set)?;
    let js: Vec<u32> = parse_list(&a.j)?;
    let rule = KRule::parse(&a.k_rule)?;
    let opts = ExperimentOptions {
        samples_per_piece: a.samples,
        seed: a.seed,
        eps: a.eps,
        radii: if a.full_sample { RadiiChoice::FullSample } else { RadiiChoice::Net },
        ..Default::default()
    };
    let rep = lower_bound_experiment(&spec, a.d, a.p, a.alpha, &js, rule, &opts)?;
    println!("   j   k  case     |τ|     N   log2 R   theory");
    for r in &rep.rows {
        println!(
            "  {:>2}  {:>2}  {:<7} {:>5}  {:>4}  {:>7.3}  {:>7.3}",
            r.j,
            r.k,
            format!("{:?}", r.case),
            r.tau,
            r.n_cover,
            r.log2_ratio,
            r.theory
        );
    }
    if !rep.skipped.is_empty() {
        println!("skipped (E ∩ I empty): {:?}", rep.skipped);
    }
    println!("slope {:.3}, theory {:.3}, {}", rep.measured_slope, rep.theory_slope, if rep.passed { "within tolerance" } else { "OUTSIDE tolerance" });
    let out = Output::new(&a.output, echo)?;
    let mut paths = Vec::new();
    if out.wants(Format::Csv) {
        paths.push(out.csv("knapp.csv", |w| rep.write_csv(w))?);
    }
    if out.wants(Format::Json) {
        paths.push(out.json("knapp.json", &rep)?);
    }
    report(&paths);
    Ok(())
}

fn cmd_balltest(a: &BallArgs, echo: &serde_json::Value) -> Result<()> {
    let spec = parse_set(&a.set)?;
    let (lo, hi) = parse_pair(&a.levels)?;
    if !(lo >= 1.0 && hi >= lo && hi <= 20.0) || lo.fract() != 0.0 || hi.fract() != 0.0 {
        return Err(Error::Parameter(format!("--levels needs integers 1 ≤ lo ≤ hi ≤ 20, got {}", a.levels)));
    }
    let deltas: Vec<f64> = (lo as i32..=hi as i32).map(|m| (-(m as f64)).exp2()).collect();
    let rep = ball_test_experiment(&spec, a.d, a.p, a.alpha, &deltas)?;
    println!("       δ      N   log2 ratio");
    for r in &rep.rows {
        println!("  {:.2e}  {:>5}  {:>9.4}", r.delta, r.n_cover, r.log2_ratio);
    }
    println!(
        "slope {:.3} (predicted {:.3}); β ≈ {:.3}, growth expected iff α > {:.3}",
        rep.measured_slope, rep.predicted_slope, rep.beta_measured, rep.necessity_bound
    );
    let out = Output::new(&a.output, echo)?;
    let mut paths = Vec::new();
    if out.wants(Format::Csv) {
        paths.push(out.csv("balltest.csv", |w| {
            let mut c = csv::Writer::from_writer(w);
            for r in &rep.rows {
                c.serialize(r)?;
            }
            c.flush()?;
            Ok(())
        })?);
    }
    if out.wants(Format::Json) {
        paths.push(out.json("balltest.json", &rep)?);
    }
    report(&paths);
    Ok(())
}

fn cmd_plot(a: &PlotArgs, echo: &serde_json::Value) -> Result<()> {
    let text = fs::read_to_string(&a.input)?;
    let doc: serde_json::Value = serde_json::from_str(&text)?;
    let region: TypeSetRegion = serde_json::from_value(doc.get("result").cloned().unwrap_or(doc))?;
    let title = a.title.clone().unwrap_or_else(|| format!("type set, d = {}", region.d));
    let svg = region_svg(
        &region,
        &SvgOptions { title, comment: format!("sphermax {VERSION} config: {echo}"), zoom_inset: !a.no_inset },
    );
    if let Some(parent) = a.output.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(&a.output, svg)?;
    println!("wrote {}", a.output.display());
    Ok(())
}
