//! Argument grammar and subcommand implementations.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pml_core::asymptotics::{phi, poly_limit_cdf};
use pml_core::diagnostics::{
    check_a1, check_a1_prime, circle_g_expansion, dyadic_sequence, probe_medial_axis, RatioTrace,
};
use pml_core::montecarlo::{
    check_theorem1_with, poly_limit_rows, sticky_row, CheckRow, CurveFamily, DEFAULT_S_GRID, KS_TOL,
};
use pml_core::{project, Family, PlanarPoint, RateFunction};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::config::{load_config_file, resolve, CurveSettings, ExperimentSettings};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::output::{emit, Cell, Table};
use crate::runner::Runner;

#[derive(Debug, Parser)]
#[command(name = "pml", version, about = "Projected means on rate-controlling planar curves")]
pub struct Cli {
    /// JSON object of default settings (or a run manifest); flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the curve families with their default domain and bound.
    Families(FamiliesArgs),
    /// Export points of a curve.
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
    /// Project one point onto a curve (JSON on stdout).
    Project(ProjectArgs),
    /// Simulate projected sample means, one row per replicate.
    Simulate(SimulateArgs),
    /// Compare simulated laws with their limits.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Deterministic checks of rate functions and curve geometry.
    Diagnose {
        #[command(subcommand)]
        command: DiagnoseCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum CurveCommand {
    /// Evenly spaced parameters over [-B, B].
    Sample(SampleArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// P(±t_n ≤ f(s/√n)) and P(±m2 ≤ f(s/√n)) against Φ(s/σ).
    Theorem1(Theorem1Args),
    /// n^{γ/2} t_n against its polynomial-rate limit and √n g(t_n) against N(0, σ²).
    CorI(CorIArgs),
    /// Fraction of replicates projected exactly onto (1, 0).
    Sticky(StickyArgs),
}

#[derive(Debug, Subcommand)]
pub enum DiagnoseCommand {
    /// f(y + c y (y + f(y))) / f(y) on decreasing y.
    A1(RatioArgs),
    /// f(y + c y f(y) (y + f(y))) / f(y) on decreasing y.
    A1prime(RatioArgs),
    /// Multiplicity of the projection of (-δ, 0).
    Reach(ReachArgs),
    /// ṙ of the offset circle against δ/(δ+1)·t.
    Circle(CircleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurveFlags {
    /// poly, log, exp, circle or kink.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Right end of the domain of f (half-range for the kink).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Circle offset.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Use the graph-type curve (1 + |t| g(|t|), t).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExperimentFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub curve: CurveFlags,
    /// normal_y, normal_xy, uniform_y or point_mass_x0.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist: Option<String>,
    /// Standard deviation of Y.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Standard deviation of X (normal_xy).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_x: Option<f64>,
    /// Correlation of X and Y (normal_xy).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation: Option<f64>,
    /// Sample size.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    /// Number of replicates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Draw normal sample means from their exact law in one step.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shortcut: Option<bool>,
}

#[derive(Debug, Clone, Args)]
pub struct OutFlag {
    /// Output file; stdout when absent. A manifest is written next to it.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FamiliesArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub curve: CurveFlags,
    /// Number of parameter values.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProjectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub curve: CurveFlags,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub experiment: ExperimentFlags,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Theorem1Args {
    #[command(flatten)]
    #[serde(flatten)]
    pub experiment: ExperimentFlags,
    /// Comma-separated s grid for the Φ rows.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    /// Comma-separated s values for the P(|m1 − 1| ≥ f(s/√n)) rows.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1_s: Option<Vec<f64>>,
    /// Doublings of n tried while a Φ row fails.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_doublings: Option<u32>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorIArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub experiment: ExperimentFlags,
    /// Comma-separated s grid for the scaled-parameter rows (poly only).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StickyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub experiment: ExperimentFlags,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RatioArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub curve: CurveFlags,
    /// Perturbation constant.
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Limit the ratios are judged against.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    /// Comma-separated decreasing y values; dyadic 2^-k by default.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReachArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub curve: CurveFlags,
    /// Comma-separated offsets δ in (0, 0.5].
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CircleArgs {
    /// Circle offset.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Comma-separated parameters in (0, 0.5]; dyadic 2^-1 … 2^-12 by default.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutFlag,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli, runner: &Runner) -> CliResult<()> {
    let config = cli.config.as_deref().map(load_config_file).transpose()?;
    let config = config.as_ref();
    match &cli.command {
        Command::Families(a) => families(a, config),
        Command::Curve {
            command: CurveCommand::Sample(a),
        } => curve_sample(a, config),
        Command::Project(a) => project_point(a, config),
        Command::Simulate(a) => simulate(a, config, runner),
        Command::Verify { command } => match command {
            VerifyCommand::Theorem1(a) => verify_theorem1(a, config, runner),
            VerifyCommand::CorI(a) => verify_cor_i(a, config, runner),
            VerifyCommand::Sticky(a) => verify_sticky(a, config, runner),
        },
        Command::Diagnose { command } => match command {
            DiagnoseCommand::A1(a) => diagnose_ratio(a, config, "diagnose a1"),
            DiagnoseCommand::A1prime(a) => diagnose_ratio(a, config, "diagnose a1prime"),
            DiagnoseCommand::Reach(a) => diagnose_reach(a, config),
            DiagnoseCommand::Circle(a) => diagnose_circle(a, config),
        },
    }
}

type Config<'a> = Option<&'a Map<String, Value>>;

fn with_defaults(mut base: Value, extra: Value) -> Value {
    base.as_object_mut()
        .unwrap()
        .extend(extra.as_object().unwrap().clone());
    base
}

/// Adds the resolved settings as metadata, writes the table and, for file
/// output, the manifest.
fn finish<S: Serialize>(
    subcommand: &str,
    statement: Option<&str>,
    settings: &S,
    seed: Option<u64>,
    mut table: Table,
    out: Option<&Path>,
) -> CliResult<()> {
    let resolved = serde_json::to_value(settings)?;
    let mut meta = vec![("pml".to_string(), subcommand.to_string())];
    if let Some(statement) = statement {
        meta.push(("statement".to_string(), statement.to_string()));
    }
    if let Value::Object(map) = &resolved {
        for (k, v) in map {
            let v = match v {
                Value::String(text) => text.clone(),
                other => other.to_string(),
            };
            meta.push((k.clone(), v));
        }
    }
    meta.append(&mut table.meta);
    table.meta = meta;
    let bytes = table.to_bytes()?;
    emit(out, &bytes)?;
    if let Some(path) = out {
        let mut manifest = RunManifest::new(subcommand, resolved, seed);
        manifest.record(path, &bytes);
        manifest.write_next_to(path)?;
    }
    Ok(())
}

fn failing_rows(rows: &[Vec<Cell>], pass_col: usize) -> usize {
    rows.iter().filter(|r| r[pass_col] == Cell::Bool(false)).count()
}

#[derive(Debug, Serialize, Deserialize)]
struct FamiliesSettings {
    gamma: f64,
}

fn families(args: &FamiliesArgs, config: Config) -> CliResult<()> {
    let s: FamiliesSettings = resolve(serde_json::json!({ "gamma": 1.0 }), config, args)?;
    let mut table = Table::new(&["family", "f", "b", "bound", "y_min"]);
    for (family, formula) in [
        (Family::Poly, "y^gamma"),
        (Family::Log, "(-ln y)^(-gamma)"),
        (Family::Exp, "exp(-y^(-gamma))"),
    ] {
        let rf = RateFunction::with_default_b(family, s.gamma)?;
        table.push(vec![
            family.name().into(),
            formula.into(),
            rf.b().into(),
            rf.bound().into(),
            rf.y_min().into(),
        ]);
    }
    let circle = pml_core::Curve::circle(0.3)?;
    table.push(vec![
        "circle".into(),
        "offset circle through (1,0), centre (-delta,0)".into(),
        Cell::Text(String::new()),
        circle.half_range().into(),
        Cell::Text(String::new()),
    ]);
    table.push(vec![
        "kink".into(),
        "(1+|y|, y)".into(),
        Cell::Text(String::new()),
        pml_core::Curve::kink().half_range().into(),
        Cell::Text(String::new()),
    ]);
    finish("families", None, &s, None, table, args.out.out.as_deref())
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleSettings {
    #[serde(flatten)]
    curve: CurveSettings,
    points: usize,
}

fn curve_sample(args: &SampleArgs, config: Config) -> CliResult<()> {
    let defaults = with_defaults(CurveSettings::defaults("poly"), serde_json::json!({ "points": 1001 }));
    let s: SampleSettings = resolve(defaults, config, args)?;
    if s.points < 2 {
        return Err(CliError::Usage(format!("invalid value {} for --points: need at least 2", s.points)));
    }
    let curve = s.curve.spec()?.build()?;
    let b = curve.half_range();
    let mut table = Table::new(&["t", "x", "y", "r", "speed", "arclength"]);
    for i in 0..s.points {
        let last = (s.points - 1) as f64;
        // symmetric about 0 by construction
        let t = (b * (2.0 * i as f64 - last) / last).clamp(-b, b);
        let p = curve.point(t)?;
        table.push(vec![
            t.into(),
            p.x.into(),
            p.y.into(),
            curve.radius(t.abs())?.into(),
            curve.speed(t)?.into(),
            curve.arc_length(t)?.into(),
        ]);
    }
    finish("curve sample", None, &s, None, table, args.out.out.as_deref())
}

#[derive(Debug, Serialize, Deserialize)]
struct ProjectSettings {
    #[serde(flatten)]
    curve: CurveSettings,
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize)]
struct ProjectOutput {
    t: f64,
    px: f64,
    py: f64,
    sq_dist: f64,
    multiplicity: usize,
    minimizers: Vec<f64>,
    at_boundary: bool,
    degenerate: bool,
}

fn project_point(args: &ProjectArgs, config: Config) -> CliResult<()> {
    let defaults = with_defaults(CurveSettings::defaults("poly"), serde_json::json!({ "x": null, "y": null }));
    let s: ProjectSettings = resolve(defaults, config, args)
        .map_err(|_| CliError::Usage("project needs --x and --y".to_string()))?;
    let curve = s.curve.spec()?.build()?;
    let z = PlanarPoint::new(s.x, s.y);
    if !z.is_finite() {
        return Err(CliError::Usage("--x and --y must be finite".to_string()));
    }
    let res = project(&curve, z);
    let out = ProjectOutput {
        t: res.t_star,
        px: res.point.x,
        py: res.point.y,
        sq_dist: res.sq_dist,
        multiplicity: res.multiplicity,
        minimizers: if res.degenerate {
            Vec::new()
        } else if res.all_minimizers.is_empty() {
            vec![res.t_star]
        } else {
            res.all_minimizers.clone()
        },
        at_boundary: res.at_boundary,
        degenerate: res.degenerate,
    };
    let mut text = serde_json::to_string(&out)?;
    text.push('\n');
    emit(args.out.out.as_deref(), text.as_bytes())?;
    if let Some(path) = args.out.out.as_deref() {
        let mut manifest = RunManifest::new("project", serde_json::to_value(&s)?, None);
        manifest.record(path, text.as_bytes());
        manifest.write_next_to(path)?;
    }
    Ok(())
}

fn simulate(args: &SimulateArgs, config: Config, runner: &Runner) -> CliResult<()> {
    let s: ExperimentSettings = resolve(ExperimentSettings::defaults("poly", 1.0, 400, 20_000), config, args)?;
    let cfg = s.experiment()?;
    let outcome = runner.run(&cfg)?;
    let mut table = Table::new(&["replicate", "t_n", "m1", "m2"]);
    table.meta("shortcut_used", cfg.uses_shortcut());
    for (i, r) in outcome.replicates.iter().enumerate() {
        table.push(vec![i.into(), r.t_n.into(), r.m1.into(), r.m2.into()]);
    }
    finish("simulate", None, &s, Some(s.seed), table, args.out.out.as_deref())
}

fn check_row_cells(row: &CheckRow) -> Vec<Cell> {
    vec![
        row.statistic.label().into(),
        row.s.into(),
        row.empirical.into(),
        row.theoretical.into(),
        row.abs_diff.into(),
        row.pass.into(),
    ]
}

const CHECK_HEADER: [&str; 6] = ["statistic", "s", "empirical", "theoretical", "abs_diff", "pass"];

#[derive(Debug, Serialize, Deserialize)]
struct Theorem1Settings {
    #[serde(flatten)]
    experiment: ExperimentSettings,
    s: Vec<f64>,
    m1_s: Vec<f64>,
    max_doublings: u32,
}

const THEOREM1_STATEMENT: &str =
    "P(t_n <= f(s/sqrt n)), P(-t_n <= f(s/sqrt n)), P(m2 <= f(s/sqrt n)), P(-m2 <= f(s/sqrt n)) -> Phi(s/sigma); P(|m1-1| >= f(s/sqrt n)) -> 0";

fn verify_theorem1(args: &Theorem1Args, config: Config, runner: &Runner) -> CliResult<()> {
    let defaults = with_defaults(
        ExperimentSettings::defaults("poly", 1.0, 400, 20_000),
        serde_json::json!({
            "s": DEFAULT_S_GRID,
            "m1_s": [],
            "max_doublings": pml_core::montecarlo::MAX_DOUBLINGS,
        }),
    );
    let s: Theorem1Settings = resolve(defaults, config, args)?;
    let cfg = s.experiment.experiment()?;
    let report = check_theorem1_with(&cfg, &s.s, &s.m1_s, s.max_doublings, |c| runner.run(c))?;
    let last = report.final_attempt();
    let mut table = Table::new(&CHECK_HEADER);
    let attempts: Vec<String> = report
        .attempts
        .iter()
        .map(|a| format!("{}:{}", a.n, if a.limit_rows_pass() { "pass" } else { "fail" }))
        .collect();
    table.meta("attempts", attempts.join(" "));
    table.meta("n_used", last.n);
    if last.rows.iter().any(|r| r.underflow) {
        table.meta("warning", "f(s/sqrt n) underflows for some s; those rows fail");
    }
    for row in &last.rows {
        table.push(check_row_cells(row));
    }
    let failures = failing_rows(&table.rows, 5);
    finish(
        "verify theorem1",
        Some(THEOREM1_STATEMENT),
        &s,
        Some(s.experiment.seed),
        table,
        args.out.out.as_deref(),
    )?;
    if failures > 0 {
        return Err(CliError::Validation(format!("{failures} row(s) outside tolerance")));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct CorISettings {
    #[serde(flatten)]
    experiment: ExperimentSettings,
    s: Vec<f64>,
}

const COR_I_STATEMENT: &str =
    "poly rates: n^(gamma/2) t_n -> sgn(T)|T|^gamma with T ~ N(0, sigma^2); every family: sqrt(n) g(t_n) -> N(0, sigma^2)";

fn verify_cor_i(args: &CorIArgs, config: Config, runner: &Runner) -> CliResult<()> {
    let defaults = with_defaults(
        ExperimentSettings::defaults("poly", 1.0, 400, 20_000),
        serde_json::json!({ "s": [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] }),
    );
    let s: CorISettings = resolve(defaults, config, args)?;
    let cfg = s.experiment.experiment()?;
    let curve = cfg.curve.build()?;
    let outcome = runner.run(&cfg)?;
    let sigma = cfg.source.sigma();
    let mut table = Table::new(&CHECK_HEADER);
    let ks_row = |label: &str, ks: f64| -> Vec<Cell> {
        vec![
            label.into(),
            Cell::Text(String::new()),
            ks.into(),
            0.0.into(),
            ks.into(),
            (ks <= KS_TOL).into(),
        ]
    };
    if cfg.curve.family == CurveFamily::Poly && !cfg.curve.simple {
        let gamma = cfg.curve.gamma;
        let (rows, ks) = poly_limit_rows(&outcome, gamma, &s.s);
        for row in &rows {
            table.push(check_row_cells(row));
        }
        debug_assert!(rows.iter().all(|r| r.theoretical == poly_limit_cdf(r.s, gamma, sigma)));
        table.push(ks_row("ks(scaled_t_n)", ks));
    }
    let g = outcome
        .g_scale(&curve)
        .ok_or_else(|| CliError::Usage("the kink has no rate scale; use verify sticky".to_string()))?;
    table.push(ks_row("ks(sqrt_n_g)", g.ks_distance(|x| phi(x / sigma))));
    let failures = failing_rows(&table.rows, 5);
    finish(
        "verify cor-i",
        Some(COR_I_STATEMENT),
        &s,
        Some(s.experiment.seed),
        table,
        args.out.out.as_deref(),
    )?;
    if failures > 0 {
        return Err(CliError::Validation(format!("{failures} row(s) outside tolerance")));
    }
    Ok(())
}

fn verify_sticky(args: &StickyArgs, config: Config, runner: &Runner) -> CliResult<()> {
    let s: ExperimentSettings = resolve(ExperimentSettings::defaults("kink", 0.1, 100, 1000), config, args)?;
    let cfg = s.experiment()?;
    let outcome = runner.run(&cfg)?;
    let row = sticky_row(&outcome);
    let mut table = Table::new(&CHECK_HEADER);
    table.push(check_row_cells(&row));
    finish(
        "verify sticky",
        Some("P(m_n = (1,0)) -> 1 on the kinked curve (1+|y|, y)"),
        &s,
        Some(s.seed),
        table,
        args.out.out.as_deref(),
    )?;
    if !row.pass {
        return Err(CliError::Validation(format!(
            "sticky fraction {} below {}",
            row.empirical,
            pml_core::montecarlo::STICKY_MIN
        )));
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct RatioSettings {
    #[serde(flatten)]
    curve: CurveSettings,
    c: f64,
    target: f64,
    y: Option<Vec<f64>>,
}

fn rate_of(curve: &CurveSettings) -> CliResult<RateFunction> {
    curve
        .spec()?
        .rate_function()?
        .ok_or_else(|| CliError::Usage(format!("--family {} has no rate function", curve.family)))
}

fn trace_table(trace: &RatioTrace) -> Table {
    let mut table = Table::new(&["y", "ratio", "deviation"]);
    table.meta("verdict", trace.verdict.name());
    for (&(y, r), d) in trace.points.iter().zip(trace.deviations()) {
        table.push(vec![y.into(), r.into(), d.into()]);
    }
    table
}

fn diagnose_ratio(args: &RatioArgs, config: Config, subcommand: &str) -> CliResult<()> {
    let defaults = with_defaults(
        CurveSettings::defaults("poly"),
        serde_json::json!({ "c": 1.0, "target": 1.0, "y": null }),
    );
    let s: RatioSettings = resolve(defaults, config, args)?;
    let rf = rate_of(&s.curve)?;
    let ys = s.y.clone().unwrap_or_else(|| dyadic_sequence(&rf));
    let (trace, statement) = if subcommand.ends_with("a1prime") {
        (check_a1_prime(&rf, s.c, &ys)?, "f(y + c y f(y) (y + f(y))) / f(y) -> 1")
    } else {
        (check_a1(&rf, s.c, &ys)?, "f(y + c y (y + f(y))) / f(y) -> 1")
    };
    let trace = trace.retarget(s.target);
    eprintln!("{subcommand}: verdict {} (target {})", trace.verdict.name(), s.target);
    finish(subcommand, Some(statement), &s, None, trace_table(&trace), args.out.out.as_deref())
}

#[derive(Debug, Serialize, Deserialize)]
struct ReachSettings {
    #[serde(flatten)]
    curve: CurveSettings,
    deltas: Vec<f64>,
}

fn diagnose_reach(args: &ReachArgs, config: Config) -> CliResult<()> {
    let defaults = with_defaults(
        CurveSettings::defaults("poly"),
        serde_json::json!({ "deltas": [0.01, 0.05, 0.1, 0.2, 0.5] }),
    );
    let s: ReachSettings = resolve(defaults, config, args)?;
    let curve = s.curve.spec()?.build()?;
    let probes = probe_medial_axis(&curve, &s.deltas)?;
    let mut table = Table::new(&["delta", "multiplicity", "degenerate", "minimizers"]);
    for p in &probes {
        let mins = if p.degenerate {
            String::new()
        } else {
            p.minimizers.iter().map(|&t| crate::output::fmt_f64(t)).collect::<Vec<_>>().join(";")
        };
        table.push(vec![p.delta.into(), p.multiplicity.into(), p.degenerate.into(), mins.into()]);
    }
    finish(
        "diagnose reach",
        Some("(-delta, 0) has several closest points when g(t) = o(t)"),
        &s,
        None,
        table,
        args.out.out.as_deref(),
    )
}

#[derive(Debug, Serialize, Deserialize)]
struct CircleSettings {
    delta: f64,
    t: Vec<f64>,
}

fn diagnose_circle(args: &CircleArgs, config: Config) -> CliResult<()> {
    let ts: Vec<f64> = (1..=12).map(|k| 2f64.powi(-k)).collect();
    let s: CircleSettings = resolve(serde_json::json!({ "delta": 0.3, "t": ts }), config, args)?;
    let rows = circle_g_expansion(s.delta, &s.t)?;
    let mut table = Table::new(&["t", "g", "linear", "ratio"]);
    for r in &rows {
        table.push(vec![r.t.into(), r.g.into(), r.linear.into(), r.ratio.into()]);
    }
    finish(
        "diagnose circle",
        Some("offset circle: g(t) = delta/(delta+1) t + O(t^2)"),
        &s,
        None,
        table,
        args.out.out.as_deref(),
    )
}
