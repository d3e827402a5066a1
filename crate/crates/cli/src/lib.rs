//! The `strongsum` command line: single computations, inequality
//! verification runs, CSV output and replayable manifests.

pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use strongsum::characteristics::characteristic_table;
use strongsum::fourier::{coefficients_by_quadrature, compute_coefficients, kernel_deviations, partial_sums_upto};
use strongsum::lab::{verify, verify_corollary, InequalityId, RatioReport, SweepSpec};
use strongsum::strong_means::{strong_mean_hq, IndexSequence};
use strongsum::{by_name, QuadratureSpec};

use config::RunConfig;
use output::{check_out, corollary_table, emit, num, report_rows, Table, REPORT_HEADER};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] strongsum::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub const EXIT_CODE: i32 = 2;
}

#[derive(Debug, Parser)]
#[command(name = "strongsum", version, about = "Strong means of Fourier series and their inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier coefficients of a corpus function.
    Coeffs(Opts),
    /// Partial sums at a point, by coefficients and by the Dirichlet kernel.
    PartialSums(Opts),
    /// Pointwise characteristics on the dyadic grid.
    Chars(Opts),
    /// Strong means `H^q` over an index family.
    Means(Opts),
    /// Check E1..E4.
    VerifyElementary(VerifyOpts),
    /// Check L1..L7 (`L4` runs both halves).
    VerifyLemma(VerifyOpts),
    /// Check T1..T6.
    VerifyTheorem(VerifyOpts),
    /// Decay of the dyadic block means.
    VerifyCorollary(Opts),
    /// Run a list of checks (`--ids`, default all) into one CSV.
    Sweep(Opts),
}

#[derive(Debug, Args)]
pub struct VerifyOpts {
    /// Inequality ids.
    #[arg(id = "checks", value_name = "IDS", required = true)]
    pub checks: Vec<String>,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `default`, `small`, or a file of sweep keys.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Output CSV; a manifest is written next to it.
    #[arg(long)]
    pub out: Option<String>,
    /// Any configuration key, as `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long)]
    pub indices: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub degree: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub kmax: Option<String>,
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub ids: Option<String>,
}

impl Opts {
    fn flags(&self) -> Result<Vec<(String, String)>, CliError> {
        let mut out = Vec::new();
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set `{kv}`: expected KEY=VALUE")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        let named = [
            ("sweep", &self.sweep),
            ("out", &self.out),
            ("function", &self.function),
            ("x", &self.x),
            ("indices", &self.indices),
            ("q", &self.q),
            ("p", &self.p),
            ("s", &self.s),
            ("degree", &self.degree),
            ("samples", &self.samples),
            ("kmax", &self.kmax),
            ("levels", &self.levels),
            ("seed", &self.seed),
            ("ids", &self.ids),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                out.push((k.to_string(), v.clone()));
            }
        }
        Ok(out)
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Coeffs(_) => "coeffs",
            Command::PartialSums(_) => "partial-sums",
            Command::Chars(_) => "chars",
            Command::Means(_) => "means",
            Command::VerifyElementary(_) => "verify-elementary",
            Command::VerifyLemma(_) => "verify-lemma",
            Command::VerifyTheorem(_) => "verify-theorem",
            Command::VerifyCorollary(_) => "verify-corollary",
            Command::Sweep(_) => "sweep",
        }
    }

    /// Resolves the configuration for this subcommand.
    pub fn config(&self) -> Result<RunConfig, CliError> {
        let (opts, ids) = match self {
            Command::VerifyElementary(v) | Command::VerifyLemma(v) | Command::VerifyTheorem(v) => {
                (&v.opts, Some(v.checks.join(",")))
            }
            Command::Coeffs(o)
            | Command::PartialSums(o)
            | Command::Chars(o)
            | Command::Means(o)
            | Command::VerifyCorollary(o)
            | Command::Sweep(o) => (o, None),
        };
        let mut flags = opts.flags()?;
        if let Some(ids) = ids {
            flags.push(("ids".into(), ids));
        }
        RunConfig::resolve(self.name(), opts.config.as_deref(), flags)
    }
}

/// Whether every check passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

/// Parses, runs and maps the result to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { CliError::EXIT_CODE } else { 0 };
        }
    };
    match cli.command.config().and_then(|cfg| run(&cfg)) {
        Ok(o) => o.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            CliError::EXIT_CODE
        }
    }
}

fn quad(cfg: &RunConfig) -> Result<QuadratureSpec, CliError> {
    let d = QuadratureSpec::default();
    let cells = cfg.usize_key("quad_cells")?.unwrap_or(d.cells());
    let points = cfg.usize_key("quad_points")?.unwrap_or(d.points_per_cell());
    Ok(QuadratureSpec::new(cells, points)?)
}

fn required<'a>(cfg: &'a RunConfig, key: &str) -> Result<&'a str, CliError> {
    cfg.get(key)
        .ok_or_else(|| CliError::Config(format!("`{}` needs key `{key}`", cfg.command)))
}

fn x_of(cfg: &RunConfig) -> Result<f64, CliError> {
    required(cfg, "x")?;
    Ok(cfg.f64_key("x")?.expect("present"))
}

fn ids_for(cfg: &RunConfig, accept: fn(&InequalityId) -> bool, what: &str) -> Result<Vec<InequalityId>, CliError> {
    let ids = cfg.ids()?;
    if let Some(bad) = ids.iter().find(|i| !accept(i)) {
        return Err(CliError::Config(format!("`{bad}` is not {what}")));
    }
    Ok(ids)
}

/// Runs a resolved configuration.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    check_out(cfg.get("out").map(std::path::Path::new))?;
    match cfg.command.as_str() {
        "coeffs" => coeffs(cfg),
        "partial-sums" => partial_sums(cfg),
        "chars" => chars(cfg),
        "means" => means(cfg),
        "verify-elementary" => verify_ids(cfg, ids_for(cfg, InequalityId::is_elementary, "an elementary inequality")?),
        "verify-lemma" => verify_ids(cfg, ids_for(cfg, InequalityId::is_lemma, "a lemma")?),
        "verify-theorem" => verify_ids(cfg, ids_for(cfg, InequalityId::is_theorem, "a theorem")?),
        "verify-corollary" => corollary(cfg),
        "sweep" => {
            let mut ids = cfg.ids()?;
            if ids.is_empty() {
                ids = InequalityId::ALL.to_vec();
            }
            verify_ids(cfg, ids)
        }
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    }
}

fn coeffs(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = by_name(required(cfg, "function")?)?;
    let degree = cfg.usize_key("degree")?.unwrap_or(16);
    let series = match cfg.get("route").unwrap_or("dft") {
        "quadrature" => coefficients_by_quadrature(f, degree, &quad(cfg)?),
        _ => compute_coefficients(f, degree, cfg.usize_key("samples")?.unwrap_or(4 * degree.max(1)))?,
    };
    let mut t = Table::new(&["k", "a_k", "b_k"])?;
    for k in 0..=degree {
        let a = if k == 0 { series.a0() } else { series.a(k) };
        let b = if k == 0 { 0.0 } else { series.b(k) };
        t.row([k.to_string(), num(a), num(b)])?;
    }
    emit(cfg, t, &[])?;
    Ok(Outcome::Pass)
}

fn partial_sums(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = by_name(required(cfg, "function")?)?;
    let x = x_of(cfg)?;
    let kmax = cfg.usize_key("kmax")?.unwrap_or(64);
    let series = f.analytic_coefficients(kmax).expect("closed-form coefficients");
    let sums = partial_sums_upto(&series, x, kmax)?;
    let kernel = kernel_deviations(f, x, kmax, &quad(cfg)?);
    let fx = f.eval_wrapped(x);
    let mut t = Table::new(&["k", "s_k", "f_x", "deviation", "kernel_deviation"])?;
    for (k, (s, kd)) in sums.iter().zip(&kernel).enumerate() {
        t.row([k.to_string(), num(*s), num(fx), num(s - fx), num(*kd)])?;
    }
    emit(cfg, t, &[])?;
    Ok(Outcome::Pass)
}

fn chars(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = by_name(required(cfg, "function")?)?;
    let x = x_of(cfg)?;
    let p = cfg.f64_key("p")?.unwrap_or(1.0);
    let s = cfg.f64_key("s")?.unwrap_or(2.0);
    let levels = cfg.usize_key("levels")?.unwrap_or(8) as u32;
    let table = characteristic_table(f, x, p, s, levels, &quad(cfg)?)?;
    let mut t = Table::new(&["kind", "x", "delta", "gamma", "p", "s", "value"])?;
    for c in &table {
        t.row([
            c.kind.label().to_string(),
            num(c.params.x),
            num(c.params.delta),
            c.params.gamma.map(num).unwrap_or_default(),
            num(c.params.p),
            c.params.s.map(num).unwrap_or_default(),
            num(c.value),
        ])?;
    }
    emit(cfg, t, &[])?;
    Ok(Outcome::Pass)
}

fn means(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = by_name(required(cfg, "function")?)?;
    let x = x_of(cfg)?;
    let idx = IndexSequence::parse(cfg.get("indices").unwrap_or("arith:16"))?;
    let qs = cfg.f64_list("q")?.unwrap_or_else(|| vec![2.0]);
    let series = f.analytic_coefficients(idx.kr()).expect("closed-form coefficients");
    let mut t = Table::new(&["function", "x", "indices", "q", "h"])?;
    for q in qs {
        let h = strong_mean_hq(f, &series, x, &idx, q)?;
        t.row([f.name().to_string(), num(x), idx.label().to_string(), num(q), num(h)])?;
    }
    emit(cfg, t, &[])?;
    Ok(Outcome::Pass)
}

fn summary(r: &RatioReport) -> String {
    format!(
        "{} verdict={} sup_ratio={} drift={} rows={} failures={} skipped={}",
        r.inequality_id,
        r.verdict,
        num(r.sup_ratio),
        num(r.refinement_drift),
        r.rows.len(),
        r.failures().count(),
        r.skipped.len()
    )
}

fn verify_ids(cfg: &RunConfig, ids: Vec<InequalityId>) -> Result<Outcome, CliError> {
    if ids.is_empty() {
        return Err(CliError::Config("no inequality ids given".into()));
    }
    // Every hypothesis is checked before the first computation.
    let sweeps: Vec<(InequalityId, SweepSpec)> = ids
        .iter()
        .map(|&id| {
            let s = cfg.sweep_for(id)?;
            s.validate(id)?;
            Ok((id, s))
        })
        .collect::<Result<_, CliError>>()?;
    let mut table = Table::new(&REPORT_HEADER)?;
    let mut results = Vec::new();
    let mut outcome = Outcome::Pass;
    for (id, sweep) in &sweeps {
        let report = verify(*id, sweep)?;
        report_rows(&mut table, &report)?;
        let line = summary(&report);
        eprintln!("{line}");
        results.push(format!("result {line}"));
        for (k, v) in sweep.entries() {
            results.push(format!("resolved {id} {k} = {v}"));
        }
        if !report.verdict.is_pass() {
            outcome = Outcome::Fail;
        }
    }
    emit(cfg, table, &results)?;
    Ok(outcome)
}

fn corollary(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sweep = cfg.sweep_for(InequalityId::T3)?;
    let report = verify_corollary(&sweep)?;
    let line = format!(
        "corollary converged={} points={} not_converged={}",
        report.converged,
        report.rows.len(),
        report.failures().count()
    );
    eprintln!("{line}");
    for r in report.failures() {
        eprintln!(
            "  {} x={} decay_ratio={} slope={}",
            r.function,
            num(r.x),
            num(r.decay_ratio),
            r.decay_slope.map(num).unwrap_or_default()
        );
    }
    emit(cfg, corollary_table(&report)?, &[format!("result {line}")])?;
    Ok(if report.converged { Outcome::Pass } else { Outcome::Fail })
}
