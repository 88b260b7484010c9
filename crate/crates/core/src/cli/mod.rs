//! Command-line front end.
//!
//! Every subcommand writes one table, as CSV (header row, floats with 17
//! significant digits) or as a JSON object `{"config": .., "results": [..]}`.
//! Exit codes: 0 success, 2 parameter error, 3 failed fit or verification.

pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::eigentri::{default_tol, lambda_max, lambda_min};
use crate::ensembles::{sample_hermite, sample_laguerre, HermiteParams, LaguerreParams};
use crate::experiments::{
    self, estimate_tail_grid, fit_exponent, lower_bound_ratio, tw_center_stability, variance_scan,
    FitReport, TailQuery,
};
use crate::randkit::RngStream;
use crate::Error;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Environment variable consulted when `--workers` is absent.
pub const WORKERS_ENV: &str = "BETATRI_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "betatri",
    version,
    about = "Beta-ensemble extremal eigenvalue experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw one matrix and report its extremal eigenvalues (or its entries).
    Sample(SampleArgs),
    /// Tail probabilities of an extremal eigenvalue over an eps list.
    Tail(TailArgs),
    /// Variance of lambda_max across matrix sizes with a log-log fit.
    Variance(VarianceArgs),
    /// Tail sweep followed by an exponent fit of log(-log p) on log eps.
    Fit(FitArgs),
    /// Normalized log-tail ratios of lambda_max for the Hermite ensemble.
    LowerRatio(LowerRatioArgs),
    /// Mean of n^{1/6} (lambda_max - 2 sqrt n) across sizes.
    Center(CenterArgs),
    /// Run one family of deterministic or randomized checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Root seed; every sample index draws from its own stream.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (0 = all cores); falls back to BETATRI_WORKERS.
    #[arg(long)]
    #[serde(skip)]
    workers: Option<usize>,
    /// Output format (csv by default, json for verify).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum EnsembleArg {
    Hermite,
    Laguerre,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SideArg {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ExtremalArg {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum VerifyTarget {
    Parts,
    Forms,
    Mgf,
    Eigen,
    Vectors,
}

impl From<EnsembleArg> for experiments::Ensemble {
    fn from(e: EnsembleArg) -> Self {
        match e {
            EnsembleArg::Hermite => experiments::Ensemble::Hermite,
            EnsembleArg::Laguerre => experiments::Ensemble::Laguerre,
        }
    }
}

impl From<SideArg> for experiments::Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Upper => experiments::Side::Upper,
            SideArg::Lower => experiments::Side::Lower,
        }
    }
}

impl From<ExtremalArg> for experiments::Extremal {
    fn from(e: ExtremalArg) -> Self {
        match e {
            ExtremalArg::Max => experiments::Extremal::Max,
            ExtremalArg::Min => experiments::Extremal::Min,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SampleArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Laguerre only.
    #[arg(long)]
    kappa: Option<f64>,
    /// Stream index under the seed.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Emit the diagonal and off-diagonal instead of the eigenvalues.
    #[arg(long)]
    matrix: bool,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct TailArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    #[arg(long, value_enum)]
    side: SideArg,
    #[arg(long, value_enum, default_value = "max")]
    extremal: ExtremalArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long)]
    kappa: Option<f64>,
    /// One or more comma-separated deviations in (0, 1].
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct FitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    tail: TailArgs,
    /// Power the fit is compared with; 1.5 for upper, 3 for lower by default.
    #[arg(long)]
    expected_power: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct VarianceArgs {
    #[arg(long, value_enum, default_value = "hermite")]
    ensemble: EnsembleArg,
    #[arg(long, value_delimiter = ',', required = true)]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Laguerre only: kappa = ratio * n.
    #[arg(long)]
    kappa_ratio: Option<f64>,
    #[arg(long, default_value_t = 20_000)]
    samples: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct LowerRatioArgs {
    #[arg(long, value_enum)]
    side: SideArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct CenterArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 50_000)]
    samples: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: VerifyTarget,
    /// Random trials for parts, forms and eigen.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Monte Carlo draws per point for mgf.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn json(&self, config: Value) -> String {
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&json!({"config": config, "results": results}))
            .expect("json values always serialize");
        s.push('\n');
        s
    }
}

/// What a subcommand produced: its table and the exit code to report.
struct Outcome {
    table: Table,
    code: i32,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Outcome {
            table,
            code: EXIT_OK,
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_PARAMETER
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    let (name, config, common) = describe(&cli.command);
    let workers = match resolve_workers(common.workers) {
        Ok(w) => w,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_PARAMETER;
        }
    };
    let default_format = if name == "verify" {
        Format::Json
    } else {
        Format::Csv
    };
    let format = common.format.unwrap_or(default_format);
    let output = common.output.clone();

    let outcome = match execute(&cli.command, workers) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let mut config = config;
    if let Value::Object(m) = &mut config {
        m.insert("command".into(), json!(name));
        m.insert("format".into(), json!(format));
    }
    let text = match format {
        Format::Csv => outcome.table.csv(),
        Format::Json => outcome.table.json(config),
    };
    let written = match &output {
        Some(p) => std::fs::write(p, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_IO;
    }
    outcome.code
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Fit(_) | Error::Calibration(_) => EXIT_FAILURE,
        _ => EXIT_PARAMETER,
    }
}

/// `--workers`, else `BETATRI_WORKERS`, else 0 (all cores).
fn resolve_workers(flag: Option<usize>) -> Result<usize, String> {
    if let Some(w) = flag {
        return Ok(w);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("{WORKERS_ENV} must be a non-negative integer, got {s:?}")),
        Err(_) => Ok(0),
    }
}

fn describe(cmd: &Command) -> (&'static str, Value, &Common) {
    let to = |v: Result<Value, serde_json::Error>| v.expect("arguments always serialize");
    match cmd {
        Command::Sample(a) => ("sample", to(serde_json::to_value(a)), &a.common),
        Command::Tail(a) => ("tail", to(serde_json::to_value(a)), &a.common),
        Command::Variance(a) => ("variance", to(serde_json::to_value(a)), &a.common),
        Command::Fit(a) => ("fit", to(serde_json::to_value(a)), &a.tail.common),
        Command::LowerRatio(a) => ("lower-ratio", to(serde_json::to_value(a)), &a.common),
        Command::Center(a) => ("center", to(serde_json::to_value(a)), &a.common),
        Command::Verify(a) => ("verify", to(serde_json::to_value(a)), &a.common),
    }
}

fn execute(cmd: &Command, workers: usize) -> crate::Result<Outcome> {
    match cmd {
        Command::Sample(a) => sample(a),
        Command::Tail(a) => tail(a, workers).map(|(t, _)| Outcome::ok(t)),
        Command::Fit(a) => fit(a, workers),
        Command::Variance(a) => variance(a, workers),
        Command::LowerRatio(a) => lower_ratio(a, workers),
        Command::Center(a) => center(a, workers),
        Command::Verify(a) => run_verify(a),
    }
}

fn sample(a: &SampleArgs) -> crate::Result<Outcome> {
    let mut st = RngStream::new(a.common.seed, a.stream);
    let t = match a.ensemble {
        EnsembleArg::Hermite => {
            if a.kappa.is_some() {
                return Err(Error::Parameter("kappa applies to laguerre only".into()));
            }
            sample_hermite(HermiteParams::new(a.n, a.beta)?, &mut st).matrix()
        }
        EnsembleArg::Laguerre => {
            let kappa = a
                .kappa
                .ok_or_else(|| Error::Parameter("laguerre needs --kappa".into()))?;
            sample_laguerre(LaguerreParams::new(a.n, kappa, a.beta)?, &mut st).matrix()
        }
    };
    if a.matrix {
        let mut table = Table::new(&["k", "diag", "offdiag"]);
        for (k, d) in t.diag().iter().enumerate() {
            table.push(vec![
                Cell::Int(k as u64 + 1),
                Cell::Float(*d),
                t.offdiag().get(k).copied().into(),
            ]);
        }
        return Ok(Outcome::ok(table));
    }
    let tol = default_tol(&t);
    let mut table = Table::new(&[
        "ensemble",
        "n",
        "beta",
        "kappa",
        "seed",
        "stream",
        "lambda_max",
        "lambda_min",
    ]);
    table.push(vec![
        Cell::Text(experiments::Ensemble::from(a.ensemble).as_str().into()),
        Cell::Int(a.n as u64),
        Cell::Float(a.beta),
        a.kappa.into(),
        Cell::Int(a.common.seed),
        Cell::Int(a.stream),
        Cell::Float(lambda_max(&t, tol)?.value),
        Cell::Float(lambda_min(&t, tol)?.value),
    ]);
    Ok(Outcome::ok(table))
}

const TAIL_COLUMNS: [&str; 13] = [
    "ensemble", "side", "extremal", "n", "beta", "kappa", "eps", "samples", "hits", "p_hat",
    "ci_low", "ci_high", "seed",
];

fn tail_query(a: &TailArgs) -> crate::Result<TailQuery> {
    let q = TailQuery {
        ensemble: a.ensemble.into(),
        side: a.side.into(),
        extremal: a.extremal.into(),
        n: a.n,
        beta: a.beta,
        kappa: a.kappa,
        eps: a.eps.first().copied().unwrap_or(f64::NAN),
        samples: a.samples,
        seed: a.common.seed,
    };
    for &eps in &a.eps {
        TailQuery { eps, ..q }.validate()?;
    }
    Ok(q)
}

fn tail(
    a: &TailArgs,
    workers: usize,
) -> crate::Result<(Table, Vec<(f64, experiments::TailEstimate)>)> {
    let q = tail_query(a)?;
    let est = estimate_tail_grid(&q, &a.eps, workers)?;
    let mut table = Table::new(&TAIL_COLUMNS);
    for (&eps, e) in a.eps.iter().zip(&est) {
        table.push(tail_row(&q, eps, e));
    }
    Ok((table, a.eps.iter().copied().zip(est).collect()))
}

fn tail_row(q: &TailQuery, eps: f64, e: &experiments::TailEstimate) -> Vec<Cell> {
    vec![
        Cell::Text(q.ensemble.as_str().into()),
        Cell::Text(q.side.as_str().into()),
        Cell::Text(q.extremal.as_str().into()),
        Cell::Int(q.n as u64),
        Cell::Float(q.beta),
        q.kappa.into(),
        Cell::Float(eps),
        Cell::Int(e.samples),
        Cell::Int(e.hits),
        Cell::Float(e.p_hat),
        Cell::Float(e.ci_low),
        Cell::Float(e.ci_high),
        Cell::Int(q.seed),
    ]
}

fn fit_cells(f: Option<&FitReport>) -> Vec<Cell> {
    match f {
        Some(f) => vec![
            Cell::Float(f.slope),
            Cell::Float(f.intercept),
            Cell::Float(f.residual_rms),
            Cell::Int(f.points_used as u64),
            Cell::Int(f.points_excluded as u64),
        ],
        None => (0..5).map(|_| Cell::Empty).collect(),
    }
}

const FIT_COLUMNS: [&str; 5] = [
    "slope",
    "intercept",
    "residual_rms",
    "points_used",
    "points_excluded",
];

fn fit(a: &FitArgs, workers: usize) -> crate::Result<Outcome> {
    let expected = a.expected_power.unwrap_or(match a.tail.side {
        SideArg::Upper => 1.5,
        SideArg::Lower => 3.0,
    });
    let (tail_table, est) = tail(&a.tail, workers)?;
    let report = fit_exponent(&est, expected);
    let mut columns = TAIL_COLUMNS.to_vec();
    columns.push("expected_power");
    columns.extend(FIT_COLUMNS);
    let mut table = Table::new(&columns);
    for row in tail_table.rows {
        let mut row = row;
        row.push(Cell::Float(expected));
        row.extend(fit_cells(report.as_ref().ok()));
        table.push(row);
    }
    let code = match &report {
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    };
    Ok(Outcome { table, code })
}

fn variance(a: &VarianceArgs, workers: usize) -> crate::Result<Outcome> {
    let scan = variance_scan(
        &a.n_grid,
        a.beta,
        a.samples,
        a.common.seed,
        a.ensemble.into(),
        a.kappa_ratio,
        workers,
    )?;
    let mut columns = vec![
        "ensemble", "n", "kappa", "beta", "samples", "mean", "variance", "seed",
    ];
    columns.extend(FIT_COLUMNS);
    let mut table = Table::new(&columns);
    for p in &scan.points {
        let mut row = vec![
            Cell::Text(experiments::Ensemble::from(a.ensemble).as_str().into()),
            Cell::Int(p.n as u64),
            p.kappa.into(),
            Cell::Float(a.beta),
            Cell::Int(a.samples),
            Cell::Float(p.mean),
            Cell::Float(p.variance),
            Cell::Int(a.common.seed),
        ];
        row.extend(fit_cells(Some(&scan.fit)));
        table.push(row);
    }
    Ok(Outcome::ok(table))
}

fn lower_ratio(a: &LowerRatioArgs, workers: usize) -> crate::Result<Outcome> {
    let pts = lower_bound_ratio(
        a.side.into(),
        a.n,
        a.beta,
        &a.eps,
        a.samples,
        a.common.seed,
        workers,
    )?;
    let mut table = Table::new(&[
        "side", "n", "beta", "eps", "samples", "hits", "p_hat", "ratio", "seed",
    ]);
    for p in pts {
        table.push(vec![
            Cell::Text(experiments::Side::from(a.side).as_str().into()),
            Cell::Int(a.n as u64),
            Cell::Float(a.beta),
            Cell::Float(p.eps),
            Cell::Int(a.samples),
            Cell::Int(p.hits),
            Cell::Float(p.p_hat),
            p.ratio.into(),
            Cell::Int(a.common.seed),
        ]);
    }
    Ok(Outcome::ok(table))
}

fn center(a: &CenterArgs, workers: usize) -> crate::Result<Outcome> {
    let pts = tw_center_stability(&a.n_grid, a.beta, a.samples, a.common.seed, workers)?;
    let mut table = Table::new(&["n", "beta", "samples", "mean", "se", "seed"]);
    for p in pts {
        table.push(vec![
            Cell::Int(p.n as u64),
            Cell::Float(a.beta),
            Cell::Int(a.samples),
            Cell::Float(p.mean),
            Cell::Float(p.se),
            Cell::Int(a.common.seed),
        ]);
    }
    Ok(Outcome::ok(table))
}

fn run_verify(a: &VerifyArgs) -> crate::Result<Outcome> {
    if a.trials == 0 {
        return Err(Error::Parameter("trials must be >= 1".into()));
    }
    if a.samples < 2 {
        return Err(Error::Parameter("samples must be >= 2".into()));
    }
    let seed = a.common.seed;
    let checks = match a.target {
        VerifyTarget::Parts => verify::parts(a.trials, seed)?,
        VerifyTarget::Forms => verify::forms(a.trials, seed)?,
        VerifyTarget::Mgf => verify::mgf(a.samples, seed)?,
        VerifyTarget::Eigen => verify::eigen(a.trials, seed)?,
        VerifyTarget::Vectors => verify::vectors()?,
    };
    let mut table = Table::new(&[
        "check",
        "trials",
        "violations",
        "max_abs_violation",
        "max_rel_violation",
        "tolerance",
        "pass",
    ]);
    let mut code = EXIT_OK;
    for c in checks {
        if !c.pass() {
            code = EXIT_FAILURE;
        }
        table.push(vec![
            Cell::Text(c.name.into()),
            Cell::Int(c.trials),
            Cell::Int(c.violations),
            Cell::Float(c.max_abs_violation),
            Cell::Float(c.max_rel_violation),
            Cell::Float(c.tolerance),
            Cell::Bool(c.pass()),
        ]);
    }
    Ok(Outcome { table, code })
}
