//! Command-line front end: argument parsing, the period cache and the subcommand pipelines.
//!
//! Every subcommand writes one JSON document (to `--output` or stdout) and logs `key=value`
//! lines to stderr. Exit status: 0 when all selected residuals pass, 1 when a residual fails or
//! a numerical stage misses its tolerance, 2 for usage and input errors.

pub mod cache;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, info};
use serde_json::{json, Value};

use crate::curve::{c64, pair, Curve, CurveInput};
use crate::error::Error;
use crate::invariants::{partial_report, CheckSet, Context, InvariantReport, QuadMethod, ReportConfig, Section};
use crate::periods::CVec;
use crate::symfunc::sigma_report;
use crate::theta::{ThetaChar, ThetaConfig, ThetaEvaluator};

pub const ENV_CACHE_DIR: &str = "HYPERARAKELOV_CACHE_DIR";
pub const ENV_PRECISION: &str = "HYPERARAKELOV_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "hyperarakelov", version, about = "Arakelov invariants of hyperelliptic curves")]
pub struct Cli {
    /// Directory of the period cache (disabled when unset).
    #[arg(long, global = true, env = ENV_CACHE_DIR)]
    pub cache_dir: Option<PathBuf>,
    /// Working precision in mantissa bits.
    #[arg(long, global = true, env = ENV_PRECISION, default_value_t = 53)]
    pub precision: u32,
    /// Write the JSON document here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// Curve file: `{"roots": [[re, im], ...]}` or `{"coefficients": [...]}`, optional `"ordering"`.
    #[arg(long)]
    pub curve: PathBuf,
    /// Absolute tolerance of theta evaluations.
    #[arg(long, default_value_t = 1e-12)]
    pub theta_tol: f64,
    /// Target error of surface integrals.
    #[arg(long, default_value_t = 1e-3)]
    pub quad_tol: f64,
    #[arg(long, value_enum, default_value_t = QuadMethodArg::Adaptive)]
    pub quad_method: QuadMethodArg,
    /// Integrand evaluations per surface integral.
    #[arg(long, default_value_t = 4_000_000)]
    pub quad_budget: usize,
    /// Relative tolerance of the period integrals.
    #[arg(long, default_value_t = 1e-12)]
    pub period_tol: f64,
    /// Seed of the Monte Carlo stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadMethodArg {
    Adaptive,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChecksArg {
    Fast,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Thomae,
    Disc,
    Main,
    Second,
    GreenSym,
    G2Remark,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full invariant report.
    Invariants {
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long, value_enum, default_value_t = ChecksArg::All)]
        checks: ChecksArg,
    },
    /// Period matrices and their diagnostics.
    Periods {
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Evaluate a theta function with characteristic.
    ThetaEval {
        #[command(flatten)]
        numeric: NumericArgs,
        /// Argument as `[[re, im], ...]`; zero when omitted.
        #[arg(long)]
        z: Option<String>,
        /// Characteristic as `"a1,a2;b1,b2"` with entries 0 or 1 (halves); zero when omitted.
        #[arg(long = "char")]
        characteristic: Option<String>,
        /// Treat `z` as a point of `C^g / (Z^g + tau Z^g)` instead of the Jacobian `C^g / (mu | mu')`.
        #[arg(long)]
        normalized: bool,
    },
    /// Exact sigma polynomial, Schur expansion and Hankel term for genus `g`.
    SigmaPoly {
        #[arg(long)]
        genus: u32,
    },
    /// Run one group of checks.
    Check {
        #[arg(value_enum)]
        which: CheckName,
        #[command(flatten)]
        numeric: NumericArgs,
    },
}

/// Validated settings of one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub curve: Option<PathBuf>,
    pub command: String,
    pub report: ReportConfig,
    pub precision_bits: u32,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// Failure of a run, carrying the stage it came from.
#[derive(Debug)]
pub struct RunError {
    pub stage: &'static str,
    pub error: Error,
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self.error {
            Error::Io(_)
            | Error::Json(_)
            | Error::CurveInput(_)
            | Error::EvenDegree(_)
            | Error::NonMonic(_)
            | Error::NotSeparable { .. }
            | Error::Ordering(_)
            | Error::GenusTooSmall { .. }
            | Error::UnsupportedPrecision(_)
            | Error::InvalidPartition(_)
            | Error::InsufficientArity { .. } => 2,
            _ => 1,
        }
    }
}

fn at<T>(stage: &'static str, r: crate::Result<T>) -> Result<T, RunError> {
    r.map_err(|error| RunError { stage, error })
}

fn usage(msg: String) -> RunError {
    RunError { stage: "arguments", error: Error::CurveInput(msg) }
}

impl RunConfig {
    fn from_numeric(cli: &Cli, command: &str, n: &NumericArgs, checks: CheckSet) -> Result<Self, RunError> {
        for (name, v) in [("theta-tol", n.theta_tol), ("quad-tol", n.quad_tol), ("period-tol", n.period_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(usage(format!("--{name} must be positive, got {v}")));
            }
        }
        if cli.precision < 53 {
            return Err(usage(format!("precision must be at least 53 bits, got {}", cli.precision)));
        }
        let mut report = ReportConfig { checks, ..Default::default() };
        report.theta = ThetaConfig { tol: n.theta_tol, precision_bits: cli.precision, ..report.theta };
        report.quad.tol = n.quad_tol;
        report.quad.budget = n.quad_budget;
        report.quad.seed = n.seed;
        report.quad.method = match n.quad_method {
            QuadMethodArg::Adaptive => QuadMethod::Adaptive,
            QuadMethodArg::MonteCarlo => QuadMethod::MonteCarlo,
        };
        report.period.rtol = n.period_tol;
        Ok(RunConfig {
            curve: Some(n.curve.clone()),
            command: command.into(),
            report,
            precision_bits: cli.precision,
            cache_dir: cli.cache_dir.clone(),
            output: cli.output.clone(),
        })
    }
}

/// Reads and validates a curve file.
pub fn read_curve(path: &Path) -> crate::Result<Curve> {
    let text = fs::read_to_string(path).map_err(|e| Error::CurveInput(format!("cannot read {}: {e}", path.display())))?;
    let input: CurveInput =
        serde_json::from_str(&text).map_err(|e| Error::CurveInput(format!("cannot parse {}: {e}", path.display())))?;
    Curve::from_input(&input)
}

fn context(cfg: &RunConfig) -> Result<Context, RunError> {
    let path = cfg.curve.as_deref().ok_or_else(|| usage("--curve is required".into()))?;
    let curve = at("curve", read_curve(path))?;
    info!("stage=curve genus={} ordering={:?}", curve.genus(), curve.ordering());
    if cfg.precision_bits > 53 {
        return Err(RunError { stage: "theta", error: Error::UnsupportedPrecision(cfg.precision_bits) });
    }
    let (periods, lookup) = at("periods", cache::cached_periods(cfg.cache_dir.as_deref(), &curve, &cfg.report.period))?;
    info!(
        "stage=periods cache={lookup:?} min_eigenvalue={:e} symmetry_residual={:e}",
        periods.lambda_min, periods.diagnostics.symmetry_residual
    );
    at("theta", Context::from_periods(periods, cfg.report.theta))
}

fn emit(cfg_output: Option<&Path>, doc: &Value) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON value serializes");
    text.push('\n');
    match cfg_output {
        Some(p) => at("output", fs::write(p, text).map_err(Error::from)),
        None => at("output", std::io::stdout().write_all(text.as_bytes()).map_err(Error::from)),
    }
}

fn log_residuals(report: &InvariantReport) {
    for (k, r) in &report.residuals {
        info!("stage=residual name={k} value={:e} tolerance={:e} pass={}", r.value, r.tolerance, r.pass);
    }
}

fn check_sections(which: CheckName) -> (&'static [Section], &'static [&'static str]) {
    match which {
        CheckName::Thomae => (&[Section::Theta], &["thomae"]),
        CheckName::Disc => (&[Section::Theta], &["disc"]),
        CheckName::Main => (&[Section::T, Section::Weierstrass], &["thm_main_"]),
        CheckName::Second => (&[Section::T, Section::Weierstrass], &["thm_second"]),
        CheckName::GreenSym => (&[Section::GreenSymmetry, Section::S, Section::Weierstrass], &["green_"]),
        CheckName::G2Remark => (&[Section::T, Section::Weierstrass], &["g2_remark"]),
    }
}

fn parse_z(s: &str, g: usize) -> Result<CVec, RunError> {
    let v: Vec<[f64; 2]> = serde_json::from_str(s).map_err(|e| usage(format!("--z: {e}")))?;
    if v.len() != g {
        return Err(usage(format!("--z has {} entries, genus is {g}", v.len())));
    }
    Ok(CVec::from_iterator(g, v.into_iter().map(c64)))
}

/// Runs one subcommand; returns whether all residuals passed.
pub fn run(cli: &Cli) -> Result<bool, RunError> {
    match &cli.command {
        Command::SigmaPoly { genus } => {
            let doc = at("sigma", sigma_report(*genus))?;
            emit(cli.output.as_deref(), &doc)?;
            Ok(true)
        }
        Command::Invariants { numeric, checks } => {
            let set = match checks {
                ChecksArg::Fast => CheckSet::Fast,
                ChecksArg::All => CheckSet::All,
            };
            let cfg = RunConfig::from_numeric(cli, "invariants", numeric, set)?;
            let ctx = context(&cfg)?;
            let report = at("invariants", partial_report(&ctx, &cfg.report, set.sections()))?;
            log_residuals(&report);
            emit(cfg.output.as_deref(), &report.to_json())?;
            Ok(report.pass())
        }
        Command::Check { which, numeric } => {
            let cfg = RunConfig::from_numeric(cli, "check", numeric, CheckSet::All)?;
            let ctx = context(&cfg)?;
            if *which == CheckName::G2Remark && ctx.genus() != 2 {
                return Err(usage(format!("g2-remark needs genus 2, curve has genus {}", ctx.genus())));
            }
            let (sections, prefixes) = check_sections(*which);
            let report = at("check", partial_report(&ctx, &cfg.report, sections))?;
            let residuals: serde_json::Map<String, Value> = report
                .residuals
                .iter()
                .filter(|(k, _)| prefixes.iter().any(|p| k.starts_with(p)))
                .map(|(k, r)| (k.clone(), json!(r)))
                .collect();
            let pass = residuals.values().all(|r| r["pass"] == true);
            for (k, r) in &residuals {
                info!("stage=residual name={k} value={} tolerance={} pass={}", r["value"], r["tolerance"], r["pass"]);
            }
            let doc = json!({
                "check": format!("{which:?}").to_lowercase(),
                "config": cfg.report,
                "curve": report.curve,
                "pass": pass,
                "residuals": residuals,
                "schema_version": report.schema_version,
            });
            emit(cfg.output.as_deref(), &doc)?;
            Ok(pass)
        }
        Command::Periods { numeric } => {
            let cfg = RunConfig::from_numeric(cli, "periods", numeric, CheckSet::Fast)?;
            let ctx = context(&cfg)?;
            let mut doc = ctx.periods.summary_json();
            doc["curve"] = json!({
                "ordering": ctx.curve().ordering(),
                "roots": ctx.curve().roots().iter().map(|&z| pair(z)).collect::<Vec<_>>(),
            });
            doc["config"] = json!(cfg.report.period);
            doc["riemann_characteristic"] = json!(ctx.scan.delta.to_string());
            doc["schema_version"] = json!(crate::invariants::SCHEMA_VERSION);
            emit(cfg.output.as_deref(), &doc)?;
            Ok(true)
        }
        Command::ThetaEval { numeric, z, characteristic, normalized } => {
            let cfg = RunConfig::from_numeric(cli, "theta-eval", numeric, CheckSet::Fast)?;
            let ctx = context(&cfg)?;
            let g = ctx.genus();
            let ch = match characteristic {
                Some(s) => ThetaChar::parse(s).ok_or_else(|| usage(format!("cannot parse characteristic {s:?}")))?,
                None => ThetaChar::zero(g),
            };
            if ch.genus() != g {
                return Err(usage(format!("characteristic has genus {}, curve has genus {g}", ch.genus())));
            }
            let z = match z {
                Some(s) => parse_z(s, g)?,
                None => CVec::zeros(g),
            };
            let w = if *normalized { z.clone() } else { ctx.periods.normalize(&z) };
            let ev: &ThetaEvaluator = &ctx.theta;
            let value = ev.theta(&ch, &w);
            let log_norm = if *normalized { ctx.norm.log_eval_normalized(ev, &w) } else { ctx.log_norm(&z) };
            let doc = json!({
                "characteristic": ch.to_string(),
                "config": cfg.report.theta,
                "log_faltings_norm": log_norm,
                "normalized": normalized,
                "schema_version": crate::invariants::SCHEMA_VERSION,
                "tail_bound": ev.tail_bound,
                "tau": ctx.periods.summary_json()["tau"],
                "theta": pair(value),
                "w": w.iter().map(|&v| pair(v)).collect::<Vec<_>>(),
                "z": z.iter().map(|&v| pair(v)).collect::<Vec<_>>(),
            });
            emit(cfg.output.as_deref(), &doc)?;
            Ok(true)
        }
    }
}

fn init_logging() {
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("HYPERARAKELOV_LOG", "info"))
        .format(|buf, rec| writeln!(buf, "level={} {}", rec.level().as_str().to_lowercase(), rec.args()))
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => {
            info!("stage=done status=pass");
            ExitCode::SUCCESS
        }
        Ok(false) => {
            info!("stage=done status=residual-failure");
            ExitCode::from(1)
        }
        Err(e) => {
            error!("stage={} error={:?}", e.stage, e.error.to_string());
            ExitCode::from(e.exit_code())
        }
    }
}
