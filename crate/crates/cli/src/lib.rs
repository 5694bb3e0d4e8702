//! Driver for the rank1lab suites: parses the run configuration, runs the
//! requested suites and writes `report.json` plus CSV exports.
//!
//! Exit codes: 0 when nothing was flagged, 1 when some suite found
//! violations, 2 for usage, configuration or output errors.

pub mod config;
pub mod report;
pub mod suites;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rank1lab_core::{Material, MaterialModel, Seed};
use thiserror::Error;

use config::RunConfig;
use report::{ConfigEcho, Meta, RunReport, Suites};

pub const SEED_ENV: &str = "RANK1LAB_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] rank1lab_core::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "rank1lab",
    version,
    about = "Rank-one convexity and Cauchy-stress injectivity checks"
)]
pub struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides RANK1LAB_SEED and the config seed.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Output directory for report.json and CSV files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the report to stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tensor identities (cofactor, determinant, dyads).
    Identities,
    /// Analytic Piola stress against finite differences.
    Gradcheck,
    /// Directional second-derivative scan for one model.
    Ellipticity { model: String },
    /// Collision search for the Cauchy stress along rank-one lines.
    Injectivity { model: String },
    /// Rank-one connected pairs with equal `F Fᵀ`.
    Twins,
    /// Spherical Blatz-Ko stress along `B = α𝟙`.
    BlatzkoScan,
    /// Pressure-compression sign condition on pure dilations.
    PcCheck { model: String },
    /// Every suite for every configured model.
    All,
}

impl Command {
    fn label(&self) -> String {
        match self {
            Command::Identities => "identities".into(),
            Command::Gradcheck => "gradcheck".into(),
            Command::Ellipticity { model } => format!("ellipticity {model}"),
            Command::Injectivity { model } => format!("injectivity {model}"),
            Command::Twins => "twins".into(),
            Command::BlatzkoScan => "blatzko-scan".into(),
            Command::PcCheck { model } => format!("pc-check {model}"),
            Command::All => "all".into(),
        }
    }
}

/// Config file, then `RANK1LAB_SEED`, then `--seed`; later wins.
pub fn resolve_config(cli: &Cli, env_seed: Option<&str>) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = env_seed {
        let seed = v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_ENV} must be an unsigned integer, got `{v}`")))?;
        cfg.scan.seed = Seed(seed);
    }
    if let Some(seed) = cli.seed {
        cfg.scan.seed = Seed(seed);
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    suites: Suites,
    meta: Meta,
}

impl Runner<'_> {
    fn timed<T>(&mut self, name: String, f: impl FnOnce() -> Result<T, CliError>) -> Result<T, CliError> {
        let start = Instant::now();
        let out = f()?;
        self.meta.wall_clock.insert(name, start.elapsed().as_secs_f64());
        Ok(out)
    }

    fn identities(&mut self) -> Result<(), CliError> {
        let (seed, spread, n) = (self.cfg.scan.seed, self.cfg.scan.spread, self.cfg.budgets.identities_n);
        let s = self.timed("identities".into(), || Ok(suites::identity_suite(seed, spread, n)?))?;
        self.suites.identities = Some(s);
        Ok(())
    }

    fn gradcheck(&mut self) -> Result<(), CliError> {
        let models = self.cfg.materials()?;
        let (seed, spread, n) = (self.cfg.scan.seed, self.cfg.scan.spread, self.cfg.budgets.gradcheck_n_f);
        let s = self.timed("gradcheck".into(), || {
            Ok(suites::gradient_suite(&models, seed, spread, n)?)
        })?;
        self.suites.gradcheck = Some(s);
        Ok(())
    }

    fn theorem(&mut self) -> Result<(), CliError> {
        let models = self.cfg.materials()?;
        let (seed, spread, n) = (self.cfg.scan.seed, self.cfg.scan.spread, self.cfg.budgets.theorem_n);
        let s = self.timed("theorem_identity".into(), || {
            Ok(suites::theorem_suite(&models, seed, spread, n)?)
        })?;
        self.suites.theorem_identity = Some(s);
        Ok(())
    }

    fn ellipticity(&mut self, m: &Material) -> Result<(), CliError> {
        let scan = self.cfg.scan.clone();
        let s = self.timed(format!("ellipticity:{}", m.name()), || {
            Ok(suites::ellipticity_suite(m, &scan)?)
        })?;
        self.suites.ellipticity.push(s);
        Ok(())
    }

    fn injectivity(&mut self, m: &Material) -> Result<(), CliError> {
        let scan = self.cfg.scan.clone();
        let n = self.cfg.budgets.theorem_n;
        let s = self.timed(format!("injectivity:{}", m.name()), || {
            Ok(suites::injectivity_suite(m, &scan, n)?)
        })?;
        self.suites.injectivity.push(s);
        Ok(())
    }

    fn twins(&mut self) -> Result<(), CliError> {
        let b = &self.cfg.budgets;
        let (n, n_det) = (b.twins_n, b.twins_n_det);
        let (seed, spread) = (self.cfg.scan.seed, self.cfg.scan.spread);
        let s = self.timed("twins".into(), || Ok(suites::twin_suite(seed, spread, n, n_det)?))?;
        self.suites.twins = Some(s);
        Ok(())
    }

    fn blatzko(&mut self) -> Result<(), CliError> {
        let mu = self.cfg.material("blatz-ko")?.stress_scale();
        let b = &self.cfg.budgets;
        let (lo, hi, n) = (b.blatzko_alpha_min, b.blatzko_alpha_max, b.blatzko_n);
        let s = self.timed("blatzko_scan".into(), || Ok(suites::blatzko_suite(mu, lo, hi, n)?))?;
        self.suites.blatzko_scan = Some(s);
        Ok(())
    }

    fn pressure(&mut self, m: &Material) -> Result<(), CliError> {
        let b = &self.cfg.budgets;
        let (lo, hi, n) = (b.pc_lambda_min, b.pc_lambda_max, b.pc_n);
        let s = self.timed(format!("pc_check:{}", m.name()), || {
            Ok(suites::pressure_suite(m, lo, hi, n)?)
        })?;
        self.suites.pressure_compression.push(s);
        Ok(())
    }
}

/// Run the suites for `command` and write the output files. Returns the
/// report; nothing is written if a suite fails.
pub fn execute(command: &Command, cfg: &RunConfig) -> Result<RunReport, CliError> {
    cfg.validate()?;
    // resolve model names before doing any work
    let model = match command {
        Command::Ellipticity { model } | Command::Injectivity { model } | Command::PcCheck { model } => {
            Some(cfg.material(model)?)
        }
        _ => None,
    };
    report::prepare_output_dir(&cfg.output_dir)?;

    let mut r = Runner {
        cfg,
        suites: Suites::default(),
        meta: Meta::new(&cfg.output_dir),
    };
    match command {
        Command::Identities => r.identities()?,
        Command::Gradcheck => r.gradcheck()?,
        Command::Ellipticity { .. } => r.ellipticity(model.as_ref().unwrap())?,
        Command::Injectivity { .. } => r.injectivity(model.as_ref().unwrap())?,
        Command::Twins => r.twins()?,
        Command::BlatzkoScan => r.blatzko()?,
        Command::PcCheck { .. } => r.pressure(model.as_ref().unwrap())?,
        Command::All => {
            r.identities()?;
            r.gradcheck()?;
            r.theorem()?;
            let models = cfg.materials()?;
            for m in &models {
                r.ellipticity(m)?;
            }
            for m in &models {
                r.injectivity(m)?;
            }
            r.twins()?;
            r.blatzko()?;
            for m in &models {
                r.pressure(m)?;
            }
        }
    }

    let Runner { suites, meta, .. } = r;
    let mut files = Vec::new();
    if let Some(b) = &suites.blatzko_scan {
        files.push((report::PRESSURE_CSV, report::pressure_csv(&b.scan.records)));
    }
    if !suites.ellipticity.is_empty() {
        let rows: Vec<_> = suites
            .ellipticity
            .iter()
            .flat_map(|e| e.report.violations.iter().map(move |p| (e.report.model.as_str(), p)))
            .collect();
        files.push((report::VIOLATIONS_CSV, report::violations_csv(&rows)));
    }
    let report = RunReport::new(command.label(), ConfigEcho::new(cfg)?, suites, meta);
    files.push((report::REPORT_FILE, report.to_json()));
    report::write_files(&cfg.output_dir, &files)?;
    Ok(report)
}

fn summary_lines(r: &RunReport) -> Vec<String> {
    let mark = |ok: bool| if ok { "ok" } else { "FLAGGED" };
    let s = &r.suites;
    let mut out = Vec::new();
    if let Some(x) = &s.identities {
        out.push(format!(
            "identities: {} ({} samples, {} checks)",
            mark(x.pass),
            x.samples,
            x.checks.len()
        ));
    }
    if let Some(x) = &s.gradcheck {
        for g in &x.models {
            out.push(format!(
                "gradcheck {}: {} (max rel err {:.2e}, Richardson ratio {:.1})",
                g.model,
                mark(g.pass),
                g.max_rel_error,
                g.richardson_ratio
            ));
        }
    }
    if let Some(x) = &s.theorem_identity {
        out.push(format!("theorem identity: {} ({} samples)", mark(x.pass), x.samples));
    }
    for e in &s.ellipticity {
        out.push(format!(
            "ellipticity {}: {} violations over {} probes (min {:.3e})",
            e.report.model,
            e.report.violation_count,
            e.report.samples_tested,
            e.report.min_second_derivative.unwrap_or(f64::NAN)
        ));
    }
    for i in &s.injectivity {
        out.push(format!(
            "injectivity {}: {} certificates over {} starts (min residual {:.3e})",
            i.model,
            i.search.certificates.len(),
            i.search.starts,
            i.search.min_residual_found.unwrap_or(f64::NAN)
        ));
    }
    if let Some(t) = &s.twins {
        out.push(format!(
            "twins: {} (min b_gap/|xi⊗eta| {:.3e}, det rel err {:.2e})",
            mark(t.pass),
            t.min_gap_ratio,
            t.det_max_rel_error
        ));
    }
    if let Some(b) = &s.blatzko_scan {
        out.push(format!(
            "blatzko-scan: monotone={} alpha*={} t*={}",
            b.summary.is_monotone,
            b.summary.alpha_star.map_or("none".into(), |a| format!("{a:.6}")),
            b.summary.spherical_max.map_or("none".into(), |t| format!("{t:.6}")),
        ));
    }
    for p in &s.pressure_compression {
        out.push(format!(
            "pc-check {}: sign condition {}, spherical stress monotone={}",
            p.model,
            if p.verdict { "holds" } else { "FAILS" },
            p.spherical_monotone
        ));
    }
    out.push(format!(
        "verdict: {} (violations found: {})",
        r.verdict, r.violations_found
    ));
    out
}

/// Full CLI entry point; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = resolve_config(&cli, env_seed.as_deref()).and_then(|cfg| execute(&cli.command, &cfg));
    match result {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                for line in summary_lines(&report) {
                    println!("{line}");
                }
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("rank1lab: {e}");
            2
        }
    }
}
