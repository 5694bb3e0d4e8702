//! Report assembly and atomic file output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rank1lab_core::convexity::DirectionalProbe;
use rank1lab_core::injectivity::{PressureCheck, PressureScanRecord};
use rank1lab_core::{MaterialModel, ScanConfig, Seed};
use serde::Serialize;

use crate::config::{RunConfig, SuiteBudgets};
use crate::suites::{
    BlatzKoSuite, EllipticitySuite, GradientSuite, IdentitySuite, InjectivitySuite, TheoremSuite, TwinSuite,
};
use crate::CliError;

pub const SCHEMA_VERSION: &str = "1.0.0";
pub const REPORT_FILE: &str = "report.json";
pub const PRESSURE_CSV: &str = "pressure_scan.csv";
pub const VIOLATIONS_CSV: &str = "ellipticity_violations.csv";

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub seed: Seed,
    pub models: BTreeMap<String, BTreeMap<String, f64>>,
    pub scan: ScanConfig,
    pub budgets: SuiteBudgets,
}

impl ConfigEcho {
    pub fn new(cfg: &RunConfig) -> Result<ConfigEcho, CliError> {
        let models = cfg
            .materials()?
            .iter()
            .map(|m| {
                let params = m.parameters().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
                (m.name().to_string(), params)
            })
            .collect();
        Ok(ConfigEcho {
            seed: cfg.scan.seed,
            models,
            scan: cfg.scan.clone(),
            budgets: cfg.budgets.clone(),
        })
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Suites {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitySuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradcheck: Option<GradientSuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem_identity: Option<TheoremSuite>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ellipticity: Vec<EllipticitySuite>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub injectivity: Vec<InjectivitySuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twins: Option<TwinSuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blatzko_scan: Option<BlatzKoSuite>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pressure_compression: Vec<PressureCheck>,
}

impl Suites {
    /// Anything a suite flags: failed identities, ellipticity violations,
    /// collision certificates, sign-condition failures.
    pub fn violations_found(&self) -> bool {
        self.identities.as_ref().is_some_and(|s| !s.pass)
            || self.gradcheck.as_ref().is_some_and(|s| !s.pass)
            || self.theorem_identity.as_ref().is_some_and(|s| !s.pass)
            || self.ellipticity.iter().any(|e| e.report.violation_count > 0)
            || self.injectivity.iter().any(|i| i.violations())
            || self.twins.as_ref().is_some_and(|s| !s.pass)
            || self
                .blatzko_scan
                .as_ref()
                .is_some_and(|s| s.collision_rank_one == Some(true))
            || self.pressure_compression.iter().any(|p| !p.verdict)
    }

    /// Violations that the declared ellipticity classes do not account for.
    /// The pressure-compression sign is not predicted by the class, so it
    /// never counts here.
    pub fn inconsistent(&self) -> bool {
        self.identities.as_ref().is_some_and(|s| !s.pass)
            || self.gradcheck.as_ref().is_some_and(|s| !s.pass)
            || self.theorem_identity.as_ref().is_some_and(|s| !s.pass)
            || self.ellipticity.iter().any(|e| !e.consistent)
            || self.injectivity.iter().any(|i| !i.consistent)
            || self.twins.as_ref().is_some_and(|s| !s.pass)
            || self
                .blatzko_scan
                .as_ref()
                .is_some_and(|s| s.collision_rank_one == Some(true))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub timestamp: String,
    pub host: String,
    pub version: String,
    pub output_dir: String,
    /// Seconds per suite.
    pub wall_clock: BTreeMap<String, f64>,
}

impl Meta {
    pub fn new(output_dir: &Path) -> Meta {
        let host = std::env::var("HOSTNAME")
            .ok()
            .or_else(|| std::fs::read_to_string("/etc/hostname").ok())
            .map(|h| h.trim().to_string())
            .filter(|h| !h.is_empty())
            .unwrap_or_else(|| "unknown".into());
        Meta {
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            host: format!("{host} ({}-{})", std::env::consts::OS, std::env::consts::ARCH),
            version: env!("CARGO_PKG_VERSION").to_string(),
            output_dir: output_dir.display().to_string(),
            wall_clock: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: &'static str,
    pub command: String,
    pub config: ConfigEcho,
    pub suites: Suites,
    pub violations_found: bool,
    /// `pass` unless some suite reports a violation its model's declared
    /// ellipticity class does not explain.
    pub verdict: &'static str,
    /// Excluded from determinism comparisons.
    pub meta: Meta,
}

impl RunReport {
    pub fn new(command: String, config: ConfigEcho, suites: Suites, meta: Meta) -> RunReport {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command,
            config,
            violations_found: suites.violations_found(),
            verdict: if suites.inconsistent() { "fail" } else { "pass" },
            suites,
            meta,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.violations_found)
    }
}

/// 17 significant digits; round-trips every `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn pressure_csv(records: &[PressureScanRecord]) -> String {
    let mut out = String::from("alpha,spherical\n");
    for r in records {
        let _ = writeln!(out, "{},{}", num(r.alpha), num(r.spherical));
    }
    out
}

pub fn violations_csv(rows: &[(&str, &DirectionalProbe)]) -> String {
    let mut out = String::from("model");
    for i in 1..=3 {
        for j in 1..=3 {
            let _ = write!(out, ",F{i}{j}");
        }
    }
    out.push_str(",xi1,xi2,xi3,eta1,eta2,eta3,value\n");
    for (model, p) in rows {
        out.push_str(model);
        let fields =
            p.f.to_row_vec()
                .into_iter()
                .chain(p.xi.0)
                .chain(p.eta.0)
                .chain([p.value]);
        for x in fields {
            out.push(',');
            out.push_str(&num(x));
        }
        out.push('\n');
    }
    out
}

/// Create `dir` if needed and make sure a file can be written into it.
pub fn prepare_output_dir(dir: &Path) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::Output(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(fail)?;
    tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    Ok(())
}

/// Write each file to a temporary in `dir`, then rename into place once all
/// contents are staged.
pub fn write_files(dir: &Path, files: &[(&str, String)]) -> Result<(), CliError> {
    let fail = |name: &str, e: std::io::Error| CliError::Output(format!("{}: {e}", dir.join(name).display()));
    let mut staged = Vec::with_capacity(files.len());
    for (name, content) in files {
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(name, e))?;
        tmp.write_all(content.as_bytes()).map_err(|e| fail(name, e))?;
        // tempfiles are created 0600; reports are meant to be shared
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            let perms = std::fs::Permissions::from_mode(0o644);
            tmp.as_file().set_permissions(perms).map_err(|e| fail(name, e))?;
        }
        tmp.as_file().sync_all().map_err(|e| fail(name, e))?;
        staged.push((name, tmp));
    }
    for (name, tmp) in staged {
        tmp.persist(dir.join(name)).map_err(|e| fail(name, e.error))?;
    }
    Ok(())
}
