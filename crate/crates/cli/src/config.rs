//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! seed = 42
//! scan.spread = 0.4
//! scan.n_F = 1000
//! scan.probe_F = 1 0 0 0 1 0 0 0 1; 0.4 0 0 0 1 0 0 0 1
//! model.blatz_ko.mu = 1.0
//! output_dir = out
//! ```
//!
//! Keys are case-insensitive. Unknown keys are rejected so typos do not
//! silently fall back to defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rank1lab_core::{Mat3, Material, ScanConfig, Seed};
use serde::Serialize;

use crate::CliError;

/// Budgets of the suites that are not covered by [`ScanConfig`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteBudgets {
    pub identities_n: usize,
    pub gradcheck_n_f: usize,
    pub theorem_n: usize,
    pub twins_n: usize,
    pub twins_n_det: usize,
    pub blatzko_alpha_min: f64,
    pub blatzko_alpha_max: f64,
    pub blatzko_n: usize,
    pub pc_lambda_min: f64,
    pub pc_lambda_max: f64,
    pub pc_n: usize,
}

impl Default for SuiteBudgets {
    fn default() -> Self {
        SuiteBudgets {
            identities_n: 10_000,
            gradcheck_n_f: 100,
            theorem_n: 10_000,
            twins_n: 100_000,
            twins_n_det: 10_000,
            blatzko_alpha_min: 0.25,
            blatzko_alpha_max: 16.0,
            blatzko_n: 1000,
            pc_lambda_min: 0.2,
            pc_lambda_max: 5.0,
            pc_n: 401,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Model names (canonical) with their explicitly configured parameters.
    pub models: Vec<(String, BTreeMap<String, f64>)>,
    pub scan: ScanConfig,
    pub budgets: SuiteBudgets,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            models: Material::NAMES
                .iter()
                .map(|n| (n.to_string(), BTreeMap::new()))
                .collect(),
            scan: ScanConfig::default(),
            budgets: SuiteBudgets::default(),
            output_dir: PathBuf::from("rank1lab-out"),
        }
    }
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("line {line}: {msg}"))
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| bad(line, format!("`{key}` expects a number, got `{v}`")))
}

fn parse_matrices(line: usize, v: &str) -> Result<Vec<Mat3>, CliError> {
    if v.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    v.split(';')
        .map(|chunk| {
            let nums: Vec<f64> = chunk
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| parse_num(line, "scan.probe_F", s))
                .collect::<Result<_, _>>()?;
            Mat3::from_row_slice(&nums)
                .ok_or_else(|| bad(line, format!("a probe matrix needs 9 entries, got {}", nums.len())))
        })
        .collect()
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeMap::new();
        let mut params: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        let mut model_list: Option<Vec<String>> = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| bad(line, format!("expected `key = value`, got `{content}`")))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(bad(line, "empty key or value"));
            }
            if let Some(prev) = seen.insert(key.clone(), line) {
                return Err(bad(line, format!("duplicate key `{key}` (first set on line {prev})")));
            }

            let b = &mut cfg.budgets;
            let s = &mut cfg.scan;
            match key.as_str() {
                "seed" => s.seed = Seed(parse_num(line, &key, value)?),
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "models" => {
                    let names = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|n| !n.is_empty())
                        .map(|n| {
                            Material::canonical_name(n)
                                .map(str::to_string)
                                .ok_or_else(|| bad(line, format!("unknown model `{n}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    model_list = Some(names);
                }
                "scan.spread" => s.spread = parse_num(line, &key, value)?,
                "scan.n_f" => s.n_f = parse_num(line, &key, value)?,
                "scan.n_dir" => s.n_dir = parse_num(line, &key, value)?,
                "scan.refine_k" => s.refine_k = parse_num(line, &key, value)?,
                "scan.search_n_f" => s.search_n_f = parse_num(line, &key, value)?,
                "scan.n_starts" => s.n_starts = parse_num(line, &key, value)?,
                "scan.s_max" => s.s_max = parse_num(line, &key, value)?,
                "scan.probe_f" => s.probe_f = parse_matrices(line, value)?,
                "identities.n" => b.identities_n = parse_num(line, &key, value)?,
                "gradcheck.n_f" => b.gradcheck_n_f = parse_num(line, &key, value)?,
                "theorem.n" => b.theorem_n = parse_num(line, &key, value)?,
                "twins.n" => b.twins_n = parse_num(line, &key, value)?,
                "twins.n_det" => b.twins_n_det = parse_num(line, &key, value)?,
                "blatzko.alpha_min" => b.blatzko_alpha_min = parse_num(line, &key, value)?,
                "blatzko.alpha_max" => b.blatzko_alpha_max = parse_num(line, &key, value)?,
                "blatzko.n" => b.blatzko_n = parse_num(line, &key, value)?,
                "pc.lambda_min" => b.pc_lambda_min = parse_num(line, &key, value)?,
                "pc.lambda_max" => b.pc_lambda_max = parse_num(line, &key, value)?,
                "pc.n" => b.pc_n = parse_num(line, &key, value)?,
                _ => {
                    let Some(rest) = key.strip_prefix("model.") else {
                        return Err(bad(line, format!("unknown key `{key}`")));
                    };
                    let (name, param) = rest
                        .rsplit_once('.')
                        .ok_or_else(|| bad(line, format!("expected `model.<name>.<param>`, got `{key}`")))?;
                    let name =
                        Material::canonical_name(name).ok_or_else(|| bad(line, format!("unknown model `{name}`")))?;
                    params
                        .entry(name.to_string())
                        .or_default()
                        .insert(param.to_string(), parse_num(line, &key, value)?);
                }
            }
        }

        let names: Vec<String> = match model_list {
            Some(list) => list,
            None => Material::NAMES.iter().map(|n| n.to_string()).collect(),
        };
        cfg.models = names
            .into_iter()
            .map(|n| {
                let p = params.get(&n).cloned().unwrap_or_default();
                (n, p)
            })
            .collect();
        // parameters for models left out of the list still have to be valid
        for (name, p) in &params {
            Material::from_name(name, p).map_err(|e| CliError::Config(e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let s = &self.scan;
        let b = &self.budgets;
        let fail = |msg: String| Err(CliError::Config(msg));
        if !(s.spread > 0.0 && s.spread < 1.0) {
            return fail(format!("scan.spread must lie in (0, 1), got {}", s.spread));
        }
        let counts = [
            ("scan.n_F", s.n_f),
            ("scan.n_dir", s.n_dir),
            ("scan.n_starts", s.n_starts),
            ("identities.n", b.identities_n),
            ("gradcheck.n_F", b.gradcheck_n_f),
            ("theorem.n", b.theorem_n),
            ("twins.n", b.twins_n),
            ("twins.n_det", b.twins_n_det),
        ];
        if let Some((k, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return fail(format!("{k} must be positive"));
        }
        if !(s.s_max.is_finite() && s.s_max > 0.0) {
            return fail(format!("scan.s_max must be positive, got {}", s.s_max));
        }
        if let Some(f) = s.probe_f.iter().find(|f| !(f.det() > 0.0 && f.is_finite())) {
            return fail(format!("probe matrix {f:?} is not in GL+(3)"));
        }
        if !(b.blatzko_alpha_min > 0.0 && b.blatzko_alpha_max > b.blatzko_alpha_min) || b.blatzko_n < 3 {
            return fail("blatzko scan needs 0 < alpha_min < alpha_max and n >= 3".into());
        }
        if !(b.pc_lambda_min > 0.0 && b.pc_lambda_max > b.pc_lambda_min) || b.pc_n < 3 {
            return fail("pc grid needs 0 < lambda_min < lambda_max and n >= 3".into());
        }
        if self.models.is_empty() {
            return fail("no models configured".into());
        }
        for (name, p) in &self.models {
            Material::from_name(name, p).map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// The model `name` with any configured parameters applied.
    pub fn material(&self, name: &str) -> Result<Material, CliError> {
        let canonical =
            Material::canonical_name(name).ok_or_else(|| CliError::Usage(format!("unknown model `{name}`")))?;
        let params = self
            .models
            .iter()
            .find(|(n, _)| n == canonical)
            .map(|(_, p)| p.clone())
            .unwrap_or_default();
        Material::from_name(canonical, &params).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn materials(&self) -> Result<Vec<Material>, CliError> {
        self.models.iter().map(|(n, _)| self.material(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rank1lab_core::MaterialModel;

    #[test]
    fn empty_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
        assert_eq!(RunConfig::parse("# only a comment\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn keys_and_models() {
        let cfg = RunConfig::parse(
            "seed = 9 # trailing\nscan.n_F = 12\nSCAN.SPREAD=0.2\nmodel.blatz_ko.mu = 2.5\n\
             models = blatz-ko, svk\nscan.probe_F = 1 0 0 0 1 0 0 0 1; 0.4,0,0,0,1,0,0,0,1\n",
        )
        .unwrap();
        assert_eq!(cfg.scan.seed, Seed(9));
        assert_eq!(cfg.scan.n_f, 12);
        assert_eq!(cfg.scan.spread, 0.2);
        assert_eq!(cfg.models.len(), 2);
        assert_eq!(cfg.scan.probe_f[1], Mat3::diag(0.4, 1.0, 1.0));
        let m = cfg.material("blatz-ko").unwrap();
        assert_eq!(m.parameters(), vec![("mu", 2.5)]);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "seed 3",
            "seed = x",
            "nope = 1",
            "scan.spread = 1.5",
            "scan.n_F = 0",
            "seed = 1\nseed = 2",
            "model.rubber.mu = 1",
            "model.svk.nu = 1",
            "model.svk.mu = -1",
            "models = svk, granite",
            "scan.probe_F = 1 2 3",
            "scan.probe_F = -1 0 0 0 1 0 0 0 1",
        ] {
            assert!(RunConfig::parse(text).is_err(), "{text}");
        }
    }
}
