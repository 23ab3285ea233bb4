//! Run configuration shared by the flag parser and JSON config files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sumrule_core::ensembles::EnsembleKind;
use sumrule_core::sumrules::{Ensemble, Side};

use crate::error::{CliError, Result};

/// The published schema of [`RunConfig`].
pub const SCHEMA: &str = include_str!("../schema/run-config.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Sample,
    Rates,
    Probe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Verify => "verify",
            Self::Sample => "sample",
            Self::Rates => "rates",
            Self::Probe => "probe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleName {
    Hermite,
    Laguerre,
    /// Ensemble on `[0, 1]`.
    #[value(alias = "jacobi-kn")]
    #[serde(alias = "jacobi-kn")]
    Jacobi,
}

impl EnsembleName {
    pub fn name(self) -> &'static str {
        match self {
            Self::Hermite => "hermite",
            Self::Laguerre => "laguerre",
            Self::Jacobi => "jacobi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub kind: EnsembleName,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default)]
    pub kappa1: f64,
    #[serde(default)]
    pub kappa2: f64,
}

fn default_tau() -> f64 {
    0.5
}

impl EnsembleConfig {
    pub fn sum_rule(&self) -> Result<Ensemble> {
        Ok(match self.kind {
            EnsembleName::Hermite => Ensemble::Hermite,
            EnsembleName::Laguerre => Ensemble::laguerre(self.tau)?,
            EnsembleName::Jacobi => Ensemble::jacobi(self.kappa1, self.kappa2)?,
        })
    }

    pub fn sampler(&self) -> EnsembleKind {
        match self.kind {
            EnsembleName::Hermite => EnsembleKind::Hermite,
            EnsembleName::Laguerre => EnsembleKind::Laguerre { tau: self.tau },
            EnsembleName::Jacobi => EnsembleKind::JacobiKn {
                kappa1: self.kappa1,
                kappa2: self.kappa2,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Plus,
    Minus,
}

impl From<SideName> for Side {
    fn from(s: SideName) -> Self {
        match s {
            SideName::Plus => Side::Plus,
            SideName::Minus => Side::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// File to write; standard output when absent.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Json
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Json,
        }
    }
}

/// Everything a run depends on. Missing fields take the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub ensemble: EnsembleConfig,
    /// `verify`: built-in measure spec or path of a measure JSON file.
    #[serde(default)]
    pub measure: Option<String>,
    /// `verify`: coefficient file (JSON `{"a", "b"}` or CSV `k,a_k,b_k`).
    #[serde(default)]
    pub coefficients: Option<PathBuf>,
    #[serde(default = "defaults::depth")]
    pub depth: usize,
    #[serde(default = "defaults::panels")]
    pub panels: usize,
    #[serde(default = "defaults::order")]
    pub order: usize,
    #[serde(default = "defaults::tolerance")]
    pub tolerance: f64,
    #[serde(default = "defaults::eps_tail")]
    pub eps_tail: f64,
    #[serde(default = "defaults::tail_window")]
    pub tail_window: usize,
    #[serde(default = "defaults::kl_cap")]
    pub kl_cap: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[serde(default = "defaults::beta")]
    pub beta: f64,
    #[serde(default)]
    pub weighted: bool,
    /// `rates`: evaluation points.
    #[serde(default)]
    pub grid: Vec<f64>,
    #[serde(default = "defaults::side")]
    pub side: SideName,
    /// `probe`: probe point; `rates` uses it as a one-point grid when `grid` is empty.
    #[serde(default)]
    pub x: Option<f64>,
    #[serde(default = "defaults::nladder")]
    pub nladder: Vec<usize>,
    #[serde(default = "defaults::draws")]
    pub draws: usize,
    #[serde(default)]
    pub output: OutputConfig,
}

pub mod defaults {
    use super::SideName;

    pub fn depth() -> usize {
        200
    }
    pub fn panels() -> usize {
        128
    }
    pub fn order() -> usize {
        12
    }
    pub fn tolerance() -> f64 {
        1e-6
    }
    pub fn eps_tail() -> f64 {
        1e-6
    }
    pub fn tail_window() -> usize {
        10
    }
    pub fn kl_cap() -> f64 {
        1e6
    }
    pub fn n() -> usize {
        100
    }
    pub fn beta() -> f64 {
        2.0
    }
    pub fn side() -> SideName {
        SideName::Plus
    }
    pub fn nladder() -> Vec<usize> {
        vec![50, 100, 200]
    }
    pub fn draws() -> usize {
        5000
    }
}

impl RunConfig {
    /// A configuration with every optional field at its default.
    pub fn new(command: Command, ensemble: EnsembleConfig) -> Self {
        Self {
            command,
            ensemble,
            measure: None,
            coefficients: None,
            depth: defaults::depth(),
            panels: defaults::panels(),
            order: defaults::order(),
            tolerance: defaults::tolerance(),
            eps_tail: defaults::eps_tail(),
            tail_window: defaults::tail_window(),
            kl_cap: defaults::kl_cap(),
            seed: 0,
            n: defaults::n(),
            beta: defaults::beta(),
            weighted: false,
            grid: Vec::new(),
            side: defaults::side(),
            x: None,
            nladder: defaults::nladder(),
            draws: defaults::draws(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|source| CliError::Json {
            context: "run configuration".into(),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Range checks the schema expresses with `minimum`/`exclusiveMinimum`.
    pub fn validate(&self) -> Result<()> {
        let e = &self.ensemble;
        let bad = |what: &str| Err(CliError::config(what));
        if !(e.tau > 0.0 && e.tau <= 1.0) {
            return bad("ensemble.tau must lie in (0, 1]");
        }
        if !(e.kappa1 >= 0.0 && e.kappa2 >= 0.0 && e.kappa1.is_finite() && e.kappa2.is_finite()) {
            return bad("ensemble.kappa1 and ensemble.kappa2 must be finite and >= 0");
        }
        if self.depth == 0 || self.panels == 0 || self.order == 0 || self.tail_window == 0 {
            return bad("depth, panels, order and tail_window must be positive");
        }
        if self.order > 64 {
            return bad("order must be at most 64");
        }
        if !(self.tolerance > 0.0 && self.eps_tail > 0.0 && self.kl_cap > 0.0) {
            return bad("tolerance, eps_tail and kl_cap must be positive");
        }
        if self.n == 0 {
            return bad("n must be positive");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad("beta must be positive and finite");
        }
        if self.grid.iter().chain(&self.x).any(|x| x.is_nan()) {
            return bad("grid points must be numbers");
        }
        if self.nladder.is_empty() || self.nladder.contains(&0) {
            return bad("nladder must be a nonempty list of positive sizes");
        }
        match self.command {
            Command::Verify if self.measure.is_none() => bad("verify needs a measure"),
            Command::Rates if self.grid.is_empty() && self.x.is_none() => {
                bad("rates needs a grid or x")
            }
            Command::Probe if self.x.is_none_or(|x| !x.is_finite()) => {
                bad("probe needs a finite x")
            }
            Command::Probe if self.draws < sumrule_core::ldp::MIN_DRAWS => {
                bad("probe needs at least 100 draws")
            }
            _ => Ok(()),
        }
    }

    /// Evaluation points of `rates`.
    pub fn rate_grid(&self) -> Vec<f64> {
        match (self.grid.is_empty(), self.x) {
            (true, Some(x)) => vec![x],
            _ => self.grid.clone(),
        }
    }

    /// SHA-256 of the canonical JSON of the configuration, output path excluded.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output.path = None;
        let text = serde_json::to_string(&canonical).expect("configuration serializes");
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Parses `start:stop:step` (inclusive of `stop` up to rounding) or a comma list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::config(format!("not a number in grid: {s:?}")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if !(step > 0.0) || !(stop >= start) {
                return Err(CliError::config(
                    "grid needs start <= stop and a positive step",
                ));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            if count > 1_000_000 {
                return Err(CliError::config("grid has more than a million points"));
            }
            Ok((0..=count).map(|i| start + i as f64 * step).collect())
        }
        [list] => list.split(',').map(number).collect(),
        _ => Err(CliError::config(format!("cannot parse grid {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermite() -> EnsembleConfig {
        EnsembleConfig {
            kind: EnsembleName::Hermite,
            tau: 0.5,
            kappa1: 0.0,
            kappa2: 0.0,
        }
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("2.1:3.0:0.1").unwrap();
        assert_eq!(g.len(), 10);
        assert!((g[9] - 3.0).abs() < 1e-12);
        assert_eq!(parse_grid("1.5").unwrap(), [1.5]);
        assert_eq!(parse_grid("1,2.5").unwrap(), [1.0, 2.5]);
        assert!(parse_grid("3:2:0.1").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let c = RunConfig::from_json(r#"{"command":"sample","ensemble":{"kind":"jacobi-kn"}}"#)
            .unwrap();
        assert_eq!(c.ensemble.kind, EnsembleName::Jacobi);
        assert_eq!(c.n, 100);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn unknown_fields_and_ranges_are_rejected() {
        assert!(RunConfig::from_json(
            r#"{"command":"sample","ensemble":{"kind":"hermite"},"bogus":1}"#
        )
        .is_err());
        assert!(RunConfig::from_json(
            r#"{"command":"sample","ensemble":{"kind":"laguerre","tau":1.5}}"#
        )
        .is_err());
        assert!(
            RunConfig::from_json(r#"{"command":"verify","ensemble":{"kind":"hermite"}}"#).is_err()
        );
        assert!(RunConfig::from_json(
            r#"{"command":"sample","ensemble":{"kind":"hermite"},"beta":-1}"#
        )
        .is_err());
    }

    #[test]
    fn hash_ignores_the_output_path() {
        let mut a = RunConfig::new(Command::Sample, hermite());
        let mut b = a.clone();
        b.output.path = Some("elsewhere.csv".into());
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        a.seed = 1;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn schema_is_valid_json_and_lists_every_field() {
        let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
        let props = schema["properties"].as_object().unwrap();
        let config = serde_json::to_value(RunConfig::new(Command::Verify, hermite())).unwrap();
        for key in config.as_object().unwrap().keys() {
            assert!(props.contains_key(key), "schema misses {key}");
        }
        assert_eq!(props.len(), config.as_object().unwrap().len());
    }
}
