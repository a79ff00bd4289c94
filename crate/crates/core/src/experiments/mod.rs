//! Reproducible desk-scale experiments behind a name-keyed registry.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]: the
//! report embeds the config, and re-running gives bit-identical output.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{moment_map, ActionAngleCoords, AngleVector};
use crate::dynamics::orbit::{OrbitRecord, DEFAULT_QUANTUM};
use crate::error::{Error, Result};
use crate::rep::fingerprint_curves;
use crate::sampling::random_regular;
use crate::surface::CurveClass;

pub mod density;
pub mod fiber;
pub mod glue;
pub mod transversality;
pub mod zero_locus;

pub use density::{density_experiment, DensityReport};
pub use fiber::{fiber_multiplicity_scan, FiberReport};
pub use glue::{gluing_consistency, GlueReport};
pub use transversality::{transversality_sweep, TransversalityReport};
pub use zero_locus::{zero_locus_scan, ZeroLocusScanReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Central-difference step along flows.
    pub fd_step: f64,
    /// Half-width of the angular windows around predicted zero loci.
    pub window: f64,
    /// Brackets below `relative · scale` count as vanishing.
    pub relative: f64,
    /// Jacobians with `σ_min < rank · max(σ_max, 1)` count as singular.
    pub rank: f64,
    /// Conjugacy and fingerprint agreement in gluing checks.
    pub glue: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fd_step: 1e-5,
            window: 1e-4,
            relative: 1e-3,
            rank: 1e-6,
            glue: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    pub table: Option<PathBuf>,
}

/// `"random"` or explicit coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartSpec {
    Named(String),
    Coords(ActionAngleCoords),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Defaults to all angles equal to 1.9π.
    pub alpha: Option<Vec<f64>>,
    pub start: StartSpec,
    /// Curve labels (`b1`, `d2`, `e1`, `p3`); defaults to all `b_i`, `d_i`, `e_i`.
    pub generators: Option<Vec<String>>,
    pub steps: usize,
    pub seed: u64,
    pub quantum: f64,
    pub strategy: String,
    pub checkpoints: Vec<usize>,
    /// Sample count for scans.
    pub samples: usize,
    /// Curve index `i` the scans focus on.
    pub index: usize,
    /// Sub-sphere size for gluing; defaults to `n − 1`.
    pub nbar: Option<usize>,
    /// Lower bound on moment values of random starting points.
    pub margin: f64,
    pub tolerances: Tolerances,
    pub output: OutputPaths,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 4,
            alpha: None,
            start: StartSpec::Named("random".into()),
            generators: None,
            steps: 1000,
            seed: 0,
            quantum: DEFAULT_QUANTUM,
            strategy: "random-walk".into(),
            checkpoints: vec![1_000, 10_000, 100_000],
            samples: 10_000,
            index: 1,
            nbar: None,
            margin: 0.02,
            tolerances: Tolerances::default(),
            output: OutputPaths::default(),
        }
    }
}

fn config_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    /// Checks every field and cross-field constraint, naming the offending path.
    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(config_err("n", format!("need at least 4 punctures, got {}", self.n)));
        }
        self.alpha_vector().map_err(|e| config_err("alpha", e.to_string()))?;
        match &self.start {
            StartSpec::Named(s) if s == "random" => {}
            StartSpec::Named(s) => return Err(config_err("start", format!("expected \"random\" or coordinates, got {s:?}"))),
            StartSpec::Coords(c) => {
                let m = self.n - 3;
                if c.beta.len() != m || c.gamma.len() != m {
                    return Err(config_err("start", format!("need {m} beta and gamma values")));
                }
                let mu = moment_map(&self.alpha_vector()?, &c.beta);
                if let Some((k, v)) = mu.mu.iter().enumerate().find(|(_, v)| **v < -1e-12) {
                    return Err(config_err("start.beta", format!("mu_{k} = {v} is negative")));
                }
                let alpha = self.alpha_vector()?;
                for k in 1..=m {
                    if c.gamma[k - 1].is_none() && crate::sampling::gamma_required(&alpha, &mu.mu, k) {
                        return Err(config_err(format!("start.gamma[{}]", k - 1), "required where both adjacent triangles are non-degenerate"));
                    }
                }
            }
        }
        if let Some(gens) = &self.generators {
            if gens.is_empty() {
                return Err(config_err("generators", "must not be empty"));
            }
            for (k, g) in gens.iter().enumerate() {
                CurveClass::parse(g, self.n).map_err(|e| config_err(format!("generators[{k}]"), e.to_string()))?;
            }
        }
        let strategies = crate::dynamics::orbit::StrategyRegistry::default();
        if strategies.get(&self.strategy).is_err() {
            return Err(config_err("strategy", format!("expected one of {:?}, got {:?}", strategies.names(), self.strategy)));
        }
        if self.steps == 0 {
            return Err(config_err("steps", "must be at least 1"));
        }
        if !(self.quantum > 0.0) {
            return Err(config_err("quantum", "must be positive"));
        }
        if self.checkpoints.contains(&0) {
            return Err(config_err("checkpoints", "must be positive"));
        }
        if self.samples == 0 {
            return Err(config_err("samples", "must be at least 1"));
        }
        if self.index == 0 || self.index > self.n - 3 {
            return Err(config_err("index", format!("must lie in 1..={}", self.n - 3)));
        }
        if let Some(nbar) = self.nbar {
            if nbar < 4 || nbar >= self.n {
                return Err(config_err("nbar", format!("must lie in 4..{}", self.n)));
            }
        }
        if !(self.margin >= 0.0 && self.margin * (self.n - 2) as f64 <= 0.5) {
            return Err(config_err("margin", "must be in [0, 1/(2(n−2))]"));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("fd_step", t.fd_step),
            ("window", t.window),
            ("relative", t.relative),
            ("rank", t.rank),
            ("glue", t.glue),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_err(format!("tolerances.{name}"), "must be positive and finite"));
            }
        }
        Ok(())
    }

    pub fn alpha_vector(&self) -> Result<AngleVector> {
        match &self.alpha {
            Some(a) if a.len() != self.n => Err(Error::InvalidAlpha(format!("{} angles for n = {}", a.len(), self.n))),
            Some(a) => AngleVector::new(a.clone()),
            None => AngleVector::uniform(self.n, 1.9 * PI),
        }
    }

    pub fn generator_curves(&self) -> Result<Vec<CurveClass>> {
        match &self.generators {
            Some(g) => g.iter().map(|s| CurveClass::parse(s, self.n)).collect(),
            None => fingerprint_curves(self.n),
        }
    }

    /// Seeded generator for one named purpose, independent of the others.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    pub fn start_coords(&self, alpha: &AngleVector) -> Result<ActionAngleCoords> {
        match &self.start {
            StartSpec::Coords(c) => Ok(c.clone()),
            StartSpec::Named(_) => random_regular(&mut self.rng(0), alpha, self.margin),
        }
    }

    pub fn nbar(&self) -> usize {
        self.nbar.unwrap_or(self.n - 1)
    }
}

/// A CSV-ready table; numbers are written in Rust's shortest round-trip form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub report: serde_json::Value,
    pub table: Option<Table>,
    /// Whether the experiment's own checks passed (always true for pure probes).
    pub passed: bool,
}

pub type SampleSink<'a> = dyn FnMut(&OrbitRecord) -> Result<()> + 'a;

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig, samples: &mut SampleSink<'_>) -> Result<ExperimentOutput>;
}

fn to_value<T: Serialize>(report: &T) -> serde_json::Value {
    serde_json::to_value(report).expect("reports serialize")
}

struct Density;
struct Fiber;
struct Transversality;
struct ZeroLocus;
struct Glue;

impl Experiment for Density {
    fn name(&self) -> &'static str {
        "density"
    }
    fn run(&self, cfg: &ExperimentConfig, samples: &mut SampleSink<'_>) -> Result<ExperimentOutput> {
        let (r, table) = density::density_run(cfg, samples)?;
        Ok(ExperimentOutput { report: to_value(&r), table: Some(table), passed: true })
    }
}

impl Experiment for Fiber {
    fn name(&self) -> &'static str {
        "fiber"
    }
    fn run(&self, cfg: &ExperimentConfig, _: &mut SampleSink<'_>) -> Result<ExperimentOutput> {
        let (r, table) = fiber::fiber_run(cfg)?;
        Ok(ExperimentOutput { passed: r.violations == 0, report: to_value(&r), table: Some(table) })
    }
}

impl Experiment for Transversality {
    fn name(&self) -> &'static str {
        "transversality"
    }
    fn run(&self, cfg: &ExperimentConfig, _: &mut SampleSink<'_>) -> Result<ExperimentOutput> {
        let (r, table) = transversality::transversality_run(cfg)?;
        Ok(ExperimentOutput { passed: r.passed, report: to_value(&r), table: Some(table) })
    }
}

impl Experiment for ZeroLocus {
    fn name(&self) -> &'static str {
        "zero-locus"
    }
    fn run(&self, cfg: &ExperimentConfig, _: &mut SampleSink<'_>) -> Result<ExperimentOutput> {
        let (r, table) = zero_locus::zero_locus_run(cfg)?;
        Ok(ExperimentOutput { passed: r.inconsistent == 0, report: to_value(&r), table: Some(table) })
    }
}

impl Experiment for Glue {
    fn name(&self) -> &'static str {
        "glue"
    }
    fn run(&self, cfg: &ExperimentConfig, _: &mut SampleSink<'_>) -> Result<ExperimentOutput> {
        let (r, table) = glue::glue_run(cfg)?;
        Ok(ExperimentOutput { passed: r.passed, report: to_value(&r), table: Some(table) })
    }
}

pub struct ExperimentRegistry {
    experiments: Vec<Box<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn get(&self, name: &str) -> Result<&dyn Experiment> {
        self.experiments
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "experiment",
                name: name.into(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.experiments.iter().map(|e| e.name()).collect()
    }

    pub fn register(&mut self, e: Box<dyn Experiment>) {
        self.experiments.retain(|x| x.name() != e.name());
        self.experiments.push(e);
    }
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        ExperimentRegistry {
            experiments: vec![
                Box::new(Density),
                Box::new(Fiber),
                Box::new(Transversality),
                Box::new(ZeroLocus),
                Box::new(Glue),
            ],
        }
    }
}

/// Distance on the circle from `x` to the nearest of `loci`.
pub(crate) fn circle_distance(x: f64, loci: &[f64]) -> f64 {
    crate::dynamics::poisson::locus_distance(x.rem_euclid(TAU), loci)
}

pub(crate) fn fmt_num(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&s).unwrap(), cfg);
    }

    #[test]
    fn validation_names_the_field() {
        let mut cfg = ExperimentConfig { n: 5, ..Default::default() };
        cfg.generators = Some(vec!["b1".into(), "q7".into()]);
        match cfg.validate() {
            Err(Error::Config { path, .. }) => assert_eq!(path, "generators[1]"),
            other => panic!("{other:?}"),
        }
        let cfg = ExperimentConfig { alpha: Some(vec![1.0; 4]), ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == "alpha"));
        let cfg = ExperimentConfig { steps: 0, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == "steps"));
        let cfg = ExperimentConfig { strategy: "dfs".into(), ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == "strategy"));
        let start = StartSpec::Coords(ActionAngleCoords { beta: vec![3.0], gamma: vec![None] });
        let cfg = ExperimentConfig { start, ..Default::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == "start.gamma[0]"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"n": 4, "stpes": 3}"#).is_err());
        let c: ExperimentConfig = serde_json::from_str(r#"{"start": {"beta": [3.0], "gamma": [1.0]}}"#).unwrap();
        assert!(matches!(c.start, StartSpec::Coords(_)));
    }

    #[test]
    fn registry_names() {
        let r = ExperimentRegistry::default();
        assert_eq!(r.names(), vec!["density", "fiber", "transversality", "zero-locus", "glue"]);
        assert!(r.get("nope").is_err());
    }
}
