//! Mapping-class orbits of a point under a set of Dehn twists.
//!
//! Exploration strategies sit behind [`OrbitStrategy`] and are looked up by
//! name in a [`StrategyRegistry`]. Each visited point is reported once as an
//! [`OrbitRecord`] whose `word` is the twist applied to its `parent` record.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, extract_coords, ActionAngleCoords, AngleVector, TriangleChain};
use crate::error::{Error, Result};
use crate::rep::{chain_to_rep, fingerprint, fingerprint_curves, rep_to_chain, Fingerprint, Representation};
use crate::surface::{CurveClass, PantsDecomposition};

use super::flow::dehn_twist;

pub const RECANONICALIZE_EVERY: usize = 100;
pub const DEFAULT_QUANTUM: f64 = 1e-6;
pub const MAX_FINITE_ORBIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub max_steps: usize,
    pub quantum: f64,
    pub recanonicalize_every: usize,
    pub seed: u64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            max_steps: 1000,
            quantum: DEFAULT_QUANTUM,
            recanonicalize_every: RECANONICALIZE_EVERY,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    pub step: usize,
    pub parent: Option<usize>,
    pub word: Vec<String>,
    pub coords: ActionAngleCoords,
    pub fingerprint: Fingerprint,
}

#[derive(Serialize)]
struct OrbitLine<'a> {
    step: usize,
    parent: Option<usize>,
    word: &'a [String],
    beta: &'a [f64],
    gamma: &'a [Option<f64>],
    fp: String,
}

impl OrbitRecord {
    /// One JSONL line: `{step, parent, word, beta, gamma, fp}`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&OrbitLine {
            step: self.step,
            parent: self.parent,
            word: &self.word,
            beta: &self.coords.beta,
            gamma: &self.coords.gamma,
            fp: self.fingerprint.to_string(),
        })
        .expect("orbit records serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "size")]
pub enum OrbitVerdict {
    Finite(usize),
    BudgetExceeded,
}

pub type RecordSink<'a> = dyn FnMut(&OrbitRecord) -> Result<()> + 'a;

pub trait OrbitStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn explore(
        &self,
        start: &Representation,
        gens: &[CurveClass],
        cfg: &OrbitConfig,
        sink: &mut RecordSink<'_>,
    ) -> Result<OrbitVerdict>;
}

/// Chain, coordinates and fingerprint of a point.
struct Observation {
    chain: TriangleChain,
    coords: ActionAngleCoords,
    fingerprint: Fingerprint,
}

struct Observer {
    pants: PantsDecomposition,
    curves: Vec<CurveClass>,
    quantum: f64,
}

impl Observer {
    fn new(n: usize, quantum: f64) -> Result<Self> {
        Ok(Observer {
            pants: PantsDecomposition::standard(n)?,
            curves: fingerprint_curves(n)?,
            quantum,
        })
    }

    fn observe(&self, rep: &Representation) -> Result<Observation> {
        let chain = rep_to_chain(rep, &self.pants)?;
        let coords = extract_coords(&chain)?;
        let fingerprint = fingerprint(rep, &self.curves, self.quantum)?;
        Ok(Observation {
            chain,
            coords,
            fingerprint,
        })
    }
}

/// Rebuilds the representation from its chain to shed accumulated rounding:
/// from coordinates where the chain is regular, from the framed chain otherwise.
fn recanonicalize(obs: &Observation) -> Result<Representation> {
    if obs.coords.gamma.iter().all(Option::is_some) {
        chain_to_rep(&build_chain(&obs.chain.alpha, &obs.coords)?)
    } else {
        chain_to_rep(&obs.chain)
    }
}

fn aborted(step: usize) -> impl Fn(Error) -> Error {
    move |e| {
        log::error!("orbit aborted at step {step}: {e}");
        Error::Precondition(format!("orbit aborted at step {step}: {e}"))
    }
}

fn check_gens(gens: &[CurveClass]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::Precondition("no twist generators given".into()));
    }
    Ok(())
}

/// Uniformly random twist at each step; never certifies finiteness.
pub struct RandomWalk;

impl OrbitStrategy for RandomWalk {
    fn name(&self) -> &'static str {
        "random-walk"
    }

    fn explore(
        &self,
        start: &Representation,
        gens: &[CurveClass],
        cfg: &OrbitConfig,
        sink: &mut RecordSink<'_>,
    ) -> Result<OrbitVerdict> {
        check_gens(gens)?;
        let observer = Observer::new(start.n(), cfg.quantum)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut rep = start.clone();
        for step in 0..cfg.max_steps {
            let (parent, word) = if step == 0 {
                (None, vec![])
            } else {
                let g = &gens[rng.gen_range(0..gens.len())];
                rep = dehn_twist(&rep, g).map_err(aborted(step))?;
                (Some(step - 1), vec![g.to_string()])
            };
            let obs = observer.observe(&rep).map_err(aborted(step))?;
            if step > 0 && step % cfg.recanonicalize_every.max(1) == 0 {
                rep = recanonicalize(&obs).map_err(aborted(step))?;
            }
            sink(&OrbitRecord {
                step,
                parent,
                word,
                coords: obs.coords,
                fingerprint: obs.fingerprint,
            })?;
        }
        Ok(OrbitVerdict::BudgetExceeded)
    }
}

/// Breadth-first closure under the generators; every node is re-canonicalized.
pub struct BreadthFirst;

impl OrbitStrategy for BreadthFirst {
    fn name(&self) -> &'static str {
        "bfs"
    }

    fn explore(
        &self,
        start: &Representation,
        gens: &[CurveClass],
        cfg: &OrbitConfig,
        sink: &mut RecordSink<'_>,
    ) -> Result<OrbitVerdict> {
        check_gens(gens)?;
        let budget = cfg.max_steps.min(MAX_FINITE_ORBIT);
        let observer = Observer::new(start.n(), cfg.quantum)?;
        let mut index = FingerprintIndex::new(cfg.quantum);
        let obs = observer.observe(start).map_err(aborted(0))?;
        index.insert(obs.fingerprint.clone());
        let mut queue = VecDeque::from([(recanonicalize(&obs)?, 0usize)]);
        sink(&OrbitRecord {
            step: 0,
            parent: None,
            word: vec![],
            coords: obs.coords,
            fingerprint: obs.fingerprint,
        })?;
        let mut count = 1;
        while let Some((rep, id)) = queue.pop_front() {
            for g in gens {
                let next = dehn_twist(&rep, g).map_err(aborted(count))?;
                let obs = observer.observe(&next).map_err(aborted(count))?;
                if index.find(&obs.fingerprint).is_some() {
                    continue;
                }
                if count >= budget {
                    return Ok(OrbitVerdict::BudgetExceeded);
                }
                index.insert(obs.fingerprint.clone());
                queue.push_back((recanonicalize(&obs).map_err(aborted(count))?, count));
                sink(&OrbitRecord {
                    step: count,
                    parent: Some(id),
                    word: vec![g.to_string()],
                    coords: obs.coords,
                    fingerprint: obs.fingerprint,
                })?;
                count += 1;
            }
        }
        Ok(OrbitVerdict::Finite(count))
    }
}

/// Approximate lookup of fingerprints: values within `quantum` on the circle match.
pub struct FingerprintIndex {
    tol: f64,
    cell: f64,
    cells: i64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    entries: Vec<Fingerprint>,
}

impl FingerprintIndex {
    pub fn new(quantum: f64) -> Self {
        let cell = if quantum.is_finite() && quantum > 0.0 {
            (64.0 * quantum).min(TAU)
        } else {
            TAU
        };
        FingerprintIndex {
            tol: quantum,
            cell,
            cells: (TAU / cell).ceil() as i64,
            buckets: HashMap::new(),
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn cell_of(&self, v: f64) -> i64 {
        ((v / self.cell).floor() as i64).rem_euclid(self.cells)
    }

    pub fn insert(&mut self, fp: Fingerprint) -> usize {
        let key: Vec<i64> = fp.values.iter().map(|v| self.cell_of(*v)).collect();
        let id = self.entries.len();
        self.buckets.entry(key).or_default().push(id);
        self.entries.push(fp);
        id
    }

    pub fn find(&self, fp: &Fingerprint) -> Option<usize> {
        // Neighbouring cells are searched only for values close to a cell edge.
        let options: Vec<Vec<i64>> = fp
            .values
            .iter()
            .map(|v| {
                let c = self.cell_of(*v);
                let offset = v.rem_euclid(self.cell);
                let mut o = vec![c];
                if offset < self.tol {
                    o.push((c - 1).rem_euclid(self.cells));
                }
                if self.cell - offset < self.tol {
                    o.push((c + 1).rem_euclid(self.cells));
                }
                o.dedup();
                o
            })
            .collect();
        let mut key = vec![0i64; options.len()];
        self.search(&options, 0, &mut key, fp)
    }

    fn search(&self, options: &[Vec<i64>], depth: usize, key: &mut Vec<i64>, fp: &Fingerprint) -> Option<usize> {
        if depth == options.len() {
            return self.buckets.get(key.as_slice()).and_then(|ids| {
                ids.iter()
                    .copied()
                    .find(|&id| self.entries[id].approx_eq(fp, self.tol))
            });
        }
        for &c in &options[depth] {
            key[depth] = c;
            if let Some(id) = self.search(options, depth + 1, key, fp) {
                return Some(id);
            }
        }
        None
    }
}

pub struct StrategyRegistry {
    strategies: Vec<Box<dyn OrbitStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { strategies: vec![] }
    }

    pub fn register(&mut self, strategy: Box<dyn OrbitStrategy>) {
        self.strategies.retain(|s| s.name() != strategy.name());
        self.strategies.push(strategy);
    }

    pub fn get(&self, name: &str) -> Result<&dyn OrbitStrategy> {
        self.strategies
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "orbit strategy",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = StrategyRegistry::empty();
        r.register(Box::new(RandomWalk));
        r.register(Box::new(BreadthFirst));
        r
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitExploration {
    pub verdict: OrbitVerdict,
    pub records: Vec<OrbitRecord>,
}

/// Explores the orbit of the point with coordinates `start`, collecting all records.
pub fn orbit_explore(
    alpha: &AngleVector,
    start: &ActionAngleCoords,
    gens: &[CurveClass],
    cfg: &OrbitConfig,
    strategy: &str,
) -> Result<OrbitExploration> {
    let rep = chain_to_rep(&build_chain(alpha, start)?)?;
    let registry = StrategyRegistry::default();
    let mut records = Vec::new();
    let verdict = registry.get(strategy)?.explore(&rep, gens, cfg, &mut |r| {
        records.push(r.clone());
        Ok(())
    })?;
    Ok(OrbitExploration { verdict, records })
}
