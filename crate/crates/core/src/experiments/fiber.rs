//! Multiplicity of `γ ↦ (δ, ε)` on a fixed β-level.
//!
//! With β fixed, `δ_i` and `ε_i` depend on `γ_i` alone, so the preimage of
//! `(β, ζ)` is a product of circle preimages. Each circle map is sampled
//! along the `b_i` flow; a cyclic sample sequence with at most two turning
//! points takes every value at most twice.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, ActionAngleCoords};
use crate::dynamics::flow::flow;
use crate::error::Result;
use crate::rep::{angle_function, chain_to_rep};
use crate::surface::CurveClass;

use super::{fmt_num, ExperimentConfig, Table};

/// Random levels at which crossings are counted.
pub const LEVELS: usize = 256;
/// Random perturbations of the other angles in the separability check.
pub const SEPARABILITY_TRIALS: usize = 8;
pub const SYMMETRY_TRIALS: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleScan {
    pub i: usize,
    /// `"delta"` or `"epsilon"`.
    pub function: String,
    pub turning_points: usize,
    pub max_crossings: usize,
    /// `max |ζ(γ) − ζ(σ(γ))|` for the reflection σ fixing the zero locus
    /// (`γ ↦ −γ` for δ, `γ ↦ β − γ` for ε).
    pub symmetry_residual: f64,
    /// Largest change of `ζ_i` when the other angles move.
    pub separability_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub config: ExperimentConfig,
    pub samples_per_orbit: usize,
    pub scans: Vec<CircleScan>,
    /// Product over `i` of the worst per-circle multiplicity for each `ζ` choice.
    pub preimage_bound_delta: usize,
    pub preimage_bound_epsilon: usize,
    pub theoretical_bound: usize,
    pub violations: usize,
}

/// Local extrema of a cyclic sequence.
pub fn turning_points(v: &[f64]) -> usize {
    let n = v.len();
    let diffs: Vec<f64> = (0..n).map(|k| v[(k + 1) % n] - v[k]).filter(|d| *d != 0.0).collect();
    let m = diffs.len();
    (0..m).filter(|&k| (diffs[k] > 0.0) != (diffs[(k + 1) % m] > 0.0)).count()
}

/// Crossings of `level` by the cyclic piecewise-linear interpolation.
pub fn crossings(v: &[f64], level: f64) -> usize {
    let n = v.len();
    (0..n).filter(|&k| (v[k] < level) != (v[(k + 1) % n] < level)).count()
}

pub fn fiber_multiplicity_scan(cfg: &ExperimentConfig) -> Result<FiberReport> {
    fiber_run(cfg).map(|(r, _)| r)
}

pub(crate) fn fiber_run(cfg: &ExperimentConfig) -> Result<(FiberReport, Table)> {
    cfg.validate()?;
    let n = cfg.n;
    let m = n - 3;
    let alpha = cfg.alpha_vector()?;
    let mut base = cfg.start_coords(&alpha)?;
    let mut rng = cfg.rng(1);
    for g in base.gamma.iter_mut() {
        g.get_or_insert_with(|| rng.gen_range(0.0..TAU));
    }
    let samples = cfg.samples;
    let mut table = Table::new(&["i", "gamma", "delta", "epsilon"]);
    let mut scans = Vec::new();
    let mut worst = [vec![0usize; m], vec![0usize; m]];
    for i in 1..=m {
        // Put γ_i at 0 so the grid γ_i = 2πk/N is reached by the b_i flow at t = πk/N.
        let mut at_zero = base.clone();
        at_zero.gamma[i - 1] = Some(0.0);
        let rep0 = chain_to_rep(&build_chain(&alpha, &at_zero)?)?;
        let b = CurveClass::b(n, i)?;
        let (d, e) = (CurveClass::d(n, i)?, CurveClass::e(n, i)?);
        let beta = at_zero.beta[i - 1];
        let mut delta = Vec::with_capacity(samples);
        let mut eps = Vec::with_capacity(samples);
        for k in 0..samples {
            let r = flow(&rep0, &b, PI * k as f64 / samples as f64)?;
            delta.push(angle_function(&r, &d)?);
            eps.push(angle_function(&r, &e)?);
            if i == cfg.index {
                table.push(vec![
                    i.to_string(),
                    fmt_num(TAU * k as f64 / samples as f64),
                    fmt_num(delta[k]),
                    fmt_num(eps[k]),
                ]);
            }
        }
        let sep = separability(cfg, &alpha, &at_zero, i, &mut rng)?;
        let sym = (symmetry(&rep0, &b, &d, 0.0, &mut rng)?, symmetry(&rep0, &b, &e, beta / 2.0, &mut rng)?);
        for (which, values, (sep_res, sym_res)) in [
            ("delta", &delta, (sep.0, sym.0)),
            ("epsilon", &eps, (sep.1, sym.1)),
        ] {
            let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
            let max_crossings = (0..LEVELS)
                .map(|_| crossings(values, rng.gen_range(lo..=hi)))
                .max()
                .unwrap_or(0);
            let tp = turning_points(values);
            let slot = if which == "delta" { 0 } else { 1 };
            // Turning points bound the multiplicity exactly; crossings confirm it.
            worst[slot][i - 1] = tp.max(max_crossings);
            scans.push(CircleScan {
                i,
                function: which.into(),
                turning_points: tp,
                max_crossings,
                symmetry_residual: sym_res,
                separability_residual: sep_res,
            });
        }
    }
    let theoretical_bound = 1usize << m;
    let preimage_bound_delta = worst[0].iter().product();
    let preimage_bound_epsilon = worst[1].iter().product();
    let violations = scans
        .iter()
        .filter(|s| {
            s.turning_points > 2 || s.max_crossings > 2 || s.separability_residual > 1e-9 || s.symmetry_residual > 1e-9
        })
        .count()
        + usize::from(preimage_bound_delta > theoretical_bound)
        + usize::from(preimage_bound_epsilon > theoretical_bound);
    let report = FiberReport {
        config: cfg.clone(),
        samples_per_orbit: samples,
        scans,
        preimage_bound_delta,
        preimage_bound_epsilon,
        theoretical_bound,
        violations,
    };
    Ok((report, table))
}

/// `max |ζ(γ) − ζ(2c − γ)|` over random `γ`, evaluated along the `b_i` flow
/// from a point with `γ_i = 0`.
fn symmetry<R: Rng>(rep0: &crate::rep::Representation, b: &CurveClass, z: &CurveClass, c: f64, rng: &mut R) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..SYMMETRY_TRIALS {
        let g = rng.gen_range(0.0..TAU);
        let here = angle_function(&flow(rep0, b, g / 2.0)?, z)?;
        let there = angle_function(&flow(rep0, b, (2.0 * c - g) / 2.0)?, z)?;
        worst = worst.max((here - there).abs());
    }
    Ok(worst)
}

fn separability<R: Rng>(
    cfg: &ExperimentConfig,
    alpha: &crate::chain::AngleVector,
    coords: &ActionAngleCoords,
    i: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let n = cfg.n;
    let (d, e) = (CurveClass::d(n, i)?, CurveClass::e(n, i)?);
    let rep = chain_to_rep(&build_chain(alpha, coords)?)?;
    let (d0, e0) = (angle_function(&rep, &d)?, angle_function(&rep, &e)?);
    let mut res: (f64, f64) = (0.0, 0.0);
    for _ in 0..SEPARABILITY_TRIALS {
        let mut c = coords.clone();
        for (j, g) in c.gamma.iter_mut().enumerate() {
            if j != i - 1 {
                *g = Some(rng.gen_range(0.0..TAU));
            }
        }
        let r = chain_to_rep(&build_chain(alpha, &c)?)?;
        res.0 = res.0.max((angle_function(&r, &d)? - d0).abs());
        res.1 = res.1.max((angle_function(&r, &e)? - e0).abs());
    }
    Ok(res)
}
