//! Rank of the finite-difference Jacobian of `(β, ζ)` along the flows of the
//! same curves. `J[f][g] = dθ_f(X_g) = {f, g}`, so with disjoint-support
//! zeros the `(β, ζ)` block is diagonal and `J` drops rank exactly where some
//! `{β_i, ζ_i}` vanishes.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{beta_from_moments, build_chain, ActionAngleCoords, AngleVector};
use crate::dynamics::poisson::poisson_fd;
use crate::error::Result;
use crate::rep::{chain_to_rep, Representation};
use crate::sampling::random_regular;
use crate::surface::CurveClass;

use super::{circle_distance, fmt_num, ExperimentConfig, Table};

/// Random points keep every `γ_i` at least this far from all predicted loci.
pub const RANDOM_CLEARANCE: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// `"random"`, `"planted"` or `"pole"`.
    pub kind: String,
    pub gamma: Vec<Option<f64>>,
    /// `σ_min / max(σ_max, 1)` with `ζ = δ` throughout.
    pub ratio_delta: Option<f64>,
    /// Same with `ζ_i = ε_i` where `γ_i` is nearer `{0, π}` than `{β_i/2, β_i/2 − π}`.
    pub ratio_prescribed: Option<f64>,
    pub expected_singular_delta: bool,
    /// Four-punctured spheres: ratios of the `(β,δ)`, `(β,ε)`, `(δ,ε)` pairings.
    pub pairings: Option<[f64; 3]>,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    pub config: ExperimentConfig,
    pub points: usize,
    pub planted: usize,
    pub inconsistent: usize,
    pub min_prescribed_ratio: f64,
    pub passed: bool,
    pub failures: Vec<SweepPoint>,
}

pub fn rank_ratio(j: &DMatrix<f64>) -> f64 {
    let s = j.singular_values();
    let max = s.max();
    s.min() / max.max(1.0)
}

/// `J[r][c] = {f_r, f_c}` by central differences.
pub fn bracket_jacobian(rep: &Representation, curves: &[CurveClass], h: f64) -> Result<DMatrix<f64>> {
    let k = curves.len();
    let mut j = DMatrix::zeros(k, k);
    for r in 0..k {
        for c in 0..k {
            j[(r, c)] = poisson_fd(rep, &curves[r], &curves[c], h)?;
        }
    }
    Ok(j)
}

fn delta_loci() -> [f64; 2] {
    [0.0, PI]
}

fn epsilon_loci(beta: f64) -> [f64; 2] {
    [(beta / 2.0).rem_euclid(TAU), (beta / 2.0 - PI).rem_euclid(TAU)]
}

fn clearance(beta: &[f64], gamma: &[Option<f64>]) -> f64 {
    beta.iter()
        .zip(gamma)
        .filter_map(|(b, g)| g.map(|g| circle_distance(g, &delta_loci()).min(circle_distance(g, &epsilon_loci(*b)))))
        .fold(f64::INFINITY, f64::min)
}

fn random_clear<R: Rng>(rng: &mut R, alpha: &AngleVector, margin: f64) -> Result<ActionAngleCoords> {
    loop {
        let c = random_regular(rng, alpha, margin)?;
        if clearance(&c.beta, &c.gamma) >= RANDOM_CLEARANCE {
            return Ok(c);
        }
    }
}

fn evaluate(cfg: &ExperimentConfig, alpha: &AngleVector, coords: &ActionAngleCoords, kind: &str) -> Result<SweepPoint> {
    let n = cfg.n;
    let m = n - 3;
    let h = cfg.tolerances.fd_step;
    let tol = cfg.tolerances.rank;
    let rep = chain_to_rep(&build_chain(alpha, coords)?)?;
    let b: Vec<CurveClass> = (1..=m).map(|i| CurveClass::b(n, i)).collect::<Result<_>>()?;
    let d: Vec<CurveClass> = (1..=m).map(|i| CurveClass::d(n, i)).collect::<Result<_>>()?;
    let e: Vec<CurveClass> = (1..=m).map(|i| CurveClass::e(n, i)).collect::<Result<_>>()?;

    let regular = coords.gamma.iter().all(Option::is_some);
    let mut point = SweepPoint {
        kind: kind.into(),
        gamma: coords.gamma.clone(),
        ratio_delta: None,
        ratio_prescribed: None,
        expected_singular_delta: false,
        pairings: None,
        consistent: true,
    };
    if regular {
        let gamma: Vec<f64> = coords.gamma.iter().map(|g| g.unwrap()).collect();
        let with_delta: Vec<CurveClass> = b.iter().chain(&d).cloned().collect();
        let prescribed: Vec<CurveClass> = b
            .iter()
            .cloned()
            .chain((0..m).map(|i| {
                let near_delta = circle_distance(gamma[i], &delta_loci());
                let near_eps = circle_distance(gamma[i], &epsilon_loci(coords.beta[i]));
                if near_delta < near_eps { e[i].clone() } else { d[i].clone() }
            }))
            .collect();
        let rd = rank_ratio(&bracket_jacobian(&rep, &with_delta, h)?);
        let rp = rank_ratio(&bracket_jacobian(&rep, &prescribed, h)?);
        point.expected_singular_delta = gamma.iter().any(|g| circle_distance(*g, &delta_loci()) < cfg.tolerances.window);
        point.consistent = ((rd < tol) == point.expected_singular_delta) && rp >= tol;
        point.ratio_delta = Some(rd);
        point.ratio_prescribed = Some(rp);
    }
    if m == 1 {
        let pair = |f: &CurveClass, g: &CurveClass| -> Result<f64> {
            Ok(rank_ratio(&bracket_jacobian(&rep, &[f.clone(), g.clone()], h)?))
        };
        let p = [pair(&b[0], &d[0])?, pair(&b[0], &e[0])?, pair(&d[0], &e[0])?];
        point.consistent &= p.iter().any(|r| *r >= tol);
        point.pairings = Some(p);
    }
    Ok(point)
}

pub fn transversality_sweep(cfg: &ExperimentConfig) -> Result<TransversalityReport> {
    transversality_run(cfg).map(|(r, _)| r)
}

pub(crate) fn transversality_run(cfg: &ExperimentConfig) -> Result<(TransversalityReport, Table)> {
    cfg.validate()?;
    let alpha = cfg.alpha_vector()?;
    let m = cfg.n - 3;
    let mut rng = cfg.rng(2);
    let mut points = Vec::new();

    // Planted: one γ_i exactly on each predicted locus, the rest well clear.
    for i in 0..m {
        for which in 0..4 {
            let mut c = random_clear(&mut rng, &alpha, cfg.margin)?;
            let beta = c.beta[i];
            let locus = [0.0, PI, beta / 2.0, beta / 2.0 - PI][which];
            c.gamma[i] = Some(locus.rem_euclid(TAU));
            points.push(evaluate(cfg, &alpha, &c, "planted")?);
        }
    }
    let planted = points.len();
    for _ in 0..cfg.samples {
        let c = random_clear(&mut rng, &alpha, cfg.margin)?;
        points.push(evaluate(cfg, &alpha, &c, "random")?);
    }
    if m == 1 {
        // The two fixed points of the b-flow complete the sphere.
        for mu in [[0.0, 0.5], [0.5, 0.0]] {
            let beta = beta_from_moments(&alpha, &mu)?;
            let c = ActionAngleCoords { beta, gamma: vec![None] };
            points.push(evaluate(cfg, &alpha, &c, "pole")?);
        }
    }

    let mut table = Table::new(&[
        "point",
        "kind",
        "min_delta_locus_distance",
        "ratio_delta",
        "ratio_prescribed",
        "expected_singular_delta",
        "consistent",
    ]);
    let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
    for (k, p) in points.iter().enumerate() {
        let dist = p
            .gamma
            .iter()
            .filter_map(|g| g.map(|g| circle_distance(g, &delta_loci())))
            .fold(f64::INFINITY, f64::min);
        table.push(vec![
            k.to_string(),
            p.kind.clone(),
            if dist.is_finite() { fmt_num(dist) } else { String::new() },
            opt(p.ratio_delta),
            opt(p.ratio_prescribed),
            p.expected_singular_delta.to_string(),
            p.consistent.to_string(),
        ]);
    }
    let failures: Vec<SweepPoint> = points.iter().filter(|p| !p.consistent).cloned().collect();
    let report = TransversalityReport {
        config: cfg.clone(),
        points: points.len(),
        planted,
        inconsistent: failures.len(),
        min_prescribed_ratio: points.iter().filter_map(|p| p.ratio_prescribed).fold(f64::INFINITY, f64::min),
        passed: failures.is_empty(),
        failures,
    };
    Ok((report, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_punctures_full_sweep() {
        let cfg = ExperimentConfig { samples: 30, ..ExperimentConfig::default() };
        let r = transversality_sweep(&cfg).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        assert_eq!(r.points, 4 + 30 + 2);
    }

    #[test]
    fn pi_is_singular_for_delta_only() {
        let cfg = ExperimentConfig { n: 5, samples: 10, seed: 4, ..ExperimentConfig::default() };
        let alpha = cfg.alpha_vector().unwrap();
        let mut c = random_clear(&mut cfg.rng(9), &alpha, 0.05).unwrap();
        c.gamma[1] = Some(PI);
        let p = evaluate(&cfg, &alpha, &c, "planted").unwrap();
        assert!(p.ratio_delta.unwrap() < 1e-6 && p.ratio_prescribed.unwrap() > 1e-6 && p.consistent);
        let r = transversality_sweep(&cfg).unwrap();
        assert!(r.passed, "{:?}", r.failures);
    }
}
