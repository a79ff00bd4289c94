//! Equidistribution probe for random twist walks.
//!
//! Visited points are pushed to the unit cube by the Rosenblatt transform of
//! the uniform measure on the moment simplex (in `2μ`) times the uniform
//! measure on the angle torus (in `γ/2π`): the Liouville measure in
//! action-angle coordinates becomes Lebesgue measure. Discrepancy is the
//! anchored star discrepancy restricted to grid-aligned boxes.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, moment_map, ActionAngleCoords, AngleVector};
use crate::dynamics::orbit::{BreadthFirst, OrbitConfig, OrbitStrategy, OrbitVerdict, RandomWalk};
use crate::dynamics::rational::{rational_angle, RationalAngleReport, DEFAULT_Q_MAX, DEFAULT_TOL};
use crate::error::Result;
use crate::rep::{angle_function, chain_to_rep};

use super::{fmt_num, ExperimentConfig, SampleSink, Table};

/// BFS budget of the finiteness pre-check.
pub const FINITE_CHECK_BUDGET: usize = 2000;
/// Largest grid used for the discrepancy statistic: `G^D ≤ 65536`, `G ≤ 64`.
pub const MAX_GRID_CELLS: usize = 65_536;
pub const MAX_GRID_SIDE: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub samples: usize,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub config: ExperimentConfig,
    /// `"finite"`, `"trend-decreasing"` or `"stalled"`.
    pub verdict: String,
    pub finite_size: Option<usize>,
    /// Every generator angle at the start is a detected rational rotation.
    pub possibly_finite_orbit: bool,
    pub generator_angles: Vec<RationalAngleReport>,
    pub dimension: usize,
    pub bins_per_axis: usize,
    pub bin_counts: Vec<u64>,
    pub cells_visited: usize,
    pub sample_count: usize,
    pub grid_side: usize,
    pub checkpoints: Vec<Checkpoint>,
    pub non_increasing: bool,
    pub decreased: bool,
    pub notes: Vec<String>,
}

/// Map to the unit cube: Rosenblatt transform of `2μ_0..2μ_{m−1}` under the
/// flat Dirichlet law, followed by `γ_i/2π`.
pub fn to_unit_cube(alpha: &AngleVector, coords: &ActionAngleCoords) -> Vec<f64> {
    let mu = moment_map(alpha, &coords.beta).mu;
    let d = coords.beta.len();
    let mut out = Vec::with_capacity(2 * d);
    let mut rest = 1.0;
    for (k, m) in mu.iter().take(d).enumerate() {
        let x = (2.0 * m).max(0.0);
        let t = if rest > 0.0 { (x / rest).min(1.0) } else { 0.0 };
        out.push(1.0 - (1.0 - t).powi((d - k) as i32));
        rest -= x;
    }
    out.extend(coords.gamma.iter().map(|g| g.unwrap_or(0.0).rem_euclid(TAU) / TAU));
    out
}

pub fn grid_side(dim: usize) -> usize {
    let mut g = MAX_GRID_SIDE;
    while g > 1 && g.pow(dim as u32) > MAX_GRID_CELLS {
        g -= 1;
    }
    g
}

fn bins_for(n: usize) -> usize {
    match n {
        ..=5 => 8,
        6 => 4,
        _ => 2,
    }
}

fn cell_index(u: &[f64], side: usize) -> usize {
    u.iter().fold(0, |acc, x| acc * side + ((x * side as f64) as usize).min(side - 1))
}

/// `max_g |#{u ∈ ∏[0, g_k/G)}/N − ∏ g_k/G|` over grid corners `g ∈ {1..G}^D`.
pub fn grid_star_discrepancy(points: &[Vec<f64>], side: usize) -> f64 {
    let Some(dim) = points.first().map(Vec::len) else { return 0.0 };
    let cells = side.pow(dim as u32);
    let mut h = vec![0f64; cells];
    for p in points {
        h[cell_index(p, side)] += 1.0;
    }
    // Prefix sums along each axis turn cell counts into anchored box counts.
    for axis in 0..dim {
        let stride = side.pow((dim - 1 - axis) as u32);
        for idx in 0..cells {
            if !(idx / stride).is_multiple_of(side) {
                h[idx] += h[idx - stride];
            }
        }
    }
    let n = points.len() as f64;
    let mut worst: f64 = 0.0;
    for (idx, c) in h.iter().enumerate() {
        let mut vol = 1.0;
        let mut rest = idx;
        for _ in 0..dim {
            vol *= ((rest % side) + 1) as f64 / side as f64;
            rest /= side;
        }
        worst = worst.max((c / n - vol).abs());
    }
    worst
}

pub fn density_experiment(cfg: &ExperimentConfig) -> Result<DensityReport> {
    density_run(cfg, &mut |_| Ok(())).map(|(r, _)| r)
}

pub(crate) fn density_run(cfg: &ExperimentConfig, sink: &mut SampleSink<'_>) -> Result<(DensityReport, Table)> {
    cfg.validate()?;
    let alpha = cfg.alpha_vector()?;
    let start = cfg.start_coords(&alpha)?;
    let gens = cfg.generator_curves()?;
    let rep = chain_to_rep(&build_chain(&alpha, &start)?)?;
    let generator_angles: Vec<RationalAngleReport> = gens
        .iter()
        .map(|g| angle_function(&rep, g).map(|a| rational_angle(a, DEFAULT_Q_MAX, DEFAULT_TOL)))
        .collect::<Result<_>>()?;
    let possibly_finite_orbit = generator_angles.iter().all(|r| r.matched.is_some());

    let dim = 2 * (cfg.n - 3);
    let bins = bins_for(cfg.n);
    let side = grid_side(dim);
    let mut notes = vec![
        "discrepancy: anchored boxes with corners on a G^D grid in Rosenblatt coordinates; G^D <= 65536".into(),
        "verdicts are statistical trends with engineering thresholds, not density proofs".into(),
    ];
    let orbit_cfg = OrbitConfig {
        max_steps: cfg.steps,
        quantum: cfg.quantum,
        seed: cfg.seed.wrapping_add(1),
        ..OrbitConfig::default()
    };
    let mut table = Table::new(&["samples", "discrepancy"]);

    let bfs_cfg = OrbitConfig { max_steps: FINITE_CHECK_BUDGET, ..orbit_cfg.clone() };
    let finite = match BreadthFirst.explore(&rep, &gens, &bfs_cfg, &mut |_| Ok(()))? {
        OrbitVerdict::Finite(k) => Some(k),
        OrbitVerdict::BudgetExceeded => None,
    };
    if let Some(k) = finite {
        notes.push(format!("orbit closed after {k} points at fingerprint resolution; no density claim"));
        let report = DensityReport {
            config: cfg.clone(),
            verdict: "finite".into(),
            finite_size: Some(k),
            possibly_finite_orbit,
            generator_angles,
            dimension: dim,
            bins_per_axis: bins,
            bin_counts: vec![],
            cells_visited: 0,
            sample_count: 0,
            grid_side: side,
            checkpoints: vec![],
            non_increasing: true,
            decreased: false,
            notes,
        };
        return Ok((report, table));
    }

    let mut points = Vec::with_capacity(cfg.steps);
    RandomWalk.explore(&rep, &gens, &orbit_cfg, &mut |r| {
        points.push(to_unit_cube(&alpha, &r.coords));
        sink(r)
    })?;

    let mut bin_counts = vec![0u64; bins.pow(dim as u32)];
    for p in &points {
        bin_counts[cell_index(p, bins)] += 1;
    }
    let mut marks: Vec<usize> = cfg.checkpoints.iter().copied().filter(|c| *c <= points.len()).collect();
    marks.sort_unstable();
    marks.dedup();
    let checkpoints: Vec<Checkpoint> = marks
        .iter()
        .map(|&k| Checkpoint {
            samples: k,
            discrepancy: grid_star_discrepancy(&points[..k], side),
        })
        .collect();
    for c in &checkpoints {
        table.push(vec![c.samples.to_string(), fmt_num(c.discrepancy)]);
    }
    let non_increasing = checkpoints.windows(2).all(|w| w[1].discrepancy <= w[0].discrepancy);
    let decreased = match (checkpoints.first(), checkpoints.last()) {
        (Some(a), Some(b)) if checkpoints.len() > 1 => b.discrepancy < a.discrepancy,
        _ => false,
    };
    if possibly_finite_orbit {
        notes.push("possibly finite orbit: every generator angle is a detected rational rotation".into());
    }
    let report = DensityReport {
        config: cfg.clone(),
        verdict: if decreased { "trend-decreasing" } else { "stalled" }.into(),
        finite_size: None,
        possibly_finite_orbit,
        generator_angles,
        dimension: dim,
        bins_per_axis: bins,
        cells_visited: bin_counts.iter().filter(|c| **c > 0).count(),
        bin_counts,
        sample_count: points.len(),
        grid_side: side,
        checkpoints,
        non_increasing,
        decreased,
        notes,
    };
    Ok((report, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::StartSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct count over all grid corners.
    fn brute_discrepancy(points: &[Vec<f64>], side: usize) -> f64 {
        let dim = points[0].len();
        let mut worst: f64 = 0.0;
        for idx in 0..side.pow(dim as u32) {
            let corner: Vec<f64> = (0..dim)
                .map(|a| ((idx / side.pow(a as u32)) % side + 1) as f64 / side as f64)
                .collect();
            let inside = points.iter().filter(|p| p.iter().zip(&corner).all(|(x, c)| x < c)).count();
            let vol: f64 = corner.iter().product();
            worst = worst.max((inside as f64 / points.len() as f64 - vol).abs());
        }
        worst
    }

    #[test]
    fn discrepancy_matches_direct_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for dim in [1, 2, 3] {
            let pts: Vec<Vec<f64>> = (0..300).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
            let side = 7;
            assert!((grid_star_discrepancy(&pts, side) - brute_discrepancy(&pts, side)).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_sides() {
        assert_eq!(grid_side(2), 64);
        assert_eq!(grid_side(4), 16);
        assert_eq!(grid_side(8), 4);
    }

    #[test]
    fn rosenblatt_is_uniform_for_uniform_moments() {
        // Uniform moment samples should give a small discrepancy after the transform.
        let a = AngleVector::uniform(6, 1.9 * std::f64::consts::PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<Vec<f64>> = (0..20_000)
            .map(|_| {
                let c = crate::sampling::random_regular(&mut rng, &a, 0.0).unwrap();
                to_unit_cube(&a, &c)[..3].to_vec()
            })
            .collect();
        assert!(grid_star_discrepancy(&pts, 16) < 0.02);
    }

    #[test]
    fn single_curve_walk_stalls_and_full_walk_spreads() {
        let base = ExperimentConfig {
            steps: 10_000,
            checkpoints: vec![1_000, 10_000],
            start: StartSpec::Coords(ActionAngleCoords::regular(vec![2.0f64.sqrt() * 2.0], vec![0.3])),
            ..ExperimentConfig::default()
        };
        let one = density_experiment(&ExperimentConfig { generators: Some(vec!["b1".into()]), ..base.clone() }).unwrap();
        assert_eq!(one.verdict, "stalled");
        assert!(one.checkpoints.iter().all(|c| c.discrepancy > 0.3));
        let all = density_experiment(&base).unwrap();
        assert_eq!(all.verdict, "trend-decreasing");
        assert_eq!(all.bin_counts.iter().sum::<u64>(), 10_000);
        assert_eq!(density_experiment(&base).unwrap(), all);
    }

    #[test]
    fn fixed_start_is_finite() {
        let a = AngleVector::uniform(4, 1.9 * std::f64::consts::PI).unwrap();
        let beta = crate::chain::beta_from_moments(&a, &[0.0, 0.5]).unwrap();
        let cfg = ExperimentConfig {
            start: StartSpec::Coords(ActionAngleCoords { beta, gamma: vec![None] }),
            generators: Some(vec!["b1".into()]),
            ..ExperimentConfig::default()
        };
        let r = density_experiment(&cfg).unwrap();
        assert_eq!((r.verdict.as_str(), r.finite_size), ("finite", Some(1)));
    }
}
