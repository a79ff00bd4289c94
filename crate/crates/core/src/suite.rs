//! The numerical acceptance checks, one function per criterion.
//!
//! Each check returns a [`CheckResult`] with the measured residual and the
//! tolerance it was held to. [`run_suite`] runs them in order; `filter_n`
//! restricts checks that sweep over several sphere sizes.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, extract_coords, moment_map, ActionAngleCoords, AngleVector};
use crate::dynamics::flow::{dehn_twist, flow, undegenerate_twist};
use crate::dynamics::poisson::{bracket_beta_delta, bracket_beta_epsilon, gamma_rate, poisson_fd};
use crate::dynamics::rational::{rational_angle, DEFAULT_Q_MAX, DEFAULT_TOL};
use crate::error::Result;
use crate::experiments::{
    density_experiment, fiber_multiplicity_scan, transversality_sweep, zero_locus_scan, ExperimentConfig,
    StartSpec,
};
use crate::hyperbolic::circular_diff;
use crate::rep::{
    angle_function, area_residual, chain_to_rep, conjugacy_gap, fingerprint, fingerprint_curves, rep_moments,
    Representation,
};
use crate::sampling::{degenerate_point, random_alpha, random_regular, random_with_zero_moments};
use crate::surface::CurveClass;

pub const QUANTUM: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// `PASS  3 goldman-identity  residual=1.2e-13  tol=1e-6  (detail)`
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        format!(
            "{tag} {:>2} {:<24} residual={:<10.3e} tol={:<8.1e} {}",
            self.id, self.name, self.residual, self.tolerance, self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Only sphere sizes in this list are exercised; `None` keeps every size.
    pub filter_n: Option<Vec<usize>>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 2024, filter_n: None }
    }
}

impl SuiteOptions {
    fn sizes(&self, all: &[usize]) -> Vec<usize> {
        all.iter()
            .copied()
            .filter(|n| self.filter_n.as_ref().is_none_or(|f| f.contains(n)))
            .collect()
    }

    fn rng(&self, id: usize) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(id as u64);
        r
    }
}

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub run: fn(&SuiteOptions) -> Result<CheckResult>,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "chain-round-trip", run: chain_round_trip },
        Criterion { id: 2, name: "representation", run: representation_consistency },
        Criterion { id: 3, name: "goldman-identity", run: goldman_identity },
        Criterion { id: 4, name: "twist-coordinate-law", run: twist_coordinate_law },
        Criterion { id: 5, name: "flow-periodicity", run: flow_periodicity },
        Criterion { id: 6, name: "closed-form-bracket", run: closed_form_bracket },
        Criterion { id: 7, name: "zero-locus", run: zero_locus },
        Criterion { id: 8, name: "fiber-bounds", run: fiber_bounds },
        Criterion { id: 9, name: "transversality", run: transversality },
        Criterion { id: 10, name: "undegenerating-twist", run: undegenerating_twist },
        Criterion { id: 11, name: "rational-detection", run: rational_detection },
        Criterion { id: 12, name: "density-probe", run: density_probe },
    ]
}

/// Runs every criterion; a criterion that errors counts as failed.
pub fn run_suite(opts: &SuiteOptions, mut report: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    criteria()
        .into_iter()
        .map(|c| {
            let r = (c.run)(opts).unwrap_or_else(|e| CheckResult {
                id: c.id,
                name: c.name.into(),
                status: Status::Fail,
                residual: f64::NAN,
                tolerance: f64::NAN,
                detail: format!("error: {e}"),
            });
            report(&r);
            r
        })
        .collect()
}

fn result(id: usize, name: &str, ok: bool, residual: f64, tolerance: f64, detail: String) -> Result<CheckResult> {
    Ok(CheckResult {
        id,
        name: name.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        residual,
        tolerance,
        detail,
    })
}

fn skipped(id: usize, name: &str, why: &str) -> Result<CheckResult> {
    Ok(CheckResult {
        id,
        name: name.into(),
        status: Status::Skip,
        residual: 0.0,
        tolerance: 0.0,
        detail: why.into(),
    })
}

/// `count` random regular points cycling through `sizes`.
fn regular_points(rng: &mut ChaCha8Rng, sizes: &[usize], count: usize) -> Result<Vec<(AngleVector, ActionAngleCoords)>> {
    (0..count)
        .map(|k| {
            let n = sizes[k % sizes.len()];
            let a = random_alpha(rng, n)?;
            let margin = 0.1 / (n - 2) as f64;
            let c = random_regular(rng, &a, margin)?;
            Ok((a, c))
        })
        .collect()
}

fn rep_of(a: &AngleVector, c: &ActionAngleCoords) -> Result<Representation> {
    chain_to_rep(&build_chain(a, c)?)
}

fn coord_error(x: &ActionAngleCoords, y: &ActionAngleCoords) -> f64 {
    let b = x.beta.iter().zip(&y.beta).map(|(p, q)| (p - q).abs());
    let g = x.gamma.iter().zip(&y.gamma).map(|(p, q)| match (p, q) {
        (Some(p), Some(q)) => circular_diff(*p, *q).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    });
    b.chain(g).fold(0.0, f64::max)
}

pub fn chain_round_trip(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (1, "chain-round-trip");
    let sizes = opts.sizes(&[4, 5, 6, 7, 8]);
    if sizes.is_empty() {
        return skipped(id, name, "no size in 4..=8 selected");
    }
    let mut rng = opts.rng(id);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let n = sizes[k % sizes.len()];
        let a = random_alpha(&mut rng, n)?;
        let c = random_regular(&mut rng, &a, 0.0)?;
        worst = worst.max(coord_error(&extract_coords(&build_chain(&a, &c)?)?, &c));
    }
    let secs = start.elapsed().as_secs_f64();
    result(id, name, worst < 1e-9 && secs < 10.0, worst, 1e-9, format!("1000 points, n in {sizes:?}, {secs:.2}s (limit 10s)"))
}

pub fn representation_consistency(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (2, "representation");
    let sizes = opts.sizes(&[4, 5, 6, 7, 8]);
    if sizes.is_empty() {
        return skipped(id, name, "no size in 4..=8 selected");
    }
    let mut rng = opts.rng(id);
    let (mut product, mut angles, mut areas, mut sums) = (0f64, 0f64, 0f64, 0f64);
    for (a, c) in regular_points(&mut rng, &sizes, 500)? {
        let n = a.n();
        let chain = build_chain(&a, &c)?;
        let rep = chain_to_rep(&chain)?;
        product = product.max(rep.product_residual());
        for (k, g) in rep.gens().iter().enumerate() {
            let (theta, _) = g.elliptic().unwrap_or((f64::INFINITY, crate::hyperbolic::HPoint::I));
            angles = angles.max((theta - a.get(k + 1)).abs());
        }
        for i in 1..=n - 3 {
            angles = angles.max((angle_function(&rep, &CurveClass::b(n, i)?)? - c.beta[i - 1]).abs());
        }
        let mu = moment_map(&a, &c.beta);
        areas = areas.max(area_residual(&chain, &mu.mu));
        sums = sums.max((mu.sum() - 0.5).abs());
    }
    let worst = product.max(angles).max(areas);
    result(
        id,
        name,
        worst < 1e-9 && sums < 1e-12,
        worst,
        1e-9,
        format!("product {product:.1e}, angles {angles:.1e}, areas {areas:.1e}, sum(mu)-1/2 {sums:.1e} (tol 1e-12)"),
    )
}

fn twist_curves(n: usize) -> Result<Vec<CurveClass>> {
    let mut v = fingerprint_curves(n)?;
    for j in 1..n {
        v.push(CurveClass::pair(n, j)?);
    }
    Ok(v)
}

pub fn goldman_identity(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (3, "goldman-identity");
    let sizes = opts.sizes(&[4, 5, 6]);
    if sizes.is_empty() {
        return skipped(id, name, "no size in 4..=6 selected");
    }
    let mut rng = opts.rng(id);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for (a, c) in regular_points(&mut rng, &sizes, 100)? {
        let rep = rep_of(&a, &c)?;
        let keys = fingerprint_curves(a.n())?;
        for curve in twist_curves(a.n())? {
            let theta = angle_function(&rep, &curve)?;
            let t = fingerprint(&dehn_twist(&rep, &curve)?, &keys, QUANTUM)?;
            let f = fingerprint(&flow(&rep, &curve, theta / 2.0)?, &keys, QUANTUM)?;
            worst = worst.max(t.max_diff(&f));
            checks += 1;
        }
    }
    result(id, name, worst <= QUANTUM, worst, QUANTUM, format!("{checks} twist/flow pairs over b, d, e, pair curves, n in {sizes:?}"))
}

/// Whether `τ_{b_i}` fixes a point with moment zeros `zeros` (`m = n − 2` moments).
fn fixed_by_b(zeros: &[usize], m: usize, i: usize) -> bool {
    (0..i).all(|k| zeros.contains(&k)) || (i..m).all(|k| zeros.contains(&k))
}

pub fn twist_coordinate_law(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (4, "twist-coordinate-law");
    let sizes = opts.sizes(&[4, 5, 6, 7, 8]);
    if sizes.is_empty() {
        return skipped(id, name, "no size in 4..=8 selected");
    }
    let mut rng = opts.rng(id);
    let mut law: f64 = 0.0;
    for (a, c) in regular_points(&mut rng, &sizes, 100)? {
        let n = a.n();
        let rep = rep_of(&a, &c)?;
        for i in 1..=n - 3 {
            let after = extract_coords(&crate::rep::rep_to_chain(
                &dehn_twist(&rep, &CurveClass::b(n, i)?)?,
                &crate::surface::PantsDecomposition::standard(n)?,
            )?)?;
            let mut expected = c.clone();
            expected.gamma[i - 1] = Some(c.gamma[i - 1].unwrap() + c.beta[i - 1]);
            law = law.max(coord_error(&after, &expected));
        }
    }
    // Fixed points: every proper zero pattern of the moments, every b_i.
    let (mut fixed_gap, mut moved_gap, mut cases) = (0f64, f64::INFINITY, 0);
    for n in opts.sizes(&[5, 6]) {
        let m = n - 2;
        let a = random_alpha(&mut rng, n)?;
        for mask in 1..(1u32 << m) - 1 {
            let zeros: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
            let rep = rep_of(&a, &random_with_zero_moments(&mut rng, &a, &zeros, 0.02)?)?;
            for i in 1..=n - 3 {
                let gap = conjugacy_gap(&rep, &dehn_twist(&rep, &CurveClass::b(n, i)?)?)?;
                if fixed_by_b(&zeros, m, i) {
                    fixed_gap = fixed_gap.max(gap);
                } else {
                    moved_gap = moved_gap.min(gap);
                }
                cases += 1;
            }
        }
    }
    let ok = law < 1e-9 && fixed_gap < 1e-9 && moved_gap > 1e-6;
    result(
        id,
        name,
        ok,
        law.max(fixed_gap),
        1e-9,
        format!("gamma law {law:.1e}; {cases} boundary cases: fixed gap {fixed_gap:.1e}, smallest moved gap {moved_gap:.1e} (> 1e-6)"),
    )
}

pub fn flow_periodicity(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (5, "flow-periodicity");
    let sizes = opts.sizes(&[4, 5, 6]);
    if sizes.is_empty() {
        return skipped(id, name, "no size in 4..=6 selected");
    }
    let mut rng = opts.rng(id);
    let mut worst: f64 = 0.0;
    for (a, c) in regular_points(&mut rng, &sizes, 100)? {
        let rep = rep_of(&a, &c)?;
        let keys = fingerprint_curves(a.n())?;
        let f0 = fingerprint(&rep, &keys, QUANTUM)?;
        for curve in twist_curves(a.n())? {
            worst = worst.max(fingerprint(&flow(&rep, &curve, PI)?, &keys, QUANTUM)?.max_diff(&f0));
        }
    }
    result(id, name, worst <= QUANTUM, worst, QUANTUM, format!("100 points, all twistable curves, n in {sizes:?}"))
}

pub fn closed_form_bracket(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (6, "closed-form-bracket");
    if opts.sizes(&[4]).is_empty() {
        return skipped(id, name, "runs at n = 4");
    }
    let h = 1e-5;
    let tol = f64::max(1e-5, 10.0 * h * h);
    let mut rng = opts.rng(id);
    let (b, d, e) = (CurveClass::b(4, 1)?, CurveClass::d(4, 1)?, CurveClass::e(4, 1)?);
    let (mut worst, mut rate) = (0f64, 0f64);
    let mut anti_ok = true;
    let mut anti_const: f64 = 0.0;
    for (a, c) in regular_points(&mut rng, &[4], 100)? {
        let chain = build_chain(&a, &c)?;
        let rep = chain_to_rep(&chain)?;
        let dgamma = gamma_rate(&rep, 1, h)?;
        rate = rate.max((dgamma - 2.0).abs());
        worst = worst.max((poisson_fd(&rep, &b, &d, h)? - bracket_beta_delta(&chain, 1, dgamma)?.value).abs());
        worst = worst.max((poisson_fd(&rep, &b, &e, h)? - bracket_beta_epsilon(&chain, 1, dgamma)?.value).abs());
        // Antisymmetry defect r(h) ≈ K h²: estimate K at h = 1e-3 and hold smaller steps to it.
        let r = |h: f64| -> Result<f64> { Ok((poisson_fd(&rep, &b, &d, h)? + poisson_fd(&rep, &d, &b, h)?).abs()) };
        let (r3, r4, r5) = (r(1e-3)?, r(1e-4)?, r(1e-5)?);
        let k = r3 / 1e-6;
        anti_const = anti_const.max(k);
        anti_ok &= r4 <= 2.0 * k * 1e-8 + 1e-9 && r5 <= 2.0 * k * 1e-10 + 1e-9;
    }
    result(
        id,
        name,
        worst < tol && anti_ok && rate < 1e-6,
        worst,
        tol,
        format!("100 points; |dgamma(X_b) - 2| <= {rate:.1e}; antisymmetry O(h^2) at h in {{1e-3,1e-4,1e-5}}: {anti_ok} (K <= {anti_const:.2e})"),
    )
}

pub fn zero_locus(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (7, "zero-locus");
    let sizes = opts.sizes(&[4, 5, 6]);
    if sizes.is_empty() {
        return skipped(id, name, "no size in 4..=6 selected");
    }
    let (mut bad, mut both, mut total, mut windows) = (0, 0, 0, 0);
    for n in &sizes {
        let cfg = ExperimentConfig { n: *n, samples: 400, seed: opts.seed, ..ExperimentConfig::default() };
        let r = zero_locus_scan(&cfg)?;
        bad += r.inconsistent;
        both += r.both_small;
        total += r.samples;
        windows += r.in_delta_window + r.in_epsilon_window;
    }
    result(
        id,
        name,
        bad == 0 && both == 0,
        bad as f64,
        0.0,
        format!("{total} samples ({windows} in windows), {bad} inconsistent, {both} with both brackets small, n in {sizes:?}"),
    )
}

pub fn fiber_bounds(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (8, "fiber-bounds");
    let mut runs = Vec::new();
    if !opts.sizes(&[4]).is_empty() {
        for s in 0..3 {
            runs.push(ExperimentConfig { n: 4, samples: 10_000, seed: opts.seed + s, ..ExperimentConfig::default() });
        }
    }
    if !opts.sizes(&[5]).is_empty() {
        for s in 0..2 {
            runs.push(ExperimentConfig { n: 5, samples: 4_000, seed: opts.seed + s, ..ExperimentConfig::default() });
        }
    }
    if runs.is_empty() {
        return skipped(id, name, "runs at n = 4, 5");
    }
    let (mut violations, mut worst_ratio) = (0, 0f64);
    let mut bounds = Vec::new();
    for cfg in &runs {
        let r = fiber_multiplicity_scan(cfg)?;
        violations += r.violations;
        let b = r.preimage_bound_delta.max(r.preimage_bound_epsilon);
        worst_ratio = worst_ratio.max(b as f64 / r.theoretical_bound as f64);
        bounds.push(format!("n={}:{}/{}", cfg.n, b, r.theoretical_bound));
    }
    result(id, name, violations == 0 && worst_ratio <= 1.0, violations as f64, 0.0, format!("preimage bounds {}", bounds.join(" ")))
}

pub fn transversality(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (9, "transversality");
    let plan: Vec<(usize, usize)> = [(4, 200), (5, 100), (6, 40)]
        .into_iter()
        .filter(|(n, _)| !opts.sizes(&[*n]).is_empty())
        .collect();
    if plan.is_empty() {
        return skipped(id, name, "runs at n = 4, 5, 6");
    }
    let (mut bad, mut points, mut min_ratio) = (0, 0, f64::INFINITY);
    for (n, samples) in plan {
        let cfg = ExperimentConfig { n, samples, seed: opts.seed, ..ExperimentConfig::default() };
        let r = transversality_sweep(&cfg)?;
        bad += r.inconsistent;
        points += r.points;
        min_ratio = min_ratio.min(r.min_prescribed_ratio);
    }
    result(
        id,
        name,
        bad == 0,
        bad as f64,
        0.0,
        format!("{points} points (planted on loci, random, poles); {bad} inconsistent; min prescribed rank ratio {min_ratio:.2e}"),
    )
}

pub fn undegenerating_twist(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (10, "undegenerating-twist");
    let combos: Vec<(usize, usize)> = opts
        .sizes(&[5, 6, 7, 8])
        .into_iter()
        .flat_map(|n| (0..=n - 4).map(move |ip| (n, ip)))
        .collect();
    if combos.is_empty() {
        return skipped(id, name, "runs at n = 5..=8");
    }
    let mut rng = opts.rng(id);
    let (mut failures, mut invariance, mut smallest_open) = (0, 0f64, f64::INFINITY);
    let mut closed_residual: f64 = 0.0;
    for k in 0..100 {
        let (n, ip) = combos[k % combos.len()];
        let exceptional = k % 2 == 1;
        let (a, c) = degenerate_point(&mut rng, n, ip, exceptional, 0.02)?;
        let rep = rep_of(&a, &c)?;
        let (out, o) = undegenerate_twist(&rep, ip)?;
        let lambda = a.lambda();
        let after = rep_moments(&out)?;
        for j in (0..n - 2).filter(|j| *j != ip && *j != ip + 1) {
            invariance = invariance.max((after[j] - o.mu_before[j]).abs());
        }
        smallest_open = smallest_open.min(lambda * after[ip]);
        // The collapsed triangle always opens; the next one closes exactly in the exceptional case.
        let next_closed = (lambda * after[ip + 1]).abs() < 1e-9;
        if exceptional {
            closed_residual = closed_residual.max((lambda * after[ip + 1]).abs());
        }
        let ok = o.exceptional == exceptional && lambda * after[ip] > 1e-6 && next_closed == exceptional;
        failures += usize::from(!ok);
    }
    result(
        id,
        name,
        failures == 0 && invariance < 1e-9,
        invariance.max(closed_residual),
        1e-9,
        format!(
            "100 points (50 generic, 50 exceptional) over {} (n, i') pairs; {failures} failures; min opened area {smallest_open:.2e}; exceptional next-triangle area <= {closed_residual:.1e}",
            combos.len()
        ),
    )
}

pub fn rational_detection(_: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (11, "rational-detection");
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let (mut planted, mut missed, mut worst) = (0, 0, 0f64);
    for q in 1..=100u64 {
        for p in 1..q {
            if gcd(p, q) != 1 {
                continue;
            }
            let r = rational_angle(TAU * p as f64 / q as f64, DEFAULT_Q_MAX, DEFAULT_TOL);
            planted += 1;
            worst = worst.max(r.error);
            missed += usize::from(r.matched != Some((p, q)));
        }
    }
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut false_hits = 0;
    for k in 1..=5u32 {
        let x = (k as f64 * phi).fract();
        false_hits += usize::from(rational_angle(TAU * x, DEFAULT_Q_MAX, DEFAULT_TOL).matched.is_some());
    }
    result(
        id,
        name,
        missed == 0 && false_hits == 0,
        worst,
        DEFAULT_TOL,
        format!("{planted} planted p/q (q <= 100), {missed} missed; golden multiples k*phi (k = 1..5): {false_hits} false matches"),
    )
}

pub fn density_probe(opts: &SuiteOptions) -> Result<CheckResult> {
    let (id, name) = (12, "density-probe");
    if opts.sizes(&[4]).is_empty() {
        return skipped(id, name, "runs at n = 4");
    }
    let start = Instant::now();
    let cfg = ExperimentConfig {
        n: 4,
        alpha: Some(vec![1.9 * PI; 4]),
        start: StartSpec::Named("random".into()),
        steps: 100_000,
        checkpoints: vec![1_000, 10_000, 100_000],
        seed: opts.seed,
        ..ExperimentConfig::default()
    };
    let r = density_experiment(&cfg)?;
    let secs = start.elapsed().as_secs_f64();
    let d = |k: usize| r.checkpoints.iter().find(|c| c.samples == k).map(|c| c.discrepancy).unwrap_or(f64::NAN);
    let (d3, d5) = (d(1_000), d(100_000));
    let cells = r.bin_counts.len();
    let ok = d5 < d3 && r.cells_visited == cells && cells == 64 && secs < 60.0;
    result(
        id,
        name,
        ok,
        d5,
        d3,
        format!(
            "verdict {}; D(1e3) {d3:.4}, D(1e4) {:.4}, D(1e5) {d5:.4}; {}/{} cells visited; {secs:.1}s (limit 60s)",
            r.verdict,
            d(10_000),
            r.cells_visited,
            cells
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_pattern_rule() {
        // m = 4 moments, b_2: fixed iff μ_0 = μ_1 = 0 or μ_2 = μ_3 = 0.
        assert!(fixed_by_b(&[0, 1], 4, 2));
        assert!(fixed_by_b(&[2, 3], 4, 2));
        assert!(!fixed_by_b(&[1, 2], 4, 2));
        assert!(!fixed_by_b(&[], 4, 2));
    }

    #[test]
    fn lines_have_a_fixed_layout() {
        let r = CheckResult {
            id: 3,
            name: "goldman-identity".into(),
            status: Status::Pass,
            residual: 1.5e-13,
            tolerance: 1e-6,
            detail: "x".into(),
        };
        let line = r.line();
        assert!(line.starts_with("PASS  3 goldman-identity "), "{line}");
        assert!(line.contains("residual=1.500e-13") && line.ends_with(" x"));
    }

    #[test]
    fn filters_restrict_sizes() {
        let opts = SuiteOptions { seed: 0, filter_n: Some(vec![5]) };
        assert_eq!(opts.sizes(&[4, 5, 6]), vec![5]);
        assert_eq!(closed_form_bracket(&opts).unwrap().status, Status::Skip);
        assert!(rational_detection(&opts).unwrap().passed());
    }
}
