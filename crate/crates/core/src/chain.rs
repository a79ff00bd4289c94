//! Triangle chains and action-angle coordinates.
//!
//! A chain on `n` punctures has `n − 2` clockwise triangles. Writing the
//! shared vertices as `S_0 = C_1, S_k = B_k (1 ≤ k ≤ n−3), S_{n−2} = C_n`,
//! triangle `k` is `(S_k, C_{k+2}, S_{k+1})` with interior angles
//! `β̃_k/2, π − α_{k+2}/2, π − β̃_{k+1}/2`, where `β̃ = (2π − α_1, β_1, …, β_{n−3}, α_n)`.
//! Its area is `λ·μ_k`.
//!
//! `γ_k` is the clockwise angle at `B_k` from the ray toward `C_{k+1}` to the
//! ray toward `C_{k+2}`; with this sense the flow of `β_k` advances `γ_k` at rate 2.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{
    direction, interior_angle, point_at, side_from_angles, triangle_area, wrap_angle, HPoint,
    EPS_ANGLE,
};
use crate::surface::SphereTopology;

pub const EPS_AREA: f64 = 1e-9;

/// Peripheral rotation angles satisfying `Σα > 2π(n−1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct AngleVector {
    alpha: Vec<f64>,
    lambda: f64,
}

impl AngleVector {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        SphereTopology::new(alpha.len())?;
        if let Some((k, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a > 0.0 && **a < TAU))
        {
            return Err(Error::InvalidAlpha(format!("alpha_{} = {a} is not in (0, 2π)", k + 1)));
        }
        let n = alpha.len() as f64;
        let lambda = alpha.iter().sum::<f64>() - TAU * (n - 1.0);
        if lambda <= 0.0 {
            return Err(Error::InvalidAlpha(format!(
                "angle sum falls short of 2π(n−1) by {}",
                -lambda
            )));
        }
        Ok(AngleVector { alpha, lambda })
    }

    /// All angles equal to `a`.
    pub fn uniform(n: usize, a: f64) -> Result<Self> {
        AngleVector::new(vec![a; n])
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.alpha
    }

    /// `α_p` with 1-based `p`.
    pub fn get(&self, p: usize) -> f64 {
        self.alpha[p - 1]
    }
}

impl TryFrom<Vec<f64>> for AngleVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        AngleVector::new(v)
    }
}

impl From<AngleVector> for Vec<f64> {
    fn from(a: AngleVector) -> Vec<f64> {
        a.alpha
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionAngleCoords {
    pub beta: Vec<f64>,
    pub gamma: Vec<Option<f64>>,
}

impl ActionAngleCoords {
    pub fn regular(beta: Vec<f64>, gamma: Vec<f64>) -> Self {
        ActionAngleCoords {
            beta,
            gamma: gamma.into_iter().map(Some).collect(),
        }
    }

    /// Drops the coordinates beyond the first `nbar − 3`.
    pub fn truncate(&self, nbar: usize) -> Self {
        let m = nbar - 3;
        ActionAngleCoords {
            beta: self.beta[..m].to_vec(),
            gamma: self.gamma[..m].to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentValues {
    pub mu: Vec<f64>,
}

impl MomentValues {
    pub fn sum(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `(2π − α_1, β_1, …, β_{n−3}, α_n)`.
pub fn extended_beta(alpha: &AngleVector, beta: &[f64]) -> Vec<f64> {
    let mut bt = Vec::with_capacity(beta.len() + 2);
    bt.push(TAU - alpha.get(1));
    bt.extend_from_slice(beta);
    bt.push(alpha.get(alpha.n()));
    bt
}

pub fn moment_map(alpha: &AngleVector, beta: &[f64]) -> MomentValues {
    let bt = extended_beta(alpha, beta);
    let two_lambda = 2.0 * alpha.lambda();
    let mu = (0..alpha.n() - 2)
        .map(|k| (alpha.get(k + 2) - bt[k] + bt[k + 1] - TAU) / two_lambda)
        .collect();
    MomentValues { mu }
}

/// Inverts the moment map; `mu` has `n − 2` entries summing to 1/2.
pub fn beta_from_moments(alpha: &AngleVector, mu: &[f64]) -> Result<Vec<f64>> {
    let n = alpha.n();
    if mu.len() != n - 2 {
        return Err(Error::Precondition(format!(
            "expected {} moment values, got {}",
            n - 2,
            mu.len()
        )));
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 0.5).abs() > 1e-9 {
        return Err(Error::Precondition(format!("moment values sum to {sum}, not 1/2")));
    }
    let mut prev = TAU - alpha.get(1);
    let mut beta = Vec::with_capacity(n - 3);
    for (k, m) in mu.iter().take(n - 3).enumerate() {
        prev += 2.0 * alpha.lambda() * m - alpha.get(k + 2) + TAU;
        beta.push(prev);
    }
    Ok(beta)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleChain {
    pub alpha: AngleVector,
    pub c: Vec<HPoint>,
    pub b: Vec<HPoint>,
}

impl TriangleChain {
    pub fn new(alpha: AngleVector, c: Vec<HPoint>, b: Vec<HPoint>) -> Result<Self> {
        let n = alpha.n();
        if c.len() != n || b.len() != n - 3 {
            return Err(Error::MalformedChain(format!(
                "expected {n} exterior and {} shared vertices, got {} and {}",
                n - 3,
                c.len(),
                b.len()
            )));
        }
        Ok(TriangleChain { alpha, c, b })
    }

    pub fn n(&self) -> usize {
        self.alpha.n()
    }

    /// `S_k`: `C_1`, then `B_1..B_{n−3}`, then `C_n`.
    pub fn shared(&self, k: usize) -> HPoint {
        let n = self.n();
        match k {
            0 => self.c[0],
            k if k == n - 2 => self.c[n - 1],
            k => self.b[k - 1],
        }
    }

    /// Vertices `(S_k, C_{k+2}, S_{k+1})` of triangle `k`.
    pub fn triangle(&self, k: usize) -> [HPoint; 3] {
        [self.shared(k), self.c[k + 1], self.shared(k + 1)]
    }

    pub fn areas(&self) -> Vec<f64> {
        (0..self.n() - 2)
            .map(|k| {
                let [p, q, r] = self.triangle(k);
                triangle_area(p, q, r)
            })
            .collect()
    }

    /// Vertices as a flat list `C_1..C_n, B_1..B_{n−3}`.
    pub fn vertices(&self) -> impl Iterator<Item = &HPoint> {
        self.c.iter().chain(&self.b)
    }
}

/// Whether `γ_k` (1-based) is defined given which triangles are degenerate.
fn gamma_defined(degenerate: &[bool], k: usize) -> bool {
    !degenerate[k - 1] && !degenerate[k]
}

pub fn build_chain(alpha: &AngleVector, coords: &ActionAngleCoords) -> Result<TriangleChain> {
    let n = alpha.n();
    let m = n - 3;
    if coords.beta.len() != m || coords.gamma.len() != m {
        return Err(Error::Precondition(format!(
            "expected {m} action and {m} angle coordinates"
        )));
    }
    if let Some(b) = coords.beta.iter().find(|b| !(**b > 0.0 && **b < TAU)) {
        return Err(Error::Precondition(format!("beta value {b} is not in (0, 2π)")));
    }
    let mu = moment_map(alpha, &coords.beta);
    if let Some((index, &value)) = mu.mu.iter().enumerate().find(|(_, v)| **v < -EPS_ANGLE) {
        return Err(Error::OutsidePolytope { index, value });
    }
    let degenerate: Vec<bool> = mu.mu.iter().map(|v| alpha.lambda() * v <= EPS_AREA).collect();
    if degenerate.iter().all(|d| *d) {
        return Err(Error::MalformedChain("every triangle is degenerate".into()));
    }
    let bt = extended_beta(alpha, &coords.beta);

    let mut shared = vec![HPoint::I; n - 1];
    let mut ext = vec![HPoint::I; n - 2];
    // Direction of the ray S_k → C_{k+1}; for k = 0 it is chosen so that C_1 → B_1 points up.
    let mut phi = 1.5 * PI - alpha.get(1) / 2.0;
    for k in 0..n - 2 {
        let gamma = if k == 0 {
            0.0
        } else {
            match coords.gamma[k - 1] {
                Some(g) => g,
                None if gamma_defined(&degenerate, k) => return Err(Error::MissingGamma(k)),
                None => 0.0,
            }
        };
        let dir_ext = phi - gamma;
        let dir_next = dir_ext - bt[k] / 2.0;
        let back = if degenerate[k] {
            ext[k] = shared[k];
            shared[k + 1] = shared[k];
            dir_next + PI
        } else {
            let at_start = bt[k] / 2.0;
            let at_ext = PI - alpha.get(k + 2) / 2.0;
            let at_end = PI - bt[k + 1] / 2.0;
            ext[k] = point_at(shared[k], dir_ext, side_from_angles(at_end, at_start, at_ext));
            shared[k + 1] = point_at(shared[k], dir_next, side_from_angles(at_ext, at_start, at_end));
            direction(shared[k + 1], shared[k])?
        };
        phi = back - (PI - bt[k + 1] / 2.0);
    }

    let mut c = Vec::with_capacity(n);
    c.push(shared[0]);
    c.extend_from_slice(&ext);
    c.push(shared[n - 2]);
    let b = shared[1..n - 2].to_vec();
    TriangleChain::new(alpha.clone(), c, b)
}

/// Indices `k` of triangles with area below `EPS_AREA`.
pub fn degeneracy_pattern(chain: &TriangleChain) -> Vec<usize> {
    chain
        .areas()
        .iter()
        .enumerate()
        .filter(|(_, a)| **a < EPS_AREA)
        .map(|(k, _)| k)
        .collect()
}

pub fn extract_coords(chain: &TriangleChain) -> Result<ActionAngleCoords> {
    let n = chain.n();
    let alpha = &chain.alpha;
    let degenerate: Vec<bool> = chain.areas().iter().map(|a| *a < EPS_AREA).collect();
    if degenerate.iter().all(|d| *d) {
        return Err(Error::MalformedChain("every triangle is degenerate".into()));
    }
    let mut beta = Vec::with_capacity(n - 3);
    let mut gamma = Vec::with_capacity(n - 3);
    let mut prev = TAU - alpha.get(1);
    for k in 1..=n - 3 {
        let s = chain.shared(k);
        let value = if !degenerate[k] {
            2.0 * interior_angle(s, chain.c[k + 1], chain.shared(k + 1))?
        } else if !degenerate[k - 1] {
            TAU - 2.0 * interior_angle(s, chain.shared(k - 1), chain.c[k])?
        } else {
            // Both neighbours collapsed: μ_{k−1} = 0 fixes β_k from β_{k−1}.
            prev - alpha.get(k + 1) + TAU
        };
        beta.push(value);
        prev = value;
        gamma.push(if gamma_defined(&degenerate, k) {
            Some(wrap_angle(direction(s, chain.c[k])? - direction(s, chain.c[k + 1])?))
        } else {
            None
        });
    }
    Ok(ActionAngleCoords { beta, gamma })
}

/// The chain of the sub-sphere on `nbar` punctures obtained by merging punctures
/// `nbar..n`, valid when every triangle from index `nbar − 2` on is degenerate.
pub fn restrict_chain(chain: &TriangleChain, nbar: usize) -> Result<TriangleChain> {
    let n = chain.n();
    if nbar < 4 || nbar >= n {
        return Err(Error::Precondition(format!("cannot restrict n = {n} to {nbar} punctures")));
    }
    let areas = chain.areas();
    if let Some(k) = (nbar - 2..n - 2).find(|&k| areas[k] >= EPS_AREA) {
        return Err(Error::Precondition(format!(
            "triangle {k} has area {} but must be degenerate",
            areas[k]
        )));
    }
    let alpha = restricted_alpha(&chain.alpha, nbar)?;
    let mut c = chain.c[..nbar - 1].to_vec();
    c.push(chain.shared(nbar - 2));
    let b = chain.b[..nbar - 3].to_vec();
    TriangleChain::new(alpha, c, b)
}

/// `(α_1, …, α_{n̄−1}, α_{n̄} + ⋯ + α_n − 2π(n − n̄))`.
pub fn restricted_alpha(alpha: &AngleVector, nbar: usize) -> Result<AngleVector> {
    let n = alpha.n();
    let a = alpha.as_slice();
    let mut out = a[..nbar - 1].to_vec();
    out.push(a[nbar - 1..].iter().sum::<f64>() - TAU * (n - nbar) as f64);
    AngleVector::new(out)
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn points_json(ps: &[HPoint]) -> String {
    let items: Vec<String> = ps
        .iter()
        .map(|p| format!("[{},{}]", fmt17(p.x), fmt17(p.y)))
        .collect();
    format!("[{}]", items.join(","))
}

pub(crate) fn reals_json(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| fmt17(*x)).collect();
    format!("[{}]", items.join(","))
}

#[derive(Deserialize)]
struct ChainJson {
    alpha: Vec<f64>,
    #[serde(rename = "C")]
    c: Vec<[f64; 2]>,
    #[serde(rename = "B")]
    b: Vec<[f64; 2]>,
}

/// `{"alpha": [...], "C": [[x, y], ...], "B": [[x, y], ...]}` with 17 significant digits.
pub fn chain_to_json(chain: &TriangleChain) -> String {
    format!(
        "{{\"alpha\":{},\"C\":{},\"B\":{}}}",
        reals_json(chain.alpha.as_slice()),
        points_json(&chain.c),
        points_json(&chain.b)
    )
}

pub fn chain_from_json(s: &str) -> Result<TriangleChain> {
    let raw: ChainJson =
        serde_json::from_str(s).map_err(|e| Error::MalformedChain(e.to_string()))?;
    let pts = |v: Vec<[f64; 2]>| -> Result<Vec<HPoint>> {
        v.into_iter().map(|[x, y]| HPoint::new(x, y)).collect()
    };
    TriangleChain::new(AngleVector::new(raw.alpha)?, pts(raw.c)?, pts(raw.b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{circular_diff, dist, oriented_angle};

    fn alpha4() -> AngleVector {
        AngleVector::new(vec![1.7 * PI, 1.8 * PI, 1.75 * PI, 1.9 * PI]).unwrap()
    }

    fn alpha6() -> AngleVector {
        AngleVector::new(vec![1.9 * PI, 1.85 * PI, 1.8 * PI, 1.95 * PI, 1.7 * PI, 1.9 * PI]).unwrap()
    }

    fn mid_coords(alpha: &AngleVector, gamma: &[f64]) -> ActionAngleCoords {
        let k = alpha.n() - 2;
        let beta = beta_from_moments(alpha, &vec![0.5 / k as f64; k]).unwrap();
        ActionAngleCoords::regular(beta, gamma.to_vec())
    }

    #[test]
    fn angle_condition_is_enforced() {
        assert!(AngleVector::new(vec![PI; 4]).is_err());
        assert!(AngleVector::new(vec![1.9 * PI, 1.9 * PI, 1.9 * PI]).is_err());
        assert!(AngleVector::new(vec![1.9 * PI, 1.9 * PI, 1.9 * PI, 2.0 * PI]).is_err());
        let a = AngleVector::uniform(4, 1.9 * PI).unwrap();
        assert!((a.lambda() - 1.6 * PI).abs() < 1e-12);
    }

    #[test]
    fn four_point_moment_formulas() {
        let a = alpha4();
        let beta = 1.2;
        let mu = moment_map(&a, &[beta]);
        let l = a.lambda();
        let mu0 = (a.get(1) + a.get(2) + beta - 2.0 * TAU) / (2.0 * l);
        let mu1 = (a.get(3) + a.get(4) - beta - TAU) / (2.0 * l);
        assert!((mu.mu[0] - mu0).abs() < 1e-15 && (mu.mu[1] - mu1).abs() < 1e-15);
    }

    #[test]
    fn moments_telescope_to_one_half() {
        let a = alpha6();
        for beta in [[0.5, 1.0, 2.0], [3.0, 3.1, 6.0], [0.1, 5.0, 0.2]] {
            assert!((moment_map(&a, &beta).sum() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn beta_from_moments_inverts_moment_map() {
        let a = alpha6();
        let mu = [0.05, 0.2, 0.1, 0.15];
        let beta = beta_from_moments(&a, &mu).unwrap();
        let back = moment_map(&a, &beta);
        for (x, y) in back.mu.iter().zip(mu) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(beta.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn first_triangle_in_canonical_frame() {
        let a = alpha4();
        let ch = build_chain(&a, &mid_coords(&a, &[1.0])).unwrap();
        assert_eq!(ch.c[0], HPoint::I);
        assert!(ch.b[0].x.abs() < 1e-14 && ch.b[0].y > 1.0);
    }

    #[test]
    fn chain_angles_areas_and_orientation() {
        let a = alpha6();
        let coords = mid_coords(&a, &[0.4, 2.0, 5.0]);
        let ch = build_chain(&a, &coords).unwrap();
        let bt = extended_beta(&a, &coords.beta);
        let mu = moment_map(&a, &coords.beta);
        for k in 0..4 {
            let [s, e, t] = ch.triangle(k);
            // Clockwise: each interior angle is swept from the next vertex to the previous one.
            let at_s = oriented_angle(s, t, e).unwrap();
            let at_e = oriented_angle(e, s, t).unwrap();
            let at_t = oriented_angle(t, e, s).unwrap();
            assert!((at_s - bt[k] / 2.0).abs() < 1e-10, "k={k}");
            assert!((at_e - (PI - a.get(k + 2) / 2.0)).abs() < 1e-10);
            assert!((at_t - (PI - bt[k + 1] / 2.0)).abs() < 1e-10);
            assert!((triangle_area(s, e, t) - a.lambda() * mu.mu[k]).abs() < 1e-10);
        }
        let total: f64 = ch.areas().iter().sum();
        assert!((total - a.lambda() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn round_trip_regular() {
        let a = alpha6();
        let coords = mid_coords(&a, &[0.4, 3.5, 6.1]);
        let back = extract_coords(&build_chain(&a, &coords).unwrap()).unwrap();
        for (x, y) in coords.beta.iter().zip(&back.beta) {
            assert!((x - y).abs() < 1e-10);
        }
        for (x, y) in coords.gamma.iter().zip(&back.gamma) {
            assert!(circular_diff(x.unwrap(), y.unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn gamma_obeys_law_of_cosines_at_b() {
        let a = alpha4();
        let ch = build_chain(&a, &mid_coords(&a, &[2.3])).unwrap();
        let (b, c2, c3) = (ch.b[0], ch.c[1], ch.c[2]);
        let g = extract_coords(&ch).unwrap().gamma[0].unwrap();
        let (x, y, z) = (dist(c2, b), dist(c3, b), dist(c2, c3));
        let cos_g = (x.cosh() * y.cosh() - z.cosh()) / (x.sinh() * y.sinh());
        assert!((g.cos() - cos_g).abs() < 1e-12);
    }

    #[test]
    fn degenerate_last_triangle_collapses_to_a_point() {
        let a = alpha4();
        let beta = a.get(3) + a.get(4) - TAU;
        let ch = build_chain(&a, &ActionAngleCoords { beta: vec![beta], gamma: vec![None] }).unwrap();
        assert!(dist(ch.b[0], ch.c[2]) < 1e-12 && dist(ch.b[0], ch.c[3]) < 1e-12);
        assert_eq!(degeneracy_pattern(&ch), vec![1]);
        let back = extract_coords(&ch).unwrap();
        assert!((back.beta[0] - beta).abs() < 1e-12);
        assert_eq!(back.gamma, vec![None]);
    }

    #[test]
    fn missing_gamma_is_an_error_only_when_defined() {
        let a = alpha4();
        let coords = ActionAngleCoords { beta: mid_coords(&a, &[0.0]).beta, gamma: vec![None] };
        assert_eq!(build_chain(&a, &coords), Err(Error::MissingGamma(1)));
    }

    #[test]
    fn outside_polytope_is_rejected() {
        let a = alpha4();
        let beta = a.get(3) + a.get(4) - TAU + 0.01;
        let r = build_chain(&a, &ActionAngleCoords::regular(vec![beta], vec![0.0]));
        assert!(matches!(r, Err(Error::OutsidePolytope { index: 1, .. })));
    }

    #[test]
    fn interior_degenerate_pattern_five_points() {
        let a = AngleVector::new(vec![1.8 * PI, 1.9 * PI, 1.85 * PI, 1.9 * PI, 1.8 * PI]).unwrap();
        let beta = beta_from_moments(&a, &[0.2, 0.0, 0.3]).unwrap();
        let coords = ActionAngleCoords { beta: beta.clone(), gamma: vec![None, None] };
        let ch = build_chain(&a, &coords).unwrap();
        assert_eq!(degeneracy_pattern(&ch), vec![1]);
        let back = extract_coords(&ch).unwrap();
        assert_eq!(back.gamma, vec![None, None]);
        for (x, y) in beta.iter().zip(&back.beta) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn leading_collapse_keeps_coordinates() {
        let a = alpha6();
        let beta = beta_from_moments(&a, &[0.0, 0.0, 0.3, 0.2]).unwrap();
        let coords = ActionAngleCoords { beta: beta.clone(), gamma: vec![None, None, Some(1.3)] };
        let ch = build_chain(&a, &coords).unwrap();
        assert_eq!(degeneracy_pattern(&ch), vec![0, 1]);
        let back = extract_coords(&ch).unwrap();
        assert_eq!(back.gamma[..2], [None, None]);
        assert!(circular_diff(back.gamma[2].unwrap(), 1.3).abs() < 1e-10);
        for (x, y) in beta.iter().zip(&back.beta) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn restriction_of_trailing_degenerate_chain() {
        let a = AngleVector::new(vec![1.8 * PI, 1.9 * PI, 1.85 * PI, 1.9 * PI, 1.8 * PI]).unwrap();
        let beta = beta_from_moments(&a, &[0.2, 0.3, 0.0]).unwrap();
        let coords = ActionAngleCoords { beta, gamma: vec![Some(2.0), None] };
        let ch = build_chain(&a, &coords).unwrap();
        let r = restrict_chain(&ch, 4).unwrap();
        assert!((r.alpha.get(4) - (a.get(4) + a.get(5) - TAU)).abs() < 1e-15);
        assert!((r.alpha.lambda() - a.lambda()).abs() < 1e-12);
        let sub = extract_coords(&r).unwrap();
        let truncated = coords.truncate(4);
        assert!((sub.beta[0] - truncated.beta[0]).abs() < 1e-10);
        assert!(circular_diff(sub.gamma[0].unwrap(), 2.0).abs() < 1e-10);
        let rebuilt = build_chain(&r.alpha, &truncated).unwrap();
        for (p, q) in rebuilt.vertices().zip(r.vertices()) {
            assert!(dist(*p, *q) < 1e-9);
        }
        assert!(restrict_chain(&build_chain(&a, &ActionAngleCoords::regular(
            beta_from_moments(&a, &[0.2, 0.2, 0.1]).unwrap(), vec![1.0, 1.0])).unwrap(), 4).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let a = alpha6();
        let ch = build_chain(&a, &mid_coords(&a, &[0.3, 1.3, 2.3])).unwrap();
        let s = chain_to_json(&ch);
        assert!(s.starts_with("{\"alpha\":["));
        assert_eq!(chain_from_json(&s).unwrap(), ch);
        assert!(chain_from_json("{\"alpha\":[1]}").is_err());
    }
}
