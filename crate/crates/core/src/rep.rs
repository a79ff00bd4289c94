//! Representations `c_k ↦ ρ(c_k)`, their chains, angle functions and
//! conjugation-invariant fingerprints.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{
    extended_beta, extract_coords, moment_map, reals_json, restricted_alpha, AngleVector,
    TriangleChain, EPS_AREA,
};
use crate::error::{Error, Result};
use crate::hyperbolic::{
    circular_diff, direction, dist, rotation_about, triangle_area, HPoint, Isometry,
};
use crate::surface::{standard_curves, CurveClass, PantsDecomposition};

/// Tolerance on `ρ(c_1)⋯ρ(c_n) = ±1` and on generator angles.
pub const EPS_REL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    gens: Vec<Isometry>,
    alpha: AngleVector,
}

impl Representation {
    /// Validates the product relation and the generator rotation angles.
    pub fn new(gens: Vec<Isometry>, alpha: AngleVector) -> Result<Self> {
        if gens.len() != alpha.n() {
            return Err(Error::Precondition(format!(
                "{} generators for {} punctures",
                gens.len(),
                alpha.n()
            )));
        }
        let rep = Representation { gens, alpha };
        let residual = rep.product_residual();
        if residual > EPS_REL {
            return Err(Error::ProductNotIdentity { residual });
        }
        for (k, g) in rep.gens.iter().enumerate() {
            let expected = rep.alpha.get(k + 1);
            let found = g.elliptic().map(|(a, _)| a).unwrap_or(f64::NAN);
            if !(circular_diff(found, expected).abs() <= EPS_REL) {
                return Err(Error::WrongGeneratorAngle {
                    index: k + 1,
                    expected,
                    found,
                });
            }
        }
        Ok(rep)
    }

    pub(crate) fn from_parts(gens: Vec<Isometry>, alpha: AngleVector) -> Self {
        Representation { gens, alpha }
    }

    pub fn n(&self) -> usize {
        self.gens.len()
    }

    pub fn alpha(&self) -> &AngleVector {
        &self.alpha
    }

    pub fn gens(&self) -> &[Isometry] {
        &self.gens
    }

    /// Distance of the generator product from `±1`.
    pub fn product_residual(&self) -> f64 {
        self.eval_word(&(1..=self.n() as i32).collect::<Vec<_>>())
            .distance(&Isometry::IDENTITY)
    }

    pub fn eval_word(&self, word: &[i32]) -> Isometry {
        word.iter().fold(Isometry::IDENTITY, |acc, &g| {
            let m = self.gens[g.unsigned_abs() as usize - 1];
            acc.compose(&if g > 0 { m } else { m.inverse() })
        })
    }

    pub fn image(&self, curve: &CurveClass) -> Isometry {
        self.eval_word(curve.word())
    }

    /// `g ρ g⁻¹`.
    pub fn conjugate(&self, g: &Isometry) -> Representation {
        Representation {
            gens: self.gens.iter().map(|h| h.conjugate_by(g)).collect(),
            alpha: self.alpha.clone(),
        }
    }

    /// Row-major 2×2 matrices with 17 significant digits.
    pub fn to_json(&self) -> String {
        let items: Vec<String> = self
            .gens
            .iter()
            .map(|g| {
                let [a, b, c, d] = g.entries();
                format!("[{},{}]", reals_json(&[a, b]), reals_json(&[c, d]))
            })
            .collect();
        format!("[{}]", items.join(","))
    }

    /// Parses matrices; the peripheral angles are read off the generators.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<[[f64; 2]; 2]> =
            serde_json::from_str(s).map_err(|e| Error::Precondition(e.to_string()))?;
        let gens = raw
            .iter()
            .map(|[[a, b], [c, d]]| Isometry::from_entries(*a, *b, *c, *d))
            .collect::<Result<Vec<_>>>()?;
        let alpha = gens
            .iter()
            .enumerate()
            .map(|(k, g)| {
                g.elliptic().map(|(a, _)| a).ok_or(Error::NonElliptic {
                    curve: format!("c{}", k + 1),
                    trace: g.trace().abs(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::new(gens, AngleVector::new(alpha)?)
    }
}

pub fn chain_to_rep(chain: &TriangleChain) -> Result<Representation> {
    let gens = chain
        .c
        .iter()
        .enumerate()
        .map(|(k, p)| rotation_about(*p, chain.alpha.get(k + 1)))
        .collect();
    Representation::new(gens, chain.alpha.clone())
}

fn elliptic_or_err(g: &Isometry, name: impl FnOnce() -> String) -> Result<(f64, HPoint)> {
    g.elliptic().ok_or_else(|| {
        let curve = name();
        let trace = g.trace().abs();
        log::warn!("image of {curve} is not elliptic (|tr| = {trace})");
        Error::NonElliptic { curve, trace }
    })
}

/// The chain of `rep` read in the presentation of `pants`, placed in the
/// canonical frame (`C_1 = i`, `C_1 → B_1` pointing up).
pub fn rep_to_chain(rep: &Representation, pants: &PantsDecomposition) -> Result<TriangleChain> {
    let n = rep.n();
    if pants.n() != n {
        return Err(Error::Precondition("pants decomposition has the wrong size".into()));
    }
    let gens: Vec<Isometry> = pants.generators().iter().map(|w| rep.eval_word(w)).collect();
    let alpha = AngleVector::new(pants.punctures().iter().map(|&p| rep.alpha.get(p)).collect())?;

    let c: Vec<HPoint> = gens
        .iter()
        .enumerate()
        .map(|(k, g)| elliptic_or_err(g, || format!("generator {}", k + 1)).map(|(_, p)| p))
        .collect::<Result<_>>()?;
    let mut prefix = gens[0];
    let mut b = Vec::with_capacity(n - 3);
    let mut beta = Vec::with_capacity(n - 3);
    for k in 1..=n - 3 {
        prefix = prefix.compose(&gens[k]);
        let (angle, fix) = elliptic_or_err(&prefix.inverse(), || pants.curves()[k - 1].to_string())?;
        b.push(fix);
        beta.push(angle);
    }

    let raw = TriangleChain::new(alpha.clone(), c, b)?;
    let areas = raw.areas();
    let first = areas
        .iter()
        .position(|a| *a >= EPS_AREA)
        .ok_or_else(|| Error::MalformedChain("every triangle is degenerate".into()))?;

    // Formal direction of S_first → C_{first+2} in the canonical frame, taking
    // absent angle coordinates as zero across the collapsed prefix.
    let bt = extended_beta(&alpha, &beta);
    let mut psi = 1.5 * PI - alpha.get(1) / 2.0;
    for k in 0..first {
        psi += (bt[k + 1] - bt[k]) / 2.0;
    }
    let c1 = raw.c[0];
    let to_i = Isometry::affine(1.0 / c1.y, -c1.x / c1.y)?;
    let s = to_i.apply(raw.shared(first))?;
    let e = to_i.apply(raw.c[first + 1])?;
    let frame = rotation_about(HPoint::I, psi - direction(s, e)?).compose(&to_i);
    let move_all = |ps: &[HPoint]| -> Result<Vec<HPoint>> { ps.iter().map(|p| frame.apply(*p)).collect() };
    TriangleChain::new(alpha, move_all(&raw.c)?, move_all(&raw.b)?)
}

pub fn angle_function(rep: &Representation, curve: &CurveClass) -> Result<f64> {
    elliptic_or_err(&rep.image(curve), || curve.to_string()).map(|(a, _)| a)
}

/// Angle-function values over a curve list, with their quantization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub values: Vec<f64>,
    pub key: Vec<i64>,
    pub quantum: f64,
}

impl Fingerprint {
    /// Equality up to `tol` in every value, measured on the circle.
    pub fn approx_eq(&self, other: &Fingerprint, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// Largest circular difference between corresponding values.
    pub fn max_diff(&self, other: &Fingerprint) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| circular_diff(*a, *b).abs())
            .fold(0.0, f64::max)
    }

    /// Stable 64-bit FNV-1a digest of the quantized key.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for k in &self.key {
            for byte in k.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.digest())
    }
}

pub fn fingerprint(rep: &Representation, curves: &[CurveClass], quantum: f64) -> Result<Fingerprint> {
    let values = curves
        .iter()
        .map(|c| angle_function(rep, c))
        .collect::<Result<Vec<_>>>()?;
    let key = values.iter().map(|v| (v / quantum).floor() as i64).collect();
    Ok(Fingerprint {
        values,
        key,
        quantum,
    })
}

/// `{b_i} ∪ {d_i} ∪ {e_i}`.
pub fn fingerprint_curves(n: usize) -> Result<Vec<CurveClass>> {
    Ok(standard_curves(n)?.all())
}

/// Largest hyperbolic distance between corresponding vertices of the
/// canonically framed chains: zero exactly when the two are conjugate.
/// Unlike fingerprints this separates points of degenerate strata, where
/// the angle functions of `b_i`, `d_i`, `e_i` can miss the relative angle
/// across a collapsed triangle.
pub fn conjugacy_gap(r1: &Representation, r2: &Representation) -> Result<f64> {
    if r1.n() != r2.n() {
        return Err(Error::Precondition("representations of different spheres".into()));
    }
    let pants = PantsDecomposition::standard(r1.n())?;
    let (c1, c2) = (rep_to_chain(r1, &pants)?, rep_to_chain(r2, &pants)?);
    Ok(c1.vertices().zip(c2.vertices()).map(|(p, q)| dist(*p, *q)).fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub k1: f64,
    pub k2: f64,
    /// The angle-function value predicted by `cos(θ/2) = k1·cos(φ) + k2`.
    pub predicted: f64,
    /// The angle `φ` entering the cosine.
    pub phase: f64,
}

fn gamma_at(chain: &TriangleChain, i: usize) -> Result<f64> {
    let m = chain.n() - 3;
    if i == 0 || i > m {
        return Err(Error::Precondition(format!("index {i} out of range 1..={m}")));
    }
    extract_coords(chain)?.gamma[i - 1]
        .ok_or_else(|| Error::Precondition(format!("gamma_{i} is undefined on this chain")))
}

fn nondegenerate_distance(p: HPoint, q: HPoint) -> Result<f64> {
    let d = dist(p, q);
    if d < crate::hyperbolic::EPS_GEOM {
        return Err(Error::Precondition("degenerate distance in closed form".into()));
    }
    Ok(d)
}

/// `cos(δ_i/2) = k1·cos γ_i + k2` with
/// `k1 = sin(α_{i+1}/2) sin(α_{i+2}/2) sinh d(C_{i+1},B_i) sinh d(C_{i+2},B_i)` and
/// `k2 = cos(α_{i+1}/2) cos(α_{i+2}/2) − sin(α_{i+1}/2) sin(α_{i+2}/2) cosh d(C_{i+1},B_i) cosh d(C_{i+2},B_i)`.
pub fn delta_closed_form(chain: &TriangleChain, i: usize) -> Result<ClosedForm> {
    let gamma = gamma_at(chain, i)?;
    let bi = chain.b[i - 1];
    let x = nondegenerate_distance(chain.c[i], bi)?;
    let y = nondegenerate_distance(chain.c[i + 1], bi)?;
    let (s1, c1) = (chain.alpha.get(i + 1) / 2.0).sin_cos();
    let (s2, c2) = (chain.alpha.get(i + 2) / 2.0).sin_cos();
    let k1 = s1 * s2 * x.sinh() * y.sinh();
    let k2 = c1 * c2 - s1 * s2 * x.cosh() * y.cosh();
    Ok(ClosedForm {
        k1,
        k2,
        predicted: 2.0 * (k1 * gamma.cos() + k2).clamp(-1.0, 1.0).acos(),
        phase: gamma,
    })
}

/// `cos(ε_i/2) = k1·cos(β_i/2 − γ_i) + k2` with, for `a = d(B_{i−1},B_i)`,
/// `c = d(C_{i+2},B_i)` and `B_0 = C_1`, `β_0 = 2π − α_1`:
/// `k1 = −sin(β_{i−1}/2) sin(α_{i+2}/2) sinh a sinh c` and
/// `k2 = −cos(β_{i−1}/2) cos(α_{i+2}/2) − sin(β_{i−1}/2) sin(α_{i+2}/2) cosh a cosh c`.
pub fn epsilon_closed_form(chain: &TriangleChain, i: usize) -> Result<ClosedForm> {
    let gamma = gamma_at(chain, i)?;
    let coords = extract_coords(chain)?;
    let bt = extended_beta(&chain.alpha, &coords.beta);
    let bi = chain.b[i - 1];
    let a = nondegenerate_distance(chain.shared(i - 1), bi)?;
    let c = nondegenerate_distance(chain.c[i + 1], bi)?;
    let (s1, c1) = (bt[i - 1] / 2.0).sin_cos();
    let (s2, c2) = (chain.alpha.get(i + 2) / 2.0).sin_cos();
    let k1 = -s1 * s2 * a.sinh() * c.sinh();
    let k2 = -c1 * c2 - s1 * s2 * a.cosh() * c.cosh();
    let phase = bt[i] / 2.0 - gamma;
    Ok(ClosedForm {
        k1,
        k2,
        predicted: 2.0 * (k1 * phase.cos() + k2).clamp(-1.0, 1.0).acos(),
        phase,
    })
}

/// Moment values read from the pants-curve angles of `rep`.
pub fn rep_moments(rep: &Representation) -> Result<Vec<f64>> {
    let n = rep.n();
    let beta = (1..=n - 3)
        .map(|i| angle_function(rep, &CurveClass::b(n, i)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(moment_map(rep.alpha(), &beta).mu)
}

/// The representation of the sub-sphere on `nbar` punctures:
/// `(ρ(c_1), …, ρ(c_{n̄−1}), ρ(b_{n̄−2}))`, valid when `μ_k = 0` for `k ≥ n̄ − 2`.
pub fn restrict_rep(rep: &Representation, nbar: usize) -> Result<Representation> {
    let n = rep.n();
    if nbar < 4 || nbar >= n {
        return Err(Error::Precondition(format!("cannot restrict n = {n} to {nbar} punctures")));
    }
    let mu = rep_moments(rep)?;
    let lambda = rep.alpha().lambda();
    if let Some(k) = (nbar - 2..n - 2).find(|&k| lambda * mu[k] >= EPS_AREA) {
        return Err(Error::Precondition(format!("mu_{k} = {} must vanish", mu[k])));
    }
    let alpha = restricted_alpha(rep.alpha(), nbar)?;
    let mut gens = rep.gens()[..nbar - 1].to_vec();
    gens.push(rep.image(&CurveClass::b(n, nbar - 2)?));
    Representation::new(gens, alpha)
}

/// Interior angles of triangle `k` of a chain, in vertex order; used in checks.
pub fn triangle_interior_angles(chain: &TriangleChain, k: usize) -> Result<[f64; 3]> {
    let [s, e, t] = chain.triangle(k);
    Ok([
        crate::hyperbolic::interior_angle(s, e, t)?,
        crate::hyperbolic::interior_angle(e, t, s)?,
        crate::hyperbolic::interior_angle(t, s, e)?,
    ])
}

/// Largest deviation of per-triangle areas from `λ·μ_k`.
pub fn area_residual(chain: &TriangleChain, mu: &[f64]) -> f64 {
    (0..chain.n() - 2)
        .map(|k| {
            let [p, q, r] = chain.triangle(k);
            (triangle_area(p, q, r) - chain.alpha.lambda() * mu[k]).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{beta_from_moments, build_chain, degeneracy_pattern, ActionAngleCoords};
    use crate::hyperbolic::oriented_angle;

    fn sample(alpha: &[f64], mu: &[f64], gamma: &[Option<f64>]) -> (AngleVector, TriangleChain) {
        let a = AngleVector::new(alpha.to_vec()).unwrap();
        let beta = beta_from_moments(&a, mu).unwrap();
        let ch = build_chain(&a, &ActionAngleCoords { beta, gamma: gamma.to_vec() }).unwrap();
        (a, ch)
    }

    fn five() -> (AngleVector, TriangleChain) {
        sample(
            &[1.8 * PI, 1.9 * PI, 1.85 * PI, 1.75 * PI, 1.9 * PI],
            &[0.1, 0.25, 0.15],
            &[Some(1.1), Some(4.0)],
        )
    }

    #[test]
    fn product_is_identity_and_b_matches_chain() {
        let (a, ch) = five();
        let rep = chain_to_rep(&ch).unwrap();
        assert!(rep.product_residual() < 1e-12);
        let coords = extract_coords(&ch).unwrap();
        for i in 1..=2 {
            let (angle, fix) = rep.image(&CurveClass::b(5, i).unwrap()).elliptic().unwrap();
            assert!((angle - coords.beta[i - 1]).abs() < 1e-10);
            assert!(dist(fix, ch.b[i - 1]) < 1e-9);
        }
        assert_eq!(rep.alpha(), &a);
    }

    #[test]
    fn rep_to_chain_recovers_the_chain() {
        let (_, ch) = five();
        let rep = chain_to_rep(&ch).unwrap();
        let g = Isometry::from_entries(1.3, 0.4, -0.7, 0.6).unwrap();
        let back = rep_to_chain(&rep.conjugate(&g), &PantsDecomposition::standard(5).unwrap()).unwrap();
        for (p, q) in back.vertices().zip(ch.vertices()) {
            assert!(dist(*p, *q) < 1e-9, "{p} vs {q}");
        }
    }

    #[test]
    fn rep_to_chain_handles_degenerate_prefix() {
        let (_, ch) = sample(
            &[1.9 * PI, 1.85 * PI, 1.8 * PI, 1.95 * PI, 1.7 * PI, 1.9 * PI],
            &[0.0, 0.0, 0.3, 0.2],
            &[None, None, Some(2.2)],
        );
        let rep = chain_to_rep(&ch).unwrap();
        let back = rep_to_chain(&rep, &PantsDecomposition::standard(6).unwrap()).unwrap();
        assert_eq!(degeneracy_pattern(&back), vec![0, 1]);
        for (p, q) in back.vertices().zip(ch.vertices()) {
            assert!(dist(*p, *q) < 1e-9);
        }
        assert_eq!(extract_coords(&back).unwrap().gamma[..2], [None, None]);
    }

    #[test]
    fn non_elliptic_generator_is_reported() {
        let (_, ch) = five();
        let mut rep = chain_to_rep(&ch).unwrap();
        rep.gens[0] = Isometry::from_entries(2.0, 0.0, 0.0, 0.5).unwrap();
        let err = rep_to_chain(&rep, &PantsDecomposition::standard(5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonElliptic { .. }));
        assert!(matches!(
            Representation::new(rep.gens.clone(), rep.alpha.clone()),
            Err(Error::ProductNotIdentity { .. })
        ));
    }

    #[test]
    fn adapted_chains_have_the_expected_angles() {
        let (_, ch) = five();
        let rep = chain_to_rep(&ch).unwrap();
        let delta1 = angle_function(&rep, &CurveClass::d(5, 1).unwrap()).unwrap();
        let dch = rep_to_chain(&rep, &PantsDecomposition::through_d(5, 1).unwrap()).unwrap();
        // First triangle is (C_2, C_3, D_1).
        let [s, e, t] = dch.triangle(0);
        assert!((oriented_angle(s, t, e).unwrap() - (PI - rep.alpha().get(2) / 2.0)).abs() < 1e-9);
        assert!((oriented_angle(e, s, t).unwrap() - (PI - rep.alpha().get(3) / 2.0)).abs() < 1e-9);
        assert!((oriented_angle(t, e, s).unwrap() - (PI - delta1 / 2.0)).abs() < 1e-9);

        let eps2 = angle_function(&rep, &CurveClass::e(5, 2).unwrap()).unwrap();
        let ech = rep_to_chain(&rep, &PantsDecomposition::through_e(5, 2).unwrap()).unwrap();
        let coords = extract_coords(&ech).unwrap();
        assert!((coords.beta[1] - eps2).abs() < 1e-9);
    }

    #[test]
    fn angle_function_is_a_class_function() {
        let (_, ch) = five();
        let rep = chain_to_rep(&ch).unwrap();
        let g = Isometry::from_entries(0.2, -1.4, 0.9, 2.0).unwrap();
        let curves = fingerprint_curves(5).unwrap();
        let f1 = fingerprint(&rep, &curves, 1e-6).unwrap();
        let f2 = fingerprint(&rep.conjugate(&g), &curves, 1e-6).unwrap();
        assert!(f1.approx_eq(&f2, 1e-10));
        let coarse = fingerprint(&rep, &curves, f64::INFINITY).unwrap();
        assert!(coarse.key.iter().all(|k| *k == 0));
    }

    #[test]
    fn delta_closed_form_matches_four_point() {
        for gamma in [0.0, 0.7, PI / 2.0, 2.9, 4.4] {
            let (_, ch) = sample(&[1.7 * PI, 1.8 * PI, 1.75 * PI, 1.9 * PI], &[0.3, 0.2], &[Some(gamma)]);
            let rep = chain_to_rep(&ch).unwrap();
            let delta = angle_function(&rep, &CurveClass::d(4, 1).unwrap()).unwrap();
            let cf = delta_closed_form(&ch, 1).unwrap();
            assert!(((delta / 2.0).cos() - (cf.k1 * gamma.cos() + cf.k2)).abs() < 1e-9, "γ={gamma}");
            assert!((cf.predicted - delta).abs() < 1e-8);
            if gamma == 0.0 {
                assert!(((delta / 2.0).cos() - (cf.k1 + cf.k2)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn epsilon_closed_form_matches() {
        let (_, ch) = five();
        let rep = chain_to_rep(&ch).unwrap();
        for i in 1..=2 {
            let eps = angle_function(&rep, &CurveClass::e(5, i).unwrap()).unwrap();
            let cf = epsilon_closed_form(&ch, i).unwrap();
            assert!(((eps / 2.0).cos() - (cf.k1 * cf.phase.cos() + cf.k2)).abs() < 1e-9, "i={i}");
        }
    }

    #[test]
    fn restriction_of_a_trailing_degenerate_rep() {
        let (a, ch) = sample(
            &[1.8 * PI, 1.9 * PI, 1.85 * PI, 1.9 * PI, 1.8 * PI],
            &[0.2, 0.3, 0.0],
            &[Some(2.0), None],
        );
        let rep = chain_to_rep(&ch).unwrap();
        let sub = restrict_rep(&rep, 4).unwrap();
        assert!((sub.alpha().lambda() - a.lambda()).abs() < 1e-12);
        let b1 = angle_function(&sub, &CurveClass::b(4, 1).unwrap()).unwrap();
        assert!((b1 - extract_coords(&ch).unwrap().beta[0]).abs() < 1e-10);
        assert!(restrict_rep(&chain_to_rep(&five().1).unwrap(), 4).is_err());
    }

    #[test]
    fn json_round_trip() {
        let (_, ch) = five();
        let rep = chain_to_rep(&ch).unwrap();
        let back = Representation::from_json(&rep.to_json()).unwrap();
        for (g, h) in back.gens().iter().zip(rep.gens()) {
            assert!(g.approx_eq(h, 1e-15));
        }
        assert!(Representation::from_json("[[[1,0],[0,1]]]").is_err());
    }
}
