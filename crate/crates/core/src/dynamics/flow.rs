//! Hamiltonian flows of angle functions and the Dehn twists they interpolate.
//!
//! The flow of `θ_a` for a separating curve `a` conjugates the generators on
//! one side of `a` by a rotation about the fixed point of `ρ(a)`: by `2t` when
//! the word of `a` is the inverse of the inside product (`b_i`, `d_i`, `e_i`),
//! by `−2t` when it is the product itself (pair curves). The flow is therefore
//! π-periodic and its time-`θ_a/2` map is conjugation by `ρ(a)^{±1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{rotation_about, Isometry};
use crate::rep::{angle_function, rep_moments, Representation};
use crate::surface::{twist_side, CurveClass, CurveLabel};

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSpec {
    pub curve: CurveClass,
    pub t: f64,
}

fn orientation(curve: &CurveClass) -> Result<f64> {
    match curve.label() {
        CurveLabel::B(_) | CurveLabel::D(_) | CurveLabel::E(_) => Ok(1.0),
        CurveLabel::Pair(_) => Ok(-1.0),
        CurveLabel::Custom => Err(Error::NoTwistSide(curve.to_string())),
    }
}

/// Conjugates the inside generators of `curve` by `r`, an element commuting
/// with `ρ(curve)`, keeping the product relation.
fn conjugate_side(rep: &Representation, curve: &CurveClass, r: &Isometry) -> Result<Representation> {
    let n = rep.n();
    let side = twist_side(curve, n)?;
    let mut gens = rep.gens().to_vec();
    for &k in &side.inside {
        gens[k - 1] = rep.gens()[k - 1].conjugate_by(r);
    }
    if let CurveLabel::E(i) = curve.label() {
        // c_{i+1} sits between the inside generators; conjugating it by
        // Q = r c_{i+2} r⁻¹ c_{i+2}⁻¹ is the twist read in the presentation where e_i is a pants curve.
        let g = rep.gens()[i + 1];
        let q = r.compose(&g).compose(&r.inverse()).compose(&g.inverse());
        gens[i] = rep.gens()[i].conjugate_by(&q);
    }
    Ok(Representation::from_parts(gens, rep.alpha().clone()))
}

fn elliptic_image(rep: &Representation, curve: &CurveClass) -> Result<(Isometry, crate::hyperbolic::HPoint)> {
    let g = rep.image(curve);
    let (_, fix) = g.elliptic().ok_or_else(|| Error::NonElliptic {
        curve: curve.to_string(),
        trace: g.trace().abs(),
    })?;
    Ok((g, fix))
}

/// Time-`t` map of the Hamiltonian flow of `θ_curve`.
pub fn flow(rep: &Representation, curve: &CurveClass, t: f64) -> Result<Representation> {
    let sign = orientation(curve)?;
    let (_, fix) = elliptic_image(rep, curve)?;
    conjugate_side(rep, curve, &rotation_about(fix, sign * 2.0 * t))
}

/// Dehn twist along `curve`.
pub fn dehn_twist(rep: &Representation, curve: &CurveClass) -> Result<Representation> {
    let sign = orientation(curve)?;
    let (g, _) = elliptic_image(rep, curve)?;
    conjugate_side(rep, curve, &if sign > 0.0 { g } else { g.inverse() })
}

pub fn dehn_twist_inverse(rep: &Representation, curve: &CurveClass) -> Result<Representation> {
    let sign = orientation(curve)?;
    let (g, _) = elliptic_image(rep, curve)?;
    conjugate_side(rep, curve, &if sign > 0.0 { g.inverse() } else { g })
}

/// `Φ_{f_1}^{t_1} ∘ ⋯ ∘ Φ_{f_k}^{t_k}(rep)`: the last `FlowSpec` acts first.
pub fn local_parametrization(rep: &Representation, specs: &[FlowSpec]) -> Result<Representation> {
    specs
        .iter()
        .rev()
        .try_fold(rep.clone(), |r, s| flow(&r, &s.curve, s.t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UndegenerateOutcome {
    pub mu_before: Vec<f64>,
    pub mu_after: Vec<f64>,
    /// Whether `β_{i′+2} = α_{i′+3}` and `β_{i′} = 2π − α_{i′+2}` held (to 1e-9).
    pub exceptional: bool,
}

/// Twist along the pair curve `c_{i′+2}c_{i′+3}` at a point where triangle `i′`
/// is collapsed and triangle `i′+1` is not.
pub fn undegenerate_twist(rep: &Representation, i_prime: usize) -> Result<(Representation, UndegenerateOutcome)> {
    let n = rep.n();
    if i_prime + 4 > n {
        return Err(Error::Precondition(format!("need i′ ≤ n − 4, got {i_prime}")));
    }
    let lambda = rep.alpha().lambda();
    let mu_before = rep_moments(rep)?;
    let tol = crate::chain::EPS_AREA;
    if lambda * mu_before[i_prime] >= tol || lambda * mu_before[i_prime + 1] < tol {
        return Err(Error::Precondition(format!(
            "need mu_{i_prime} = 0 and mu_{} ≠ 0, found {} and {}",
            i_prime + 1,
            mu_before[i_prime],
            mu_before[i_prime + 1]
        )));
    }
    let beta_ext = |k: usize| -> Result<f64> {
        let a = rep.alpha();
        if k == 0 {
            Ok(std::f64::consts::TAU - a.get(1))
        } else if k == n - 2 {
            Ok(a.get(n))
        } else {
            angle_function(rep, &CurveClass::b(n, k)?)
        }
    };
    let a = rep.alpha();
    let exceptional = (beta_ext(i_prime + 2)? - a.get(i_prime + 3)).abs() < 1e-9
        && (beta_ext(i_prime)? - (std::f64::consts::TAU - a.get(i_prime + 2))).abs() < 1e-9;
    let out = dehn_twist(rep, &CurveClass::pair(n, i_prime + 2)?)?;
    let mu_after = rep_moments(&out)?;
    Ok((
        out,
        UndegenerateOutcome {
            mu_before,
            mu_after,
            exceptional,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{beta_from_moments, build_chain, extract_coords, ActionAngleCoords, AngleVector};
    use crate::hyperbolic::circular_diff;
    use crate::rep::{chain_to_rep, fingerprint, fingerprint_curves, rep_to_chain};
    use crate::surface::PantsDecomposition;
    use std::f64::consts::PI;

    fn point(gamma: &[f64]) -> Representation {
        let a = AngleVector::new(vec![1.8 * PI, 1.9 * PI, 1.85 * PI, 1.75 * PI, 1.9 * PI]).unwrap();
        let beta = beta_from_moments(&a, &[0.1, 0.25, 0.15]).unwrap();
        chain_to_rep(&build_chain(&a, &ActionAngleCoords::regular(beta, gamma.to_vec())).unwrap()).unwrap()
    }

    fn coords(rep: &Representation) -> ActionAngleCoords {
        extract_coords(&rep_to_chain(rep, &PantsDecomposition::standard(rep.n()).unwrap()).unwrap()).unwrap()
    }

    fn all_curves(n: usize) -> Vec<CurveClass> {
        let mut v = fingerprint_curves(n).unwrap();
        v.extend((1..n).map(|j| CurveClass::pair(n, j).unwrap()));
        v
    }

    #[test]
    fn flows_preserve_the_relation_and_their_hamiltonian() {
        let rep = point(&[1.0, 2.0]);
        for c in all_curves(5) {
            let out = flow(&rep, &c, 0.37).unwrap();
            assert!(out.product_residual() < 1e-12, "{c}");
            let before = angle_function(&rep, &c).unwrap();
            let after = angle_function(&out, &c).unwrap();
            assert!((before - after).abs() < 1e-10, "{c}");
            assert!(Representation::new(out.gens().to_vec(), out.alpha().clone()).is_ok());
        }
    }

    #[test]
    fn flow_of_b_advances_gamma_by_twice_the_time() {
        let rep = point(&[1.0, 2.0]);
        let before = coords(&rep);
        let after = coords(&flow(&rep, &CurveClass::b(5, 1).unwrap(), 0.3).unwrap());
        assert!(circular_diff(after.gamma[0].unwrap(), before.gamma[0].unwrap() + 0.6).abs() < 1e-9);
        assert!(circular_diff(after.gamma[1].unwrap(), before.gamma[1].unwrap()).abs() < 1e-9);
        for (x, y) in before.beta.iter().zip(&after.beta) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn twist_equals_flow_at_half_angle_and_inverts() {
        let rep = point(&[0.4, 5.0]);
        let curves = fingerprint_curves(5).unwrap();
        for c in all_curves(5) {
            let theta = angle_function(&rep, &c).unwrap();
            let f1 = fingerprint(&dehn_twist(&rep, &c).unwrap(), &curves, 1e-6).unwrap();
            let f2 = fingerprint(&flow(&rep, &c, theta / 2.0).unwrap(), &curves, 1e-6).unwrap();
            assert!(f1.approx_eq(&f2, 1e-9), "{c}");
            let back = dehn_twist_inverse(&dehn_twist(&rep, &c).unwrap(), &c).unwrap();
            let f0 = fingerprint(&rep, &curves, 1e-6).unwrap();
            assert!(fingerprint(&back, &curves, 1e-6).unwrap().approx_eq(&f0, 1e-9));
        }
    }

    #[test]
    fn zero_time_and_local_parametrization() {
        let rep = point(&[0.4, 5.0]);
        let b1 = CurveClass::b(5, 1).unwrap();
        let same = |x: &Representation, y: &Representation| {
            x.gens().iter().zip(y.gens()).all(|(g, h)| g.approx_eq(h, 1e-14))
        };
        assert!(same(&flow(&rep, &b1, 0.0).unwrap(), &rep));
        let d2 = CurveClass::d(5, 2).unwrap();
        let specs = [FlowSpec { curve: b1.clone(), t: 0.2 }, FlowSpec { curve: d2.clone(), t: -0.1 }];
        let composed = local_parametrization(&rep, &specs).unwrap();
        let manual = flow(&flow(&rep, &d2, -0.1).unwrap(), &b1, 0.2).unwrap();
        assert!(same(&composed, &manual));
        let zero = [FlowSpec { curve: b1, t: 0.0 }, FlowSpec { curve: d2, t: 0.0 }];
        assert!(same(&local_parametrization(&rep, &zero).unwrap(), &rep));
    }

    #[test]
    fn b_twists_fix_exactly_the_points_with_a_collapsed_side() {
        use crate::rep::conjugacy_gap;
        use crate::sampling::{random_alpha, random_with_zero_moments};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = random_alpha(&mut rng, 6).unwrap();
        // b_i is fixed iff μ_0 = ⋯ = μ_{i−1} = 0 or μ_i = ⋯ = μ_{n−3} = 0.
        for (zeros, fixed) in [
            (vec![], [false, false, false]),
            (vec![0], [true, false, false]),
            (vec![0, 1], [true, true, false]),
            (vec![1], [false, false, false]),
            (vec![2, 3], [false, true, true]),
            (vec![1, 2, 3], [true, true, true]),
        ] {
            let c = random_with_zero_moments(&mut rng, &a, &zeros, 0.02).unwrap();
            let rep = chain_to_rep(&build_chain(&a, &c).unwrap()).unwrap();
            for i in 1..=3 {
                let gap = conjugacy_gap(&rep, &dehn_twist(&rep, &CurveClass::b(6, i).unwrap()).unwrap()).unwrap();
                assert_eq!(gap < 1e-9, fixed[i - 1], "zeros {zeros:?}, b_{i}: gap {gap}");
            }
        }
    }

    #[test]
    fn custom_curves_cannot_flow() {
        let rep = point(&[0.4, 5.0]);
        let w = CurveClass::custom(vec![1, 3]).unwrap();
        assert!(matches!(flow(&rep, &w, 0.1), Err(Error::NoTwistSide(_))));
    }
}
