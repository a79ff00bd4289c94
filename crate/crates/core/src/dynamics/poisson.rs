//! Poisson brackets of angle functions, by central differences along flows and
//! in closed form, and the zero loci of `{β_i, δ_i}` and `{β_i, ε_i}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, extract_coords, ActionAngleCoords, AngleVector, TriangleChain};
use crate::error::{Error, Result};
use crate::hyperbolic::circular_diff;
use crate::rep::{
    angle_function, chain_to_rep, delta_closed_form, epsilon_closed_form, rep_to_chain,
    Representation,
};
use crate::surface::{CurveClass, PantsDecomposition};

use super::flow::flow;

pub const FD_STEP: f64 = 1e-5;

/// `{f, g} = dθ_f(X_g)` by a central difference along the flow of `g`.
pub fn poisson_fd(rep: &Representation, f: &CurveClass, g: &CurveClass, h: f64) -> Result<f64> {
    let plus = angle_function(&flow(rep, g, h)?, f)?;
    let minus = angle_function(&flow(rep, g, -h)?, f)?;
    Ok(circular_diff(plus, minus) / (2.0 * h))
}

/// Rate of change of `γ_i` along the flow of `β_i`, measured on chains.
pub fn gamma_rate(rep: &Representation, i: usize, h: f64) -> Result<f64> {
    let n = rep.n();
    let pants = PantsDecomposition::standard(n)?;
    let b = CurveClass::b(n, i)?;
    let gamma = |r: &Representation| -> Result<f64> {
        extract_coords(&rep_to_chain(r, &pants)?)?.gamma[i - 1]
            .ok_or_else(|| Error::Precondition(format!("gamma_{i} undefined")))
    };
    let plus = gamma(&flow(rep, &b, h)?)?;
    let minus = gamma(&flow(rep, &b, -h)?)?;
    Ok(circular_diff(plus, minus) / (2.0 * h))
}

/// A bracket value from the closed forms together with its amplitude
/// (the value it would take where the sine factor equals ±1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedBracket {
    pub value: f64,
    pub scale: f64,
}

/// `{β_i, δ_i} = −2k1 sin γ_i / sin(δ_i/2) · dγ_i(X_{β_i})`.
pub fn bracket_beta_delta(chain: &TriangleChain, i: usize, dgamma: f64) -> Result<ClosedBracket> {
    let cf = delta_closed_form(chain, i)?;
    let s = (cf.predicted / 2.0).sin();
    Ok(ClosedBracket {
        value: -2.0 * cf.k1 * cf.phase.sin() / s * dgamma,
        scale: (2.0 * cf.k1 * dgamma / s).abs(),
    })
}

/// `{β_i, ε_i} = 2k1′ sin(β_i/2 − γ_i) / sin(ε_i/2) · dγ_i(X_{β_i})`.
pub fn bracket_beta_epsilon(chain: &TriangleChain, i: usize, dgamma: f64) -> Result<ClosedBracket> {
    let cf = epsilon_closed_form(chain, i)?;
    let s = (cf.predicted / 2.0).sin();
    Ok(ClosedBracket {
        value: 2.0 * cf.k1 * cf.phase.sin() / s * dgamma,
        scale: (2.0 * cf.k1 * dgamma / s).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroLocusOptions {
    pub h: f64,
    /// Angular half-width of the windows around the predicted loci.
    pub window: f64,
    /// A bracket is small when below `relative_tol · scale`.
    pub relative_tol: f64,
}

impl Default for ZeroLocusOptions {
    fn default() -> Self {
        ZeroLocusOptions {
            h: FD_STEP,
            window: 1e-4,
            relative_tol: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroLocusReport {
    pub i: usize,
    pub beta: f64,
    pub gamma: f64,
    pub bracket_delta: f64,
    pub bracket_epsilon: f64,
    pub scale_delta: f64,
    pub scale_epsilon: f64,
    /// Angular distance from `γ_i` to `{0, π}`.
    pub delta_locus_distance: f64,
    /// Angular distance from `γ_i` to `{β_i/2, β_i/2 − π}`.
    pub epsilon_locus_distance: f64,
    pub in_delta_window: bool,
    pub in_epsilon_window: bool,
    pub delta_small: bool,
    pub epsilon_small: bool,
    /// Small brackets exactly inside the windows, and never both small.
    pub consistent: bool,
}

pub fn locus_distance(x: f64, loci: &[f64]) -> f64 {
    loci.iter()
        .map(|l| circular_diff(x, *l).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Finite-difference brackets `{β_i, δ_i}`, `{β_i, ε_i}` at a regular point,
/// compared against the predicted zero loci.
pub fn poisson_zero_locus_check(
    alpha: &AngleVector,
    coords: &ActionAngleCoords,
    i: usize,
    opts: &ZeroLocusOptions,
) -> Result<ZeroLocusReport> {
    let chain = build_chain(alpha, coords)?;
    let rep = chain_to_rep(&chain)?;
    zero_locus_at(&rep, &chain, i, opts)
}

pub(crate) fn zero_locus_at(
    rep: &Representation,
    chain: &TriangleChain,
    i: usize,
    opts: &ZeroLocusOptions,
) -> Result<ZeroLocusReport> {
    let n = rep.n();
    let coords = extract_coords(chain)?;
    let beta = coords.beta[i - 1];
    let gamma = coords.gamma[i - 1]
        .ok_or_else(|| Error::Precondition(format!("gamma_{i} undefined: point is not regular")))?;
    let b = CurveClass::b(n, i)?;
    let bracket_delta = poisson_fd(rep, &b, &CurveClass::d(n, i)?, opts.h)?;
    let bracket_epsilon = poisson_fd(rep, &b, &CurveClass::e(n, i)?, opts.h)?;
    let dgamma = gamma_rate(rep, i, opts.h)?;
    let scale_delta = bracket_beta_delta(chain, i, dgamma)?.scale;
    let scale_epsilon = bracket_beta_epsilon(chain, i, dgamma)?.scale;
    let delta_locus_distance = locus_distance(gamma, &[0.0, PI]);
    let epsilon_locus_distance = locus_distance(gamma, &[beta / 2.0, beta / 2.0 - PI]);
    let in_delta_window = delta_locus_distance < opts.window;
    let in_epsilon_window = epsilon_locus_distance < opts.window;
    let delta_small = bracket_delta.abs() < opts.relative_tol * scale_delta;
    let epsilon_small = bracket_epsilon.abs() < opts.relative_tol * scale_epsilon;
    let consistent =
        in_delta_window == delta_small && in_epsilon_window == epsilon_small && !(delta_small && epsilon_small);
    Ok(ZeroLocusReport {
        i,
        beta,
        gamma,
        bracket_delta,
        bracket_epsilon,
        scale_delta,
        scale_epsilon,
        delta_locus_distance,
        epsilon_locus_distance,
        in_delta_window,
        in_epsilon_window,
        delta_small,
        epsilon_small,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::beta_from_moments;

    fn four(gamma: f64) -> (AngleVector, ActionAngleCoords) {
        let a = AngleVector::new(vec![1.7 * PI, 1.8 * PI, 1.75 * PI, 1.9 * PI]).unwrap();
        let beta = beta_from_moments(&a, &[0.3, 0.2]).unwrap();
        (a, ActionAngleCoords::regular(beta, vec![gamma]))
    }

    fn rep_of(a: &AngleVector, c: &ActionAngleCoords) -> Representation {
        chain_to_rep(&build_chain(a, c).unwrap()).unwrap()
    }

    #[test]
    fn gamma_rate_is_two() {
        let (a, c) = four(1.3);
        assert!((gamma_rate(&rep_of(&a, &c), 1, FD_STEP).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn self_bracket_and_disjoint_brackets_vanish() {
        let a = AngleVector::new(vec![1.8 * PI, 1.9 * PI, 1.85 * PI, 1.75 * PI, 1.9 * PI]).unwrap();
        let beta = beta_from_moments(&a, &[0.1, 0.25, 0.15]).unwrap();
        let rep = rep_of(&a, &ActionAngleCoords::regular(beta, vec![1.0, 2.0]));
        let (b1, b2, d1) = (
            CurveClass::b(5, 1).unwrap(),
            CurveClass::b(5, 2).unwrap(),
            CurveClass::d(5, 1).unwrap(),
        );
        assert!(poisson_fd(&rep, &d1, &d1, FD_STEP).unwrap().abs() < 1e-8);
        assert!(poisson_fd(&rep, &b1, &b2, FD_STEP).unwrap().abs() < 1e-8);
        assert!(poisson_fd(&rep, &b2, &d1, FD_STEP).unwrap().abs() < 1e-8);
    }

    #[test]
    fn closed_form_bracket_at_quarter_turn() {
        let (a, c) = four(PI / 2.0);
        let chain = build_chain(&a, &c).unwrap();
        let rep = chain_to_rep(&chain).unwrap();
        let fd = poisson_fd(&rep, &CurveClass::b(4, 1).unwrap(), &CurveClass::d(4, 1).unwrap(), FD_STEP).unwrap();
        let closed = bracket_beta_delta(&chain, 1, 2.0).unwrap();
        assert!((fd - closed.value).abs() < 1e-5, "{fd} vs {}", closed.value);
        let anti = poisson_fd(&rep, &CurveClass::d(4, 1).unwrap(), &CurveClass::b(4, 1).unwrap(), FD_STEP).unwrap();
        assert!((fd + anti).abs() < 1e-8);
    }

    #[test]
    fn zero_loci() {
        let (a, c) = four(0.0);
        let r = poisson_zero_locus_check(&a, &c, 1, &ZeroLocusOptions::default()).unwrap();
        assert!(r.delta_small && !r.epsilon_small && r.consistent, "{r:?}");

        let beta = c.beta[0];
        let (a, c) = four(beta / 2.0);
        let r = poisson_zero_locus_check(&a, &c, 1, &ZeroLocusOptions::default()).unwrap();
        assert!(r.epsilon_small && !r.delta_small && r.consistent, "{r:?}");

        let (a, c) = four(PI / 2.0);
        let r = poisson_zero_locus_check(&a, &c, 1, &ZeroLocusOptions::default()).unwrap();
        assert!(!r.epsilon_small && !r.delta_small && r.consistent);
    }
}
