//! Detection of rotation angles that are rational multiples of 2π.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub const DEFAULT_Q_MAX: u64 = 10_000;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalAngleReport {
    pub angle: f64,
    /// `(p, q)` in lowest terms with `|angle − 2πp/q| ≤ tol`.
    #[serde(rename = "match")]
    pub matched: Option<(u64, u64)>,
    /// The convergent that was tested and its error, matched or not.
    pub best: (u64, u64),
    pub error: f64,
    pub q_max: u64,
    pub tol: f64,
}

/// Tests the last continued-fraction convergent of `angle/2π` with denominator
/// at most `q_max`.
pub fn rational_angle(angle: f64, q_max: u64, tol: f64) -> RationalAngleReport {
    let x = angle / TAU;
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    let mut best = (x.round() as u64, 1u64);
    loop {
        let a = rest.floor();
        if !a.is_finite() || a > 1e15 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > q_max {
            break;
        }
        best = (p2, q2);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac.abs() < 1e-15 || (TAU * p2 as f64 / q2 as f64 - angle).abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    let error = (angle - TAU * best.0 as f64 / best.1 as f64).abs();
    RationalAngleReport {
        angle,
        matched: (error <= tol).then_some(best),
        best,
        error,
        q_max,
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Exhaustive search: the smallest denominator within `tol`, if any.
    fn brute(angle: f64, q_max: u64, tol: f64) -> Option<(u64, u64)> {
        let x = angle / TAU;
        (1..=q_max).find_map(|q| {
            let p = (x * q as f64).round() as u64;
            ((angle - TAU * p as f64 / q as f64).abs() <= tol).then_some((p, q))
        })
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn half_turn() {
        assert_eq!(rational_angle(PI, DEFAULT_Q_MAX, DEFAULT_TOL).matched, Some((1, 2)));
    }

    #[test]
    fn within_tolerance() {
        let r = rational_angle(TAU / 3.0 + 5e-9, DEFAULT_Q_MAX, DEFAULT_TOL);
        assert_eq!(r.matched, Some((1, 3)));
    }

    #[test]
    fn golden_ratio_is_rejected() {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let r = rational_angle(TAU * phi, DEFAULT_Q_MAX, DEFAULT_TOL);
        assert_eq!(r.matched, None);
        assert_eq!(r.best, (4181, 6765));
        assert_eq!(brute(TAU * phi, DEFAULT_Q_MAX, DEFAULT_TOL), None);
    }

    #[test]
    fn planted_rationals_agree_with_brute_force() {
        for q in 2..=100u64 {
            for p in 1..q {
                if gcd(p, q) != 1 {
                    continue;
                }
                let angle = TAU * p as f64 / q as f64;
                let r = rational_angle(angle, DEFAULT_Q_MAX, DEFAULT_TOL);
                assert_eq!(r.matched, Some((p, q)), "{p}/{q}");
                assert_eq!(brute(angle, 100, DEFAULT_TOL), Some((p, q)));
            }
        }
    }
}
