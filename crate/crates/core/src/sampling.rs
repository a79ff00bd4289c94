//! Random and constructed points of the component: angle vectors, interior
//! points of the moment polytope, boundary strata and their twist-relevant
//! special cases.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::chain::{beta_from_moments, moment_map, ActionAngleCoords, AngleVector, EPS_AREA};
use crate::error::{Error, Result};

/// Angle vector with `Σ(2π − α_p) = 2πr`, `r ∈ (0.15, 0.85)`, split with
/// weights in `(0.2, 1)` so no angle sits too close to 2π.
pub fn random_alpha<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<AngleVector> {
    let r = rng.gen_range(0.15..0.85);
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = w.iter().sum();
    AngleVector::new(w.iter().map(|wi| TAU - TAU * r * wi / total).collect())
}

/// Uniform point of `{μ ∈ ℝ^m : Σμ = 1/2, μ_k ≥ margin}`.
pub fn random_moments<R: Rng + ?Sized>(rng: &mut R, m: usize, margin: f64) -> Result<Vec<f64>> {
    let free = 0.5 - m as f64 * margin;
    if m == 0 || free < 0.0 {
        return Err(Error::Precondition(format!("no room for {m} moments with margin {margin}")));
    }
    // Normalized exponentials are uniform on the simplex.
    let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    Ok(e.iter().map(|x| margin + free * x / s).collect())
}

/// `γ_k` is needed exactly when both triangles meeting at `B_k` are non-degenerate.
pub fn gamma_required(alpha: &AngleVector, mu: &[f64], k: usize) -> bool {
    let lambda = alpha.lambda();
    lambda * mu[k - 1] > EPS_AREA && lambda * mu[k] > EPS_AREA
}

fn coords_for_moments<R: Rng + ?Sized>(rng: &mut R, alpha: &AngleVector, mu: &[f64]) -> Result<ActionAngleCoords> {
    let beta = beta_from_moments(alpha, mu)?;
    let gamma = (1..alpha.n() - 2)
        .map(|k| gamma_required(alpha, mu, k).then(|| rng.gen_range(0.0..TAU)))
        .collect();
    Ok(ActionAngleCoords { beta, gamma })
}

/// Regular point with every `μ_k ≥ margin` and uniform `γ`.
pub fn random_regular<R: Rng + ?Sized>(rng: &mut R, alpha: &AngleVector, margin: f64) -> Result<ActionAngleCoords> {
    let mu = random_moments(rng, alpha.n() - 2, margin)?;
    coords_for_moments(rng, alpha, &mu)
}

/// Point with `μ_k = 0` for `k ∈ zeros` and `μ_k ≥ margin` otherwise; `γ` is
/// set only where required.
pub fn random_with_zero_moments<R: Rng + ?Sized>(
    rng: &mut R,
    alpha: &AngleVector,
    zeros: &[usize],
    margin: f64,
) -> Result<ActionAngleCoords> {
    let m = alpha.n() - 2;
    if let Some(k) = zeros.iter().find(|k| **k >= m) {
        return Err(Error::Precondition(format!("no triangle {k} when n = {}", alpha.n())));
    }
    let live: Vec<usize> = (0..m).filter(|k| !zeros.contains(k)).collect();
    let free = random_moments(rng, live.len(), margin)?;
    let mut mu = vec![0.0; m];
    for (k, v) in live.iter().zip(free) {
        mu[*k] = v;
    }
    coords_for_moments(rng, alpha, &mu)
}

/// A point of the stratum where exactly triangle `i′` is collapsed, either
/// generic or with `β̃_{i′} = 2π − α_{i′+2}` and `β̃_{i′+2} = α_{i′+3}` (the
/// case where the pair twist cannot open the triangle). Head and tail blocks
/// of the remaining triangles have their total area fixed by these
/// conditions, so angle vectors are drawn until every block is positive.
pub fn degenerate_point<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    i_prime: usize,
    exceptional: bool,
    margin: f64,
) -> Result<(AngleVector, ActionAngleCoords)> {
    if i_prime + 4 > n {
        return Err(Error::Precondition(format!("need i′ ≤ n − 4, got {i_prime} for n = {n}")));
    }
    if !exceptional {
        let alpha = random_alpha(rng, n)?;
        let coords = random_with_zero_moments(rng, &alpha, &[i_prime], margin)?;
        return Ok((alpha, coords));
    }
    let m = n - 2;
    for _ in 0..10_000 {
        // Punctures outside the pair sit near 2π so the head and tail blocks keep positive area.
        let mut a: Vec<f64> = (1..=n)
            .map(|p| {
                if p == i_prime + 2 || p == i_prime + 3 {
                    rng.gen_range(1.55 * PI..1.8 * PI)
                } else {
                    rng.gen_range(1.9 * PI..1.995 * PI)
                }
            })
            .collect();
        if i_prime == 0 {
            a[0] = a[1];
        }
        if i_prime + 2 == m {
            a[n - 1] = a[n - 2];
        }
        let Ok(alpha) = AngleVector::new(a) else { continue };
        let (ap, aq) = (alpha.get(i_prime + 2), alpha.get(i_prime + 3));
        let two_lambda = 2.0 * alpha.lambda();
        let middle = (ap + aq - 3.0 * PI) / alpha.lambda();
        let head = ((2..=i_prime + 1).map(|p| alpha.get(p) - TAU).sum::<f64>() + alpha.get(1) - ap) / two_lambda;
        let tail = ((i_prime + 4..=n - 1).map(|p| alpha.get(p) - TAU).sum::<f64>() + alpha.get(n) - aq) / two_lambda;
        let head_len = i_prime;
        let tail_len = m - i_prime - 2;
        let enough = |s: f64, len: usize| if len == 0 { true } else { s >= 2.0 * margin * len as f64 };
        if middle < margin || !enough(head, head_len) || !enough(tail, tail_len) {
            continue;
        }
        let mut mu = Vec::with_capacity(m);
        if head_len > 0 {
            mu.extend(random_moments(rng, head_len, margin)?.iter().map(|v| v * 2.0 * head));
        }
        mu.push(0.0);
        mu.push(middle);
        if tail_len > 0 {
            mu.extend(random_moments(rng, tail_len, margin)?.iter().map(|v| v * 2.0 * tail));
        }
        let coords = coords_for_moments(rng, &alpha, &mu)?;
        return Ok((alpha, coords));
    }
    Err(Error::Precondition(format!("no exceptional point found for n = {n}, i′ = {i_prime}")))
}

/// Checks `Σμ = 1/2` and `μ ≥ −tol`.
pub fn in_polytope(alpha: &AngleVector, beta: &[f64], tol: f64) -> bool {
    let mu = moment_map(alpha, beta);
    (mu.sum() - 0.5).abs() < tol && mu.min() > -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::extended_beta;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_points_lie_in_the_polytope() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 4..=9 {
            for _ in 0..50 {
                let a = random_alpha(&mut rng, n).unwrap();
                let c = random_regular(&mut rng, &a, 0.01).unwrap();
                let mu = moment_map(&a, &c.beta);
                assert!((mu.sum() - 0.5).abs() < 1e-12 && mu.min() >= 0.01 - 1e-12);
                assert!(c.gamma.iter().all(Option::is_some));
            }
        }
    }

    #[test]
    fn zero_moments_drop_exactly_the_adjacent_gammas() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_alpha(&mut rng, 7).unwrap();
        let c = random_with_zero_moments(&mut rng, &a, &[0, 1], 0.02).unwrap();
        let mu = moment_map(&a, &c.beta);
        assert!(mu.mu[0].abs() < 1e-12 && mu.mu[1].abs() < 1e-12);
        let present: Vec<bool> = c.gamma.iter().map(Option::is_some).collect();
        assert_eq!(present, vec![false, false, true, true]);
    }

    #[test]
    fn exceptional_points_satisfy_both_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, ip) in [(5, 0), (5, 1), (6, 1), (7, 3), (6, 0)] {
            let (a, c) = degenerate_point(&mut rng, n, ip, true, 0.01).unwrap();
            let bt = extended_beta(&a, &c.beta);
            assert!((bt[ip] - (TAU - a.get(ip + 2))).abs() < 1e-12, "n={n} i′={ip}");
            assert!((bt[ip + 2] - a.get(ip + 3)).abs() < 1e-12, "n={n} i′={ip}");
            let mu = moment_map(&a, &c.beta).mu;
            assert!(mu[ip].abs() < 1e-12 && mu[ip + 1] > 0.0);
            assert!(mu.iter().all(|m| *m > -1e-12));
            assert!((mu.iter().sum::<f64>() - 0.5).abs() < 1e-12);
        }
    }
}
