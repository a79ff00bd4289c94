//! Restriction to a sub-sphere versus twists.
//!
//! On points whose trailing triangles are collapsed, twisting along a curve
//! of the first `n̄ − 1` punctures commutes with restriction, and twisting
//! along a curve outside leaves the restriction unchanged.

use serde::{Deserialize, Serialize};

use crate::chain::{build_chain, restricted_alpha};
use crate::dynamics::flow::dehn_twist;
use crate::error::Result;
use crate::rep::{chain_to_rep, conjugacy_gap, fingerprint, fingerprint_curves, restrict_rep};
use crate::sampling::{random_alpha, random_with_zero_moments};
use crate::surface::CurveClass;

use super::{fmt_num, ExperimentConfig, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueReport {
    pub config: ExperimentConfig,
    pub nbar: usize,
    pub points: usize,
    /// Worst conjugacy gap of `restrict ∘ τ` against `τ ∘ restrict`.
    pub max_commutation_gap: f64,
    pub max_commutation_fingerprint: f64,
    /// Worst change of the restriction under twists supported outside.
    pub max_outside_gap: f64,
    pub max_lambda_residual: f64,
    pub inside_curves: Vec<String>,
    pub outside_curves: Vec<String>,
    pub passed: bool,
}

pub fn gluing_consistency(cfg: &ExperimentConfig) -> Result<GlueReport> {
    glue_run(cfg).map(|(r, _)| r)
}

pub(crate) fn glue_run(cfg: &ExperimentConfig) -> Result<(GlueReport, Table)> {
    cfg.validate()?;
    let n = cfg.n;
    let nbar = cfg.nbar();
    let mut inside: Vec<(CurveClass, CurveClass)> = Vec::new();
    for i in 1..=nbar - 3 {
        inside.push((CurveClass::b(n, i)?, CurveClass::b(nbar, i)?));
        inside.push((CurveClass::d(n, i)?, CurveClass::d(nbar, i)?));
        inside.push((CurveClass::e(n, i)?, CurveClass::e(nbar, i)?));
    }
    let mut outside: Vec<CurveClass> = (nbar - 2..=n - 3).map(|i| CurveClass::b(n, i)).collect::<Result<_>>()?;
    outside.extend((nbar..n).map(|j| CurveClass::pair(n, j)).collect::<Result<Vec<_>>>()?);
    let sub_curves = fingerprint_curves(nbar)?;

    let mut rng = cfg.rng(4);
    let zeros: Vec<usize> = (nbar - 2..n - 2).collect();
    let mut table = Table::new(&["point", "curve", "side", "gap", "fingerprint_diff"]);
    let (mut comm, mut comm_fp, mut out_gap, mut lam) = (0f64, 0f64, 0f64, 0f64);
    for p in 0..cfg.samples {
        let alpha = match &cfg.alpha {
            Some(_) => cfg.alpha_vector()?,
            None => random_alpha(&mut rng, n)?,
        };
        lam = lam.max((restricted_alpha(&alpha, nbar)?.lambda() - alpha.lambda()).abs());
        let coords = random_with_zero_moments(&mut rng, &alpha, &zeros, cfg.margin)?;
        let rep = chain_to_rep(&build_chain(&alpha, &coords)?)?;
        let sub = restrict_rep(&rep, nbar)?;
        let sub_fp = fingerprint(&sub, &sub_curves, cfg.quantum)?;
        for (big, small) in &inside {
            let a = restrict_rep(&dehn_twist(&rep, big)?, nbar)?;
            let b = dehn_twist(&sub, small)?;
            let gap = conjugacy_gap(&a, &b)?;
            let fp = fingerprint(&a, &sub_curves, cfg.quantum)?.max_diff(&fingerprint(&b, &sub_curves, cfg.quantum)?);
            comm = comm.max(gap);
            comm_fp = comm_fp.max(fp);
            table.push(vec![p.to_string(), big.to_string(), "inside".into(), fmt_num(gap), fmt_num(fp)]);
        }
        for c in &outside {
            let a = restrict_rep(&dehn_twist(&rep, c)?, nbar)?;
            let gap = conjugacy_gap(&a, &sub)?;
            let fp = fingerprint(&a, &sub_curves, cfg.quantum)?.max_diff(&sub_fp);
            out_gap = out_gap.max(gap);
            table.push(vec![p.to_string(), c.to_string(), "outside".into(), fmt_num(gap), fmt_num(fp)]);
        }
    }
    let tol = cfg.tolerances.glue;
    let report = GlueReport {
        config: cfg.clone(),
        nbar,
        points: cfg.samples,
        max_commutation_gap: comm,
        max_commutation_fingerprint: comm_fp,
        max_outside_gap: out_gap,
        max_lambda_residual: lam,
        inside_curves: inside.iter().map(|(c, _)| c.to_string()).collect(),
        outside_curves: outside.iter().map(|c| c.to_string()).collect(),
        passed: comm < tol && comm_fp < tol && out_gap < tol && lam < 1e-12,
    };
    Ok((report, table))
}
