use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::bcnqp::{bcnqp_sample_test, BcnqpQuantizer};
use super::formulas::{counting_lower_bound, min_norm_ratio, frame_length_lower_bound, BoundParams};
use crate::constructions::{dyadic_frame, kashin_frame};
use crate::error::{invalid, Result};
use crate::frame_core::Frame;
use crate::norm::LpNorm;

pub const CSV_HEADER: &str =
    "n,N,delta,C,epsilon_target,epsilon_measured,worst_coeff,cardinality,eq433_lnN,thm56_N_lower,pass,seed,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Dyadic frame over the standard basis with `m = ⌈2 log₂ n⌉`.
    Dyadic,
    /// Kashin frame of length `kashin_ratio · n`.
    Kashin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub trials: usize,
    pub seed: u64,
    /// Defaults: 1 for dyadic, 0.05 for Kashin.
    pub delta: Option<f64>,
    /// Defaults: 3 for dyadic, `K_hat + δ` for Kashin.
    pub c: Option<f64>,
    /// Defaults: 1.07 for dyadic, `δ/2 + 0.005` for Kashin.
    pub epsilon_target: Option<f64>,
    pub kashin_ratio: usize,
    pub kashin_trial_samples: usize,
    pub bound_params: BoundParams,
    /// Records wall time per row. Off by default so output stays reproducible.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kind: SweepKind::Dyadic,
            trials: 1000,
            seed: 0,
            delta: None,
            c: None,
            epsilon_target: None,
            kashin_ratio: 3,
            kashin_trial_samples: 64,
            bound_params: BoundParams::default(),
            timing: false,
        }
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub delta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub epsilon_target: f64,
    pub epsilon_measured: f64,
    pub worst_coeff: f64,
    pub cardinality: Option<usize>,
    /// `eq433_lnN` (absent when ε ≥ 1), `thm56_N_lower`, `min_norm_ratio`,
    /// `length_ratio_q = N/n` and `n_log2n_ratio = N/(n log₂ n)`.
    pub bound_values: BTreeMap<String, f64>,
    pub pass: bool,
    pub seed: u64,
    pub wall_ms: u64,
}

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.big_n,
            self.delta,
            self.c,
            self.epsilon_target,
            self.epsilon_measured,
            self.worst_coeff,
            self.cardinality.map(|c| c.to_string()).unwrap_or_default(),
            opt(self.bound_values.get("eq433_lnN").copied()),
            opt(self.bound_values.get("thm56_N_lower").copied()),
            self.pass,
            self.seed,
            self.wall_ms
        )
    }

    pub fn to_csv(records: &[ExperimentRecord]) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in records {
            let _ = writeln!(out, "{}", r.csv_row());
        }
        out
    }

    /// JSON mirror of the CSV plus the constants the bounds were evaluated with.
    pub fn to_json(records: &[ExperimentRecord], config: &SweepConfig) -> serde_json::Value {
        let p = &config.bound_params;
        json!({
            "bound_params": {
                "cotype_q": p.cotype_q,
                "C_q": p.c_q,
                "K_Z": p.k_z,
                "f": p.f,
                "g": p.g,
                "d": p.d,
                "A": p.a_const,
                "unnormalized": p.unnormalized(),
            },
            "config": config,
            "records": records,
        })
    }
}

/// Seed of the record for dimension `n`; independent of the other dimensions.
pub(crate) fn record_seed(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn run_one(n: usize, cfg: &SweepConfig) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let seed = record_seed(cfg.seed, n);
    let (frame, big_n, delta, c, eps, report, extra): (Frame, _, _, _, _, _, Option<f64>) = match cfg.kind {
        SweepKind::Dyadic => {
            let m = (2.0 * (n as f64).log2()).ceil().max(1.0) as usize;
            let df = dyadic_frame(&Frame::orthonormal_basis(n, LpNorm::L2)?, m)?;
            let c = cfg.c.unwrap_or(3.0);
            let eps = cfg.epsilon_target.unwrap_or(1.07);
            let report = bcnqp_sample_test(BcnqpQuantizer::Dyadic(&df), c, eps, cfg.trials, seed)?;
            let bound = 1.0 + n as f64 * 0.5f64.powi(m as i32) / (1.0 - 0.5f64.powi(m as i32));
            (df.frame.clone(), df.len(), 1.0, c, eps, report, Some(bound))
        }
        SweepKind::Kashin => {
            let kf = kashin_frame(n, cfg.kashin_ratio * n, seed, cfg.kashin_trial_samples)?;
            let delta = cfg.delta.unwrap_or(0.05);
            let c = cfg.c.unwrap_or(kf.k_hat + delta);
            let eps = cfg.epsilon_target.unwrap_or(delta / 2.0 + 0.005);
            let report = bcnqp_sample_test(BcnqpQuantizer::Kashin(&kf, delta), c, eps, cfg.trials, seed)?;
            (kf.quantization_frame(), kf.big_n, delta, c, eps, report, None)
        }
    };
    let p = &cfg.bound_params;
    let mut bound_values = BTreeMap::new();
    if eps < 1.0 {
        bound_values.insert("eq433_lnN".into(), counting_lower_bound(n, eps, delta, c, p.k_z, &p.f)?);
    }
    bound_values.insert("thm56_N_lower".into(), frame_length_lower_bound(n, p.cotype_q, delta, c));
    bound_values.insert("min_norm_ratio".into(), min_norm_ratio(&frame)?);
    bound_values.insert("length_ratio_q".into(), big_n as f64 / n as f64);
    if n >= 2 {
        bound_values.insert("n_log2n_ratio".into(), big_n as f64 / (n as f64 * (n as f64).log2()));
    }
    if let Some(b) = extra {
        bound_values.insert("epsilon_bound".into(), b);
    }
    Ok(ExperimentRecord {
        n,
        big_n,
        delta,
        c,
        epsilon_target: eps,
        epsilon_measured: report.worst_error,
        worst_coeff: report.worst_coeff,
        cardinality: None,
        bound_values,
        pass: report.pass,
        seed,
        wall_ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

/// Runs the sampling test per dimension in parallel. Records come back in
/// the order of `dims` and each depends only on `(n, config)`.
pub fn scaling_sweep(dims: &[usize], config: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    if dims.is_empty() || dims.windows(2).any(|w| w[0] >= w[1]) || dims[0] == 0 {
        return Err(invalid(format!("dims {dims:?} must be positive and strictly increasing")));
    }
    if config.kind == SweepKind::Dyadic && config.delta.is_some_and(|d| d != 1.0) {
        return Err(invalid("the dyadic quantizer works at δ = 1"));
    }
    if config.kashin_ratio == 0 {
        return Err(invalid("kashin_ratio must be positive"));
    }
    config.bound_params.validate()?;
    dims.par_iter().map(|&n| run_one(n, config)).collect()
}
