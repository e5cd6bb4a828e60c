use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{DyadicFrame, KashinFrame};
use crate::error::{invalid, Result};
use crate::quantizers::{dyadic_quantize, kashin_quantize, QuantizationResult};
use crate::rng;

/// Quantizer under test, paired with the frame it runs on.
#[derive(Debug, Clone, Copy)]
pub enum BcnqpQuantizer<'a> {
    /// Step fixed at 1.
    Dyadic(&'a DyadicFrame),
    /// Runs on the frame `u_i/√N` at the given step.
    Kashin(&'a KashinFrame, f64),
}

impl BcnqpQuantizer<'_> {
    pub fn delta(&self) -> f64 {
        match *self {
            BcnqpQuantizer::Dyadic(_) => 1.0,
            BcnqpQuantizer::Kashin(_, delta) => delta,
        }
    }

    pub fn frame_len(&self) -> usize {
        match *self {
            BcnqpQuantizer::Dyadic(df) => df.len(),
            BcnqpQuantizer::Kashin(kf, _) => kf.big_n,
        }
    }

    fn run(&self, a: &[f64]) -> Result<QuantizationResult> {
        match *self {
            BcnqpQuantizer::Dyadic(df) => dyadic_quantize(df, a),
            BcnqpQuantizer::Kashin(kf, delta) => {
                let frame = kf.quantization_frame();
                kashin_quantize(kf, &frame.synthesis(a)?, delta)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BcnqpReport {
    pub trials: usize,
    pub delta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub epsilon: f64,
    /// Largest `‖x − Σ δ k_i x_i‖` over trials that produced coefficients.
    pub worst_error: f64,
    /// Largest `max_i |δ k_i|`.
    pub worst_coeff: f64,
    /// Trials breaking the error or the coefficient bound.
    pub failures: usize,
    /// Trials on which the quantizer itself returned an error.
    pub quantizer_errors: usize,
    pub pass: bool,
}

/// Draws `a ∈ [−1, 1]^N`, quantizes `x = Σ a_i x_i` and checks
/// `‖x − Σ δ k_i x_i‖ ≤ ε` and `max|δ k_i| ≤ C` on every trial.
pub fn bcnqp_sample_test(
    quantizer: BcnqpQuantizer<'_>,
    c: f64,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<BcnqpReport> {
    if !(c >= 0.0 && epsilon >= 0.0) {
        return Err(invalid(format!("need C, ε ≥ 0, got {c}, {epsilon}")));
    }
    let mut r = rng::seeded(seed);
    let draws: Vec<Vec<f64>> = (0..trials).map(|_| rng::cube_point(&mut r, quantizer.frame_len())).collect();
    let outcomes: Vec<Option<(f64, f64)>> =
        draws.par_iter().map(|a| quantizer.run(a).ok().map(|q| (q.error, q.coeff_bound))).collect();
    let coeff_limit = c * (1.0 + 1e-12);
    let mut report = BcnqpReport {
        trials,
        delta: quantizer.delta(),
        c,
        epsilon,
        worst_error: 0.0,
        worst_coeff: 0.0,
        failures: 0,
        quantizer_errors: 0,
        pass: true,
    };
    for outcome in outcomes {
        match outcome {
            Some((err, coeff)) => {
                report.worst_error = report.worst_error.max(err);
                report.worst_coeff = report.worst_coeff.max(coeff);
                if err > epsilon || coeff > coeff_limit {
                    report.failures += 1;
                }
            }
            None => report.quantizer_errors += 1,
        }
    }
    report.pass = report.failures == 0 && report.quantizer_errors == 0;
    Ok(report)
}
