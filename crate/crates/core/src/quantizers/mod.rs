//! Quantization algorithms and the first-order Σ-Δ recursion.

mod dyadic;
mod iterative;
mod kashin;
mod sigma_delta;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::frame_core::Frame;

pub use dyadic::{dyadic_quantize, signed_dyadic_digits};
pub use iterative::{
    iterative_quantize, validate_base, BaseQuantizer, BaseReport, DualRounding, IterativeQuantizer,
    IterativeQuantizerConfig, CONTRACT_SLACK,
};
pub use kashin::{
    kashin_min_level, kashin_quantize, kashin_represent, KashinRepresentation, KASHIN_MAX_ITER, LEVEL_ESCALATION,
    MAX_ESCALATIONS,
};
pub(crate) use kashin::{dual_refined_level, min_level_with_u};
pub use sigma_delta::{sigma_delta, SigmaDeltaOutput, SigmaDeltaState};

/// Integer coefficients together with what they achieve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationResult {
    pub k: Vec<i64>,
    pub delta: f64,
    /// `‖x - Σ δ k_i x_i‖` in the ambient norm.
    pub error: f64,
    /// `max_i |δ k_i|`.
    pub coeff_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_norm_value: Option<f64>,
    pub algorithm: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl QuantizationResult {
    /// Measures `k` against `x` on `frame` and packages the result.
    pub fn assemble(
        frame: &Frame,
        x: &[f64],
        k: Vec<i64>,
        delta: f64,
        algorithm: &str,
        params: serde_json::Value,
    ) -> Result<Self> {
        let (error, coeff_bound) = measure(frame, x, &k, delta)?;
        Ok(Self { k, delta, error, coeff_bound, z_norm_value: None, algorithm: algorithm.into(), params })
    }

    /// Recomputes error and coefficient bound from `(k, δ)` and checks them
    /// against the stored values to 1e-12 relative.
    pub fn verify(&self, frame: &Frame, x: &[f64]) -> Result<bool> {
        let (error, coeff_bound) = measure(frame, x, &self.k, self.delta)?;
        let close = |a: f64, b: f64| a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        Ok(close(error, self.error) && close(coeff_bound, self.coeff_bound))
    }
}

pub(crate) fn measure(frame: &Frame, x: &[f64], k: &[i64], delta: f64) -> Result<(f64, f64)> {
    let y = frame.synthesis_int(k, delta)?;
    crate::error::check_dim(frame.dim(), x.len())?;
    let error = frame.ambient().dist(x, &y);
    let coeff_bound = k.iter().map(|&v| (delta * v as f64).abs()).fold(0.0, f64::max);
    Ok((error, coeff_bound))
}

/// Nearest multiple of `delta`, ties away from zero: `|a_i - δ k_i| ≤ δ/2`.
pub fn round_coeffs(a: &[f64], delta: f64) -> Result<Vec<i64>> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid(format!("delta must be positive, got {delta}")));
    }
    Ok(a.iter().map(|v| (v / delta).round() as i64).collect())
}

#[cfg(test)]
mod tests;
