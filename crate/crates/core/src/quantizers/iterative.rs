use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{check_dim, invalid, Error, Result};
use crate::frame_core::{Frame, NormSpec};
use crate::quantizers::{round_coeffs, QuantizationResult};
use crate::rng;

/// Absolute slack granted to the base quantizer's contract checks.
pub const CONTRACT_SLACK: f64 = 1e-12;

/// A quantizer on the unit ball: `‖x - δ Σ k_i x_i‖ ≤ q0` and
/// `‖δ Σ k_i z_i‖_Z ≤ C0` for every `‖x‖ ≤ 1`.
pub trait BaseQuantizer: Sync {
    fn delta(&self) -> f64;
    fn quantize(&self, x: &[f64]) -> Result<Vec<i64>>;
}

/// Rounds the frame coefficients `f_i(x)` to the grid `δℤ`.
#[derive(Debug, Clone)]
pub struct DualRounding {
    pub frame: Frame,
    pub delta: f64,
}

impl BaseQuantizer for DualRounding {
    fn delta(&self) -> f64 {
        self.delta
    }

    fn quantize(&self, x: &[f64]) -> Result<Vec<i64>> {
        round_coeffs(&self.frame.analysis(x)?, self.delta)
    }
}

/// Constants of the extension from the unit ball to the whole space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterativeQuantizerConfig {
    pub delta0: f64,
    pub c0: f64,
    pub q0: f64,
    pub n1: u64,
    pub q1: f64,
    pub delta1: f64,
    pub c1: f64,
}

impl IterativeQuantizerConfig {
    /// Smallest `n1` with `q1 = (n1+1) q0 / n1 < 1`; `δ1 = δ0/n1`, `C1 = 2 C0/(1 - q1)`.
    pub fn new(delta0: f64, c0: f64, q0: f64) -> Result<Self> {
        if !(delta0 > 0.0 && c0 > 0.0 && q0 > 0.0 && q0 < 1.0) {
            return Err(invalid(format!("bad base constants δ0={delta0}, C0={c0}, q0={q0}")));
        }
        let mut n1 = ((q0 / (1.0 - q0)).floor() as u64).max(1);
        while (n1 + 1) as f64 * q0 / n1 as f64 >= 1.0 {
            n1 += 1;
        }
        let q1 = (n1 + 1) as f64 * q0 / n1 as f64;
        Ok(Self { delta0, c0, q0, n1, q1, delta1: delta0 / n1 as f64, c1: 2.0 * c0 / (1.0 - q1) })
    }
}

/// Worst values seen while sampling the base quantizer on the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseReport {
    pub max_error: f64,
    pub max_z: f64,
    pub samples: usize,
}

/// The base quantizer with its constants, the frame and the coefficient norm.
pub struct IterativeQuantizer<'a, B: BaseQuantizer> {
    pub base: &'a B,
    pub frame: &'a Frame,
    pub z: &'a NormSpec,
    pub config: IterativeQuantizerConfig,
}

/// Samples the base contract on `samples` points of the unit ball.
pub fn validate_base<B: BaseQuantizer>(
    base: &B,
    frame: &Frame,
    z: &NormSpec,
    c0: f64,
    q0: f64,
    samples: usize,
    seed: u64,
) -> Result<BaseReport> {
    let mut r = rng::seeded(seed);
    let mut report = BaseReport { max_error: 0.0, max_z: 0.0, samples };
    for s in 0..samples {
        let x = if s % 4 == 3 {
            rng::sphere_point(&mut r, frame.dim(), frame.ambient())
        } else {
            rng::ball_point(&mut r, frame.dim(), frame.ambient())
        };
        let (err, zv) = base_call_stats(base, frame, z, &x)?.1;
        report.max_error = report.max_error.max(err);
        report.max_z = report.max_z.max(zv);
        if err > q0 + CONTRACT_SLACK || zv > c0 + CONTRACT_SLACK {
            return Err(Error::ContractViolation(format!(
                "base quantizer on sampled x={x:?}: error {err:.6e} (q0 {q0}), Z-norm {zv:.6e} (C0 {c0})"
            )));
        }
    }
    Ok(report)
}

type BaseCall = (Vec<i64>, (f64, f64));

fn base_call_stats<B: BaseQuantizer>(base: &B, frame: &Frame, z: &NormSpec, x: &[f64]) -> Result<BaseCall> {
    let k = base.quantize(x)?;
    let d = base.delta();
    let err = frame.ambient().dist(x, &frame.synthesis_int(&k, d)?);
    let scaled: Vec<f64> = k.iter().map(|&v| d * v as f64).collect();
    let zv = z.eval(&scaled)?;
    Ok((k, (err, zv)))
}

impl<B: BaseQuantizer> IterativeQuantizer<'_, B> {
    fn base_checked(&self, y: &[f64]) -> Result<Vec<i64>> {
        let (k, (err, zv)) = base_call_stats(self.base, self.frame, self.z, y)?;
        let c = &self.config;
        if err > c.q0 + CONTRACT_SLACK || zv > c.c0 + CONTRACT_SLACK {
            return Err(Error::ContractViolation(format!(
                "base quantizer on residual {y:?}: error {err:.6e} (q0 {}), Z-norm {zv:.6e} (C0 {})",
                c.q0, c.c0
            )));
        }
        Ok(k)
    }

    /// For `‖y‖ ≤ 1` and `0 < δ ≤ δ1`: coefficients at step `δ` with error
    /// ≤ q1 and Z-norm ≤ 2 C0. With `n = ⌊δ0/δ⌋` the base runs on
    /// `δ0/(δ(n+1))·y` and its output is multiplied by `n + 1`.
    fn claim(&self, y: &[f64], delta: f64) -> Result<Vec<i64>> {
        let n = (self.config.delta0 / delta).floor();
        let scale = self.config.delta0 / (delta * (n + 1.0));
        let scaled: Vec<f64> = y.iter().map(|v| v * scale).collect();
        let k = self.base_checked(&scaled)?;
        let m = n as i64 + 1;
        Ok(k.into_iter().map(|v| v * m).collect())
    }

    /// Coefficients at step `δ1` with error ≤ 1 and Z-norm ≤ C1·‖x‖.
    pub fn quantize(&self, x: &[f64]) -> Result<QuantizationResult> {
        check_dim(self.frame.dim(), x.len())?;
        let c = self.config;
        let nx = self.frame.ambient().eval(x);
        let len = self.frame.len();
        let mut stages = 0usize;
        let k = if nx >= 1.0 {
            // q1^n < 1/‖x‖ ≤ q1^(n-1)
            stages = (nx.ln() / (1.0 / c.q1).ln()).floor() as usize + 1;
            let unit: Vec<f64> = x.iter().map(|v| v / nx).collect();
            let delta = c.delta1 / nx;
            let mut k = vec![0i64; len];
            for stage in 0..stages {
                let approx = self.frame.synthesis_int(&k, delta)?;
                let s = c.q1.powi(-(stage as i32));
                let residual: Vec<f64> = unit.iter().zip(&approx).map(|(u, a)| (u - a) * s).collect();
                let add = self.claim(&residual, delta * s)?;
                k.iter_mut().zip(add).for_each(|(a, b)| *a += b);
            }
            k
        } else if nx >= 1.0 - c.q1 {
            stages = 1;
            self.claim(x, c.delta1)?
        } else {
            vec![0i64; len]
        };
        let mut result = QuantizationResult::assemble(
            self.frame,
            x,
            k,
            c.delta1,
            "iterative",
            json!({ "config": c, "stages": stages, "z": self.z.label() }),
        )?;
        let scaled: Vec<f64> = result.k.iter().map(|&v| c.delta1 * v as f64).collect();
        result.z_norm_value = Some(self.z.eval(&scaled)?);
        Ok(result)
    }
}

/// Convenience wrapper around [`IterativeQuantizer::quantize`].
pub fn iterative_quantize<B: BaseQuantizer>(
    base: &B,
    config: IterativeQuantizerConfig,
    frame: &Frame,
    z: &NormSpec,
    x: &[f64],
) -> Result<QuantizationResult> {
    IterativeQuantizer { base, frame, z, config }.quantize(x)
}
