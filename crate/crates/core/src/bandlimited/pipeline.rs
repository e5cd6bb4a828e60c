use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::signal::{sample, BandlimitedSignal, Samples};
use super::window::{SpectralWindow, WindowFamily};
use crate::error::{invalid, Result};
use crate::quantizers::sigma_delta;

/// Truncated expansion evaluated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    /// Bound on the omitted terms at the grid points, given `|c_n| ≤ c_max`.
    pub tail: f64,
}

/// `λ⁻¹ Σ_{|n| ≤ Tλ} c_n ρ(x - n/λ)` at every grid point.
///
/// The tail bound covers the omitted `|n| > Tλ` for coefficients bounded
/// by the largest retained `|c_n|`.
pub fn reconstruct_expansion(coeffs: &Samples, window: &SpectralWindow, grid: &[f64]) -> Result<Reconstruction> {
    if (coeffs.lambda - window.lambda).abs() > 1e-12 * window.lambda {
        return Err(invalid(format!("sample rate {} does not match window rate {}", coeffs.lambda, window.lambda)));
    }
    let lambda = coeffs.lambda;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&x| {
            coeffs.values.iter().enumerate().map(|(k, c)| c * window.rho(x - coeffs.index(k) as f64 / lambda)).sum::<f64>()
                / lambda
        })
        .collect();
    let c_max = coeffs.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let last = coeffs.index(coeffs.values.len().saturating_sub(1)) as f64 / lambda;
    let first = coeffs.first as f64 / lambda;
    // distance from the grid to the nearest omitted sample
    let gap = grid.iter().map(|&x| (last + 1.0 / lambda - x).min(x - first + 1.0 / lambda)).fold(f64::INFINITY, f64::min);
    let tail = if c_max == 0.0 { 0.0 } else { c_max * window.tail_sum_bound(gap, lambda) };
    Ok(Reconstruction { x: grid.to_vec(), values, tail })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub lambda: f64,
    /// Truncation radius `T`: samples `|n| ≤ Tλ`, error measured on `|x| ≤ T/2`.
    pub radius: f64,
    pub grid_points: usize,
    pub family: WindowFamily,
    /// Spectral edge of the window in units of `π`; `None` uses `λ`.
    pub edge: Option<f64>,
}

impl PipelineConfig {
    pub fn standard(lambda: f64) -> Self {
        Self { lambda, radius: 50.0, grid_points: 2001, family: WindowFamily::RaisedCosine, edge: Some(2.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdReport {
    pub lambda: f64,
    #[serde(rename = "T")]
    pub radius: f64,
    pub rho_prime_l1: f64,
    pub max_error: f64,
    /// `‖ρ′‖₁ / λ`.
    pub bound: f64,
    pub tail: f64,
    pub pass: bool,
    pub max_state: f64,
    #[serde(skip)]
    pub grid: Vec<f64>,
    #[serde(skip)]
    pub exact: Vec<f64>,
    #[serde(skip)]
    pub reconstructed: Vec<f64>,
}

/// Samples `f`, runs Σ-Δ on the samples in index order, reconstructs from
/// the bits and compares with `f` on the interior `|x| ≤ T/2`.
pub fn sd_pipeline(f: &BandlimitedSignal, cfg: &PipelineConfig) -> Result<SdReport> {
    if f.sup_norm_estimate > 1.0 {
        return Err(invalid(format!("signal sup norm {} exceeds 1", f.sup_norm_estimate)));
    }
    if cfg.grid_points < 2 {
        return Err(invalid("pipeline grid needs at least two points"));
    }
    let window = SpectralWindow::with_edge(cfg.lambda, cfg.family, cfg.edge.unwrap_or(cfg.lambda))?;
    let samples = sample(f, cfg.lambda, cfg.radius)?;
    let sd = sigma_delta(&samples.values)?;
    let bits = Samples {
        lambda: samples.lambda,
        first: samples.first,
        values: sd.bits.iter().map(|&b| b as f64).collect(),
    };
    let half = cfg.radius / 2.0;
    let grid: Vec<f64> =
        (0..cfg.grid_points).map(|i| -half + 2.0 * half * i as f64 / (cfg.grid_points - 1) as f64).collect();
    let rec = reconstruct_expansion(&bits, &window, &grid)?;
    let exact: Vec<f64> = grid.iter().map(|&x| f.eval(x)).collect();
    let max_error = exact.iter().zip(&rec.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    // bits are ±1, which also bounds the samples of f
    let tail = window.tail_sum_bound(half, cfg.lambda);
    let bound = window.rho_prime_l1 / cfg.lambda;
    Ok(SdReport {
        lambda: cfg.lambda,
        radius: cfg.radius,
        rho_prime_l1: window.rho_prime_l1,
        max_error,
        bound,
        tail,
        pass: max_error <= bound + tail,
        max_state: sd.u.iter().fold(0.0, |m, v| m.max(v.abs())),
        grid,
        exact,
        reconstructed: rec.values,
    })
}
