use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// `sin(πt)/(πt)`, with spectrum on `[-π, π]`.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - (std::f64::consts::PI * t).powi(2) / 6.0
    } else {
        let p = std::f64::consts::PI * t;
        p.sin() / p
    }
}

/// Spacing of the grid used to estimate the sup norm.
const SUP_GRID_STEP: f64 = 1.0 / 64.0;
/// Margin past the extreme shifts covered by that grid.
const SUP_GRID_MARGIN: f64 = 16.0;

/// `f(x) = Σ a_k sinc(x - s_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandlimitedSignal {
    pub components: Vec<(f64, f64)>,
    /// Max of `|f|` on a grid of step 1/64 around the shifts.
    pub sup_norm_estimate: f64,
}

impl BandlimitedSignal {
    pub fn new(components: Vec<(f64, f64)>) -> Result<Self> {
        if components.iter().any(|(a, s)| !a.is_finite() || !s.is_finite()) {
            return Err(invalid("signal components must be finite"));
        }
        let mut sig = Self { components, sup_norm_estimate: 0.0 };
        if !sig.components.is_empty() {
            let lo = sig.components.iter().map(|c| c.1).fold(f64::INFINITY, f64::min) - SUP_GRID_MARGIN;
            let hi = sig.components.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max) + SUP_GRID_MARGIN;
            let steps = ((hi - lo) / SUP_GRID_STEP).ceil() as usize;
            sig.sup_norm_estimate =
                (0..=steps).map(|i| sig.eval(lo + i as f64 * SUP_GRID_STEP).abs()).fold(0.0, f64::max);
        }
        Ok(sig)
    }

    pub fn zero() -> Self {
        Self { components: Vec::new(), sup_norm_estimate: 0.0 }
    }

    /// `amplitude · sinc(x)`.
    pub fn scaled_sinc(amplitude: f64) -> Self {
        Self { components: vec![(amplitude, 0.0)], sup_norm_estimate: amplitude.abs() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.components.iter().map(|(a, s)| a * sinc(x - s)).sum()
    }
}

/// `y_n = f(n/λ)` for `|n| ≤ ⌊Tλ⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Samples {
    pub lambda: f64,
    /// Index of `values[0]`.
    pub first: i64,
    pub values: Vec<f64>,
}

impl Samples {
    pub fn index(&self, k: usize) -> i64 {
        self.first + k as i64
    }
}

pub fn sample(f: &BandlimitedSignal, lambda: f64, radius: f64) -> Result<Samples> {
    if !(lambda > 1.0) {
        return Err(invalid(format!("oversampling factor must exceed 1, got {lambda}")));
    }
    if !(radius > 0.0) {
        return Err(invalid(format!("truncation radius must be positive, got {radius}")));
    }
    let last = (radius * lambda).floor() as i64;
    let values = (-last..=last).map(|n| f.eval(n as f64 / lambda)).collect();
    Ok(Samples { lambda, first: -last, values })
}
