use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::frame_core::Frame;

/// Preset monotone scalar functions `(0, ∞) → (0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrowthFn {
    /// `t ↦ coef · t^exp`, strictly increasing when both are positive.
    Power { coef: f64, exp: f64 },
}

impl GrowthFn {
    pub const IDENTITY: GrowthFn = GrowthFn::Power { coef: 1.0, exp: 1.0 };

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            GrowthFn::Power { coef, exp } => coef * t.powf(exp),
        }
    }

    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            GrowthFn::Power { coef, exp } => (y / coef).powf(1.0 / exp),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GrowthFn::Power { coef, exp } if coef > 0.0 && exp > 0.0 && coef.is_finite() && exp.is_finite() => Ok(()),
            _ => Err(invalid(format!("{self:?} is not strictly increasing and unbounded"))),
        }
    }
}

/// Constants the bound formulas take as inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParams {
    /// Cotype exponent, at least 2.
    pub cotype_q: f64,
    /// Cotype constant. 1 is exact only for a Euclidean ambient norm.
    pub c_q: f64,
    /// Projection constant of the coefficient basis.
    pub k_z: f64,
    pub f: GrowthFn,
    pub g: GrowthFn,
    /// Universal constants of the volume-ratio bounds. Their true values are
    /// unknown, so 1 marks the results as unnormalized.
    pub d: f64,
    pub a_const: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            cotype_q: 2.0,
            c_q: 1.0,
            k_z: 1.0,
            f: GrowthFn::IDENTITY,
            g: GrowthFn::Power { coef: 1.0, exp: 0.5 },
            d: 1.0,
            a_const: 1.0,
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cotype_q >= 2.0) {
            return Err(invalid(format!("cotype exponent {} < 2", self.cotype_q)));
        }
        for (name, v) in [("c_q", self.c_q), ("k_z", self.k_z), ("d", self.d), ("a_const", self.a_const)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} = {v} must be positive")));
            }
        }
        self.f.validate()?;
        self.g.validate()?;
        // g(n)·ln n / n → 0 needs sublinear growth
        match self.g {
            GrowthFn::Power { exp, .. } if exp < 1.0 => Ok(()),
            g => Err(invalid(format!("{g:?} grows too fast for the counting bound"))),
        }
    }

    /// True when `d` and `A` are left at the placeholder value 1.
    pub fn unnormalized(&self) -> bool {
        self.d == 1.0 || self.a_const == 1.0
    }
}

/// `n·ln(1/ε)/f⁻¹(C/δ) − ln(4·K_Z·C/δ + 1)`: a lower bound on `ln N` for an
/// `ε`-dense quantized set. Negative values are returned unchanged.
pub fn counting_lower_bound(n: usize, epsilon: f64, delta: f64, c: f64, k_z: f64, f: &GrowthFn) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("density ε = {epsilon} must lie in (0, 1)")));
    }
    if !(delta > 0.0 && c > 0.0 && k_z > 0.0) {
        return Err(invalid(format!("need δ, C, K_Z > 0, got {delta}, {c}, {k_z}")));
    }
    f.validate()?;
    let ratio = c / delta;
    Ok(n as f64 * (1.0 / epsilon).ln() / f.inverse(ratio) - (4.0 * k_z * ratio + 1.0).ln())
}

/// `n·ln n / (2q·ln(1 + 2C/δ))`, the least frame length compatible with
/// bounded-coefficient quantization in cotype `q`.
pub fn frame_length_lower_bound(n: usize, cotype_q: f64, delta: f64, c: f64) -> f64 {
    let n = n as f64;
    n * n.ln() / (2.0 * cotype_q * (1.0 + 2.0 * c / delta).ln())
}

/// `d·C_q·n^(1/2 − 1/q)·ln n`.
pub fn volume_ratio_bound(n: usize, cotype_q: f64, c_q: f64, d: f64) -> Result<f64> {
    if n < 2 || !(cotype_q >= 2.0) {
        return Err(invalid(format!("need n ≥ 2 and q ≥ 2, got n = {n}, q = {cotype_q}")));
    }
    let nf = n as f64;
    Ok(d * c_q * nf.powf(0.5 - 1.0 / cotype_q) * nf.ln())
}

/// `A·C₂·ln(1 + C₂)`.
pub fn volume_ratio_bound2(c2: f64, a_const: f64) -> f64 {
    a_const * c2 * (1.0 + c2).ln()
}

/// `√n · min_i ‖x_i‖`.
pub fn min_norm_ratio(frame: &Frame) -> Result<f64> {
    if frame.is_empty() {
        return Err(invalid("empty frame"));
    }
    let min = (0..frame.len()).map(|i| frame.vector_norm(i)).fold(f64::INFINITY, f64::min);
    Ok((frame.dim() as f64).sqrt() * min)
}
