use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// An ℓp norm on coordinate space, `1 <= p <= ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormRepr", into = "NormRepr")]
pub enum LpNorm {
    P(f64),
    Inf,
}

impl LpNorm {
    pub const L1: LpNorm = LpNorm::P(1.0);
    pub const L2: LpNorm = LpNorm::P(2.0);
    pub const LINF: LpNorm = LpNorm::Inf;

    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(LpNorm::Inf)
        } else if p.is_finite() && p >= 1.0 {
            Ok(LpNorm::P(p))
        } else {
            Err(invalid(format!("norm exponent must satisfy p >= 1, got {p}")))
        }
    }

    pub fn p(&self) -> f64 {
        match self {
            LpNorm::P(p) => *p,
            LpNorm::Inf => f64::INFINITY,
        }
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        match *self {
            LpNorm::Inf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            LpNorm::P(1.0) => v.iter().map(|x| x.abs()).sum(),
            LpNorm::P(2.0) => l2(v),
            LpNorm::P(p) => v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }

    /// Norm of `a - b`.
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.eval(&d)
    }
}

/// Euclidean norm with scaling against overflow.
pub fn l2(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum NormRepr {
    Lp { p: f64 },
    Linf,
}

impl TryFrom<NormRepr> for LpNorm {
    type Error = crate::Error;
    fn try_from(r: NormRepr) -> Result<Self> {
        match r {
            NormRepr::Lp { p } => LpNorm::new(p),
            NormRepr::Linf => Ok(LpNorm::Inf),
        }
    }
}

impl From<LpNorm> for NormRepr {
    fn from(n: LpNorm) -> Self {
        match n {
            LpNorm::P(p) => NormRepr::Lp { p },
            LpNorm::Inf => NormRepr::Linf,
        }
    }
}
