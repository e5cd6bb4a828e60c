use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Integrator of the first-order Σ-Δ recursion.
///
/// `|u| ≤ 1` holds after every step as long as all inputs lie in `[-1, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SigmaDeltaState {
    pub u: f64,
    pub step: usize,
}

impl SigmaDeltaState {
    pub fn new() -> Self {
        Self::default()
    }

    /// One step: `q = sign(u + y)` with `sign(0) = +1`, then `u ← u + y - q`.
    pub fn step(&mut self, y: f64) -> Result<i8> {
        if !(y.abs() <= 1.0) {
            return Err(invalid(format!("sigma-delta input {y} at step {} outside [-1, 1]", self.step)));
        }
        let v = self.u + y;
        let q: i8 = if v >= 0.0 { 1 } else { -1 };
        self.u = v - q as f64;
        self.step += 1;
        Ok(q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaDeltaOutput {
    pub bits: Vec<i8>,
    /// `u_1..u_T`; `u_0 = 0` is implicit.
    pub u: Vec<f64>,
    pub state: SigmaDeltaState,
}

pub fn sigma_delta(y: &[f64]) -> Result<SigmaDeltaOutput> {
    let mut state = SigmaDeltaState::new();
    let mut bits = Vec::with_capacity(y.len());
    let mut u = Vec::with_capacity(y.len());
    for &v in y {
        bits.push(state.step(v)?);
        u.push(state.u);
    }
    Ok(SigmaDeltaOutput { bits, u, state })
}
