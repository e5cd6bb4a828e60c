use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Frame;
use crate::error::{check_dim, Result};
use crate::norm::l2;
use crate::rng;

/// Largest count of nonzero frame vectors for which the sign-max norm is
/// computed over all sign patterns.
pub const SIGN_MAX_EXHAUSTIVE_LIMIT: usize = 20;
/// Number of random sign patterns used beyond the exhaustive limit.
pub const SIGN_MAX_SAMPLES: usize = 4096;

const SIGN_SAMPLING_SEED: u64 = 0x5349_474e;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZNormVariant {
    /// `max_{m≤k} ‖Σ_{i∈[m,k], x_i≠0} a_i x_i‖ + (Σ_{x_i=0} a_i²)^{1/2}`
    IntervalMax,
    /// `max_σ ‖Σ_{x_i≠0} σ_i a_i x_i‖ + (Σ_{x_i=0} a_i²)^{1/2}`
    SignMax,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZNormValue {
    pub value: f64,
    /// True when the sign-max value is a maximum over sampled sign patterns
    /// (a lower estimate) rather than over all of them.
    pub sampled: bool,
}

impl Frame {
    /// Norm of `Σ a_i z_i` in the coefficient space associated with the frame.
    pub fn z_norm(&self, a: &[f64], variant: ZNormVariant) -> Result<ZNormValue> {
        check_dim(self.len(), a.len())?;
        let nonzero = self.nonzero_indices();
        let zero_part = {
            let mut is_nz = vec![false; self.len()];
            nonzero.iter().for_each(|&i| is_nz[i] = true);
            let rest: Vec<f64> = a.iter().zip(&is_nz).filter(|(_, nz)| !**nz).map(|(v, _)| *v).collect();
            l2(&rest)
        };
        let (main, sampled) = match variant {
            ZNormVariant::IntervalMax => (self.max_window_norm(a), false),
            ZNormVariant::SignMax => self.sign_max(a, &nonzero),
        };
        Ok(ZNormValue { value: main + zero_part, sampled })
    }

    fn sign_max(&self, a: &[f64], nonzero: &[usize]) -> (f64, bool) {
        let n = self.dim();
        let terms: Vec<Vec<f64>> = nonzero
            .iter()
            .map(|&i| self.synthesis.column(i).iter().map(|x| a[i] * x).collect())
            .collect();
        let m = terms.len();
        if m == 0 {
            return (0.0, false);
        }
        if m <= SIGN_MAX_EXHAUSTIVE_LIMIT {
            // Gray-code walk; the first sign stays fixed since σ and −σ agree.
            let mut sum = vec![0.0; n];
            for t in &terms {
                sum.iter_mut().zip(t).for_each(|(s, v)| *s += v);
            }
            let mut signs = vec![1.0f64; m];
            let mut best = self.ambient.eval(&sum);
            for step in 1u64..(1u64 << (m - 1)) {
                let bit = step.trailing_zeros() as usize + 1;
                signs[bit] = -signs[bit];
                for (s, v) in sum.iter_mut().zip(&terms[bit]) {
                    *s += 2.0 * signs[bit] * v;
                }
                best = best.max(self.ambient.eval(&sum));
            }
            (best, false)
        } else {
            let mut rng = rng::seeded(SIGN_SAMPLING_SEED);
            let mut sum = vec![0.0; n];
            let mut best = 0.0f64;
            for _ in 0..SIGN_MAX_SAMPLES {
                sum.iter_mut().for_each(|s| *s = 0.0);
                for t in &terms {
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    sum.iter_mut().zip(t).for_each(|(s, v)| *s += sign * v);
                }
                best = best.max(self.ambient.eval(&sum));
            }
            (best, true)
        }
    }
}
