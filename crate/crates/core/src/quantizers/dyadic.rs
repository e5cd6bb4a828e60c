use serde_json::json;

use crate::constructions::DyadicFrame;
use crate::error::{check_dim, invalid, Result};
use crate::quantizers::QuantizationResult;

/// Digits `σ ∈ {-1, 0, 1}^m` minimizing `|s - Σ_j σ_j 2^-j|`.
///
/// Rounds `s·2^m` to an integer `v` (clamped to `±(2^m - 1)`) and writes
/// `|v|` in binary with the sign of `v`; the residual is at most `2^-(m+1)`
/// whenever `|s| ≤ 1 - 2^-m`.
pub fn signed_dyadic_digits(s: f64, m: usize) -> Vec<i64> {
    let top = (1i64 << m) - 1;
    let v = ((s * (1i64 << m) as f64).round() as i64).clamp(-top, top);
    let sign = v.signum();
    let mag = v.abs();
    (1..=m).map(|j| sign * ((mag >> (m - j)) & 1)).collect()
}

/// Quantizes `x = Σ a_p x_p` on a dyadic frame with `δ = 1` and `|k| ≤ 3`.
///
/// Row `i`: the `s = 1` digits approximate `Σ_j a_(i,j,1) 2^-j`. The `s = 0`
/// entries then absorb the total mass along `e_1` up to 1/2.
pub fn dyadic_quantize(df: &DyadicFrame, a: &[f64]) -> Result<QuantizationResult> {
    check_dim(df.len(), a.len())?;
    if let Some(v) = a.iter().find(|v| !(v.abs() <= 1.0)) {
        return Err(invalid(format!("dyadic coefficient {v} outside [-1, 1]")));
    }
    let (n, m) = (df.n, df.m);
    let mut k = vec![0i64; df.len()];
    let mut mass = 0.0;
    let mut placed = 0i64;
    for i in 0..n {
        let mut s = 0.0;
        for j in 1..=m {
            let p0 = ((i * m) + (j - 1)) * 2;
            mass += a[p0] + a[p0 + 1];
            s += a[p0 + 1] * 0.5f64.powi(j as i32);
        }
        for (j, d) in signed_dyadic_digits(s, m).into_iter().enumerate() {
            k[((i * m) + j) * 2 + 1] = d;
            placed += d;
        }
    }
    let cap = 3 * (n * m) as i64;
    let mut remaining = ((mass - placed as f64).round() as i64).clamp(-cap, cap);
    for q in 0..n * m {
        if remaining == 0 {
            break;
        }
        let d = remaining.clamp(-3, 3);
        k[q * 2] = d;
        remaining -= d;
    }
    let x = df.frame.synthesis(a)?;
    QuantizationResult::assemble(&df.frame, &x, k, 1.0, "dyadic", json!({ "n": n, "m": m }))
}
