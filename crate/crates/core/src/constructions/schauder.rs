use nalgebra::DMatrix;
use serde_json::json;

use crate::error::{invalid, Result};
use crate::frame_core::{Construction, Frame};
use crate::norm::{l2, LpNorm};

/// Grid points cap for [`ball_net`]; finer grids in higher dimension are refused.
const MAX_NET_POINTS: usize = 2_000_000;

/// Net-based Schauder frame together with the net it was built from.
#[derive(Debug, Clone)]
pub struct DenseSchauderFrame {
    pub frame: Frame,
    pub net: Vec<Vec<f64>>,
    /// Set when the grid step is so coarse that the net degenerates to at
    /// most one point.
    pub coarse: bool,
}

/// A `step`-net of the Euclidean unit ball of ℝⁿ.
///
/// Cubic grid of spacing `step/√n` (so every point is within `step/2` of a
/// grid point): grid points inside the ball, plus the radial projections of
/// grid points in the shell `1 < ‖g‖ ≤ 1 + step/2`.
pub fn ball_net(n: usize, step: f64) -> Result<Vec<Vec<f64>>> {
    if n == 0 || !(step > 0.0 && step <= 1.0) {
        return Err(invalid(format!("ball_net needs n ≥ 1 and step in (0, 1], got n={n}, step={step}")));
    }
    let h = step / (n as f64).sqrt();
    let outer = 1.0 + step / 2.0;
    let m = (outer / h).floor() as i64;
    let side = (2 * m + 1) as f64;
    if side.powi(n as i32) > MAX_NET_POINTS as f64 {
        return Err(invalid(format!("net grid too large: {side}^{n} points")));
    }
    let mut out = Vec::new();
    let mut idx = vec![-m; n];
    loop {
        let g: Vec<f64> = idx.iter().map(|&k| k as f64 * h).collect();
        let r = l2(&g);
        if r <= 1.0 {
            out.push(g);
        } else if r <= outer {
            out.push(g.iter().map(|v| v / r).collect());
        }
        let mut d = 0;
        loop {
            if d == n {
                return Ok(out);
            }
            idx[d] += 1;
            if idx[d] <= m {
                break;
            }
            idx[d] = -m;
            d += 1;
        }
    }
}

/// Finite version of the Schauder frame built on a net `(z_k)` of the ball:
/// pairs `z_k + e_σ(k)`, `z_k` with functionals `±e*_σ(k)/m_σ(k)`, where `σ`
/// cycles through the coordinates and `m_j` counts the pairs assigned to `j`.
///
/// When the net has fewer points than `n` it is cycled so every coordinate
/// gets a pair.
pub fn dense_schauder_frame(n: usize, grid_step: f64) -> Result<DenseSchauderFrame> {
    let net = ball_net(n, grid_step)?;
    let pairs = net.len().max(n);
    let mut counts = vec![0usize; n];
    for k in 0..pairs {
        counts[k % n] += 1;
    }
    let mut synthesis = DMatrix::zeros(n, 2 * pairs);
    let mut analysis = DMatrix::zeros(n, 2 * pairs);
    for k in 0..pairs {
        let z = &net[k % net.len()];
        let j = k % n;
        for (r, v) in z.iter().enumerate() {
            synthesis[(r, 2 * k)] = *v;
            synthesis[(r, 2 * k + 1)] = *v;
        }
        synthesis[(j, 2 * k)] += 1.0;
        let w = 1.0 / counts[j] as f64;
        analysis[(j, 2 * k)] = w;
        analysis[(j, 2 * k + 1)] = -w;
    }
    let frame = Frame::from_matrices(synthesis, analysis, LpNorm::L2)?.with_construction(Construction {
        kind: "dense_schauder".into(),
        params: json!({ "n": n, "grid_step": grid_step, "net_points": net.len() }),
        seed: None,
    });
    let coarse = net.len() <= 1;
    Ok(DenseSchauderFrame { frame, net, coarse })
}
