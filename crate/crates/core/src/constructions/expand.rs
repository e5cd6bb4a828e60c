use nalgebra::{DMatrix, DVector};
use serde_json::json;

use crate::bounds::covering_radius;
use crate::error::{check_dim, invalid, Error, Result};
use crate::frame_core::{Construction, Frame};
use crate::norm::LpNorm;
use crate::rng;

/// Radius of the net demanded by [`net_augmented_frame`].
pub const NET_RADIUS: f64 = 0.5;
/// Minimum of `‖p ± x_i‖` between a net point and the frame vector it is paired with.
pub const NET_SEPARATION: f64 = 0.25;
/// Length of the push applied to a net point that is too close to its frame vector.
const PERTURBATION: f64 = 0.3;
const DENSITY_SAMPLES: usize = 1000;

/// Result of expanding a frame by an operator.
#[derive(Debug, Clone)]
pub struct Expansion {
    /// Pair `i` occupies positions `2i` (`x_i - λ_i V y_i`) and `2i+1`
    /// (`x_i + λ_i V y_i`), both with functional `f_i / 2`.
    pub frame: Frame,
    pub lambda: Vec<f64>,
}

impl Expansion {
    /// `(x̃_{2i+1} - x̃_{2i}) / 2`, which equals `λ_i V y_i`.
    pub fn half_difference(&self, i: usize) -> Vec<f64> {
        let a = self.frame.vector(2 * i);
        let b = self.frame.vector(2 * i + 1);
        b.iter().zip(&a).map(|(p, q)| (p - q) / 2.0).collect()
    }
}

/// Norm of the `i`-th unit vector of the interval-max coefficient space:
/// `‖x_i‖`, or 1 when `x_i = 0`.
fn z_unit_norm(frame: &Frame, i: usize) -> f64 {
    let r = frame.vector_norm(i);
    if r == 0.0 {
        1.0
    } else {
        r
    }
}

/// Interleaves `x_i ∓ λ_i V(y_i)` with halved functionals, where
/// `λ_i = ‖z_i‖ / ‖y_i‖_Y`. The `y_i` are given in coordinates of `Y` and
/// `v` is the `n × dim(Y)` matrix of `V`.
pub fn expand_frame(frame: &Frame, y: &[Vec<f64>], y_norm: LpNorm, v: &DMatrix<f64>) -> Result<Expansion> {
    check_dim(frame.len(), y.len())?;
    check_dim(frame.dim(), v.nrows())?;
    let mut lambda = Vec::with_capacity(y.len());
    let mut images = Vec::with_capacity(y.len());
    for (i, yi) in y.iter().enumerate() {
        check_dim(v.ncols(), yi.len())?;
        let ny = y_norm.eval(yi);
        if ny == 0.0 {
            return Err(invalid(format!("y_{i} is zero")));
        }
        lambda.push(z_unit_norm(frame, i) / ny);
        images.push(v * DVector::from_column_slice(yi));
    }
    let n = frame.dim();
    let len = 2 * frame.len();
    let mut synthesis = DMatrix::zeros(n, len);
    let mut analysis = DMatrix::zeros(n, len);
    for i in 0..frame.len() {
        let x = frame.synthesis_matrix().column(i);
        let shift = &images[i] * lambda[i];
        synthesis.set_column(2 * i, &(x - &shift));
        synthesis.set_column(2 * i + 1, &(x + &shift));
        let f = frame.analysis_matrix().column(i) * 0.5;
        analysis.set_column(2 * i, &f);
        analysis.set_column(2 * i + 1, &f);
    }
    let mut params = json!({ "N_base": frame.len(), "y_norm": y_norm });
    if let Some(c) = frame.construction() {
        params["base"] = serde_json::to_value(c)?;
    }
    let out = Frame::from_matrices(synthesis, analysis, frame.ambient())?.with_construction(Construction {
        kind: "expand".into(),
        params,
        seed: None,
    });
    Ok(Expansion { frame: out, lambda })
}

/// Frame augmented by a half-net of the unit ball.
#[derive(Debug, Clone)]
pub struct NetAugmented {
    pub expansion: Expansion,
    /// Net point paired with each slot, after any perturbation.
    pub assigned: Vec<Vec<f64>>,
    /// How many slots needed a perturbed net point.
    pub perturbed: usize,
    /// Number of times the base frame was replicated to provide enough slots.
    pub replicas: usize,
}

impl NetAugmented {
    pub fn frame(&self) -> &Frame {
        &self.expansion.frame
    }

    /// `min_i ‖x - (x̃_{2i+1} - x̃_{2i})/2‖`.
    pub fn half_net_residual(&self, x: &[f64]) -> f64 {
        let norm = self.frame().ambient();
        (0..self.assigned.len())
            .map(|i| norm.dist(x, &self.expansion.half_difference(i)))
            .fold(f64::INFINITY, f64::min)
    }
}

fn separated(p: &[f64], x: &[f64], norm: LpNorm) -> bool {
    let plus: Vec<f64> = p.iter().zip(x).map(|(a, b)| a + b).collect();
    norm.dist(p, x) > NET_SEPARATION && norm.eval(&plus) > NET_SEPARATION
}

/// Expands `frame` by the map sending the `ℓ₁` unit vectors to net points.
///
/// The base frame is normalized so the coefficient unit vectors have norm
/// one (hence `λ_i = 1`) and replicated, functionals divided by the number of
/// copies, until there is a slot for every net point. Net points are paired
/// with slots greedily so that `‖p ± x_i‖ > 1/4`; a point that fits no free
/// slot is pushed by 0.3 in a seeded random direction and pulled back into
/// the ball.
pub fn net_augmented_frame(frame: &Frame, net: &[Vec<f64>], seed: u64) -> Result<NetAugmented> {
    if net.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = frame.dim();
    for p in net {
        check_dim(n, p.len())?;
    }
    let norm = frame.ambient();
    if net.iter().any(|p| norm.eval(p) > 1.0 + 1e-12) {
        return Err(invalid("net points must lie in the unit ball"));
    }
    let radius = covering_radius(net, n, norm, DENSITY_SAMPLES, seed);
    if radius > NET_RADIUS {
        return Err(invalid(format!("net is not 1/2-dense: sampled covering radius {radius:.4}")));
    }

    let replicas = net.len().div_ceil(frame.len());
    let slots = replicas * frame.len();
    let scale: Vec<f64> = (0..frame.len()).map(|i| z_unit_norm(frame, i)).collect();
    let base_vec: Vec<Vec<f64>> =
        (0..frame.len()).map(|i| frame.vector(i).iter().map(|v| v / scale[i]).collect()).collect();
    let mut assigned: Vec<Option<Vec<f64>>> = vec![None; slots];
    let mut perturbed = 0;
    let mut r = rng::seeded(seed ^ 0x9e37_79b9);
    let mut place = |p: &[f64], assigned: &mut Vec<Option<Vec<f64>>>, perturbed: &mut usize| {
        if let Some(s) = (0..slots).find(|&s| assigned[s].is_none() && separated(p, &base_vec[s % frame.len()], norm)) {
            assigned[s] = Some(p.to_vec());
            return;
        }
        let s = (0..slots).find(|&s| assigned[s].is_none()).expect("a free slot");
        let x = &base_vec[s % frame.len()];
        let mut q = p.to_vec();
        for _ in 0..64 {
            let u = rng::sphere_point(&mut r, n, norm);
            q = p.iter().zip(&u).map(|(a, b)| a + PERTURBATION * b).collect();
            let nq = norm.eval(&q);
            if nq > 1.0 {
                q.iter_mut().for_each(|v| *v /= nq);
            }
            if separated(&q, x, norm) {
                break;
            }
        }
        assigned[s] = Some(q);
        *perturbed += 1;
    };
    for p in net {
        place(p, &mut assigned, &mut perturbed);
    }
    let mut cursor = 0;
    while assigned.iter().any(Option::is_none) {
        place(&net[cursor % net.len()], &mut assigned, &mut perturbed);
        cursor += 1;
    }
    let assigned: Vec<Vec<f64>> = assigned.into_iter().map(|p| p.expect("filled")).collect();

    let mut synthesis = DMatrix::zeros(n, slots);
    let mut analysis = DMatrix::zeros(n, slots);
    for s in 0..slots {
        let i = s % frame.len();
        // x_i / ‖z_i‖ paired with ‖z_i‖ f_i keeps every rank-one term unchanged
        synthesis.set_column(s, &(frame.synthesis_matrix().column(i) / scale[i]));
        analysis.set_column(s, &(frame.analysis_matrix().column(i) * (scale[i] / replicas as f64)));
    }
    let replicated = Frame::from_matrices(synthesis, analysis, norm)?;
    let y: Vec<Vec<f64>> = (0..slots).map(|s| (0..slots).map(|t| if s == t { 1.0 } else { 0.0 }).collect()).collect();
    let v = DMatrix::from_fn(n, slots, |row, col| assigned[col][row]);
    let mut expansion = expand_frame(&replicated, &y, LpNorm::L1, &v)?;
    expansion.frame = expansion.frame.with_construction(Construction {
        kind: "net_augment".into(),
        params: json!({ "net_points": net.len(), "replicas": replicas, "perturbed": perturbed }),
        seed: Some(seed),
    });
    Ok(NetAugmented { expansion, assigned, perturbed, replicas })
}
