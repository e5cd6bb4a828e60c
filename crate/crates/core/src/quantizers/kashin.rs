use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::constructions::KashinFrame;
use crate::error::{check_dim, invalid, Error, Result};
use crate::norm::l2;
use crate::quantizers::{round_coeffs, QuantizationResult};

pub const KASHIN_MAX_ITER: usize = 2000;
pub const LEVEL_ESCALATION: f64 = 1.5;
pub const MAX_ESCALATIONS: usize = 8;

/// Exactness demanded of `(level/√N)·U·a = x`.
const EXACT_TOL: f64 = 1e-10;
/// A coordinate within this of ±1 counts as saturated.
const SATURATION: f64 = 1e-9;
/// Projection rounds between least-squares correction attempts.
const CORRECTION_EVERY: usize = 20;
/// Relative width at which the level bisection stops.
const BISECTION_TOL: f64 = 1e-3;

/// `x = (level/√N) Σ a_i u_i` with `‖a‖_∞ ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KashinRepresentation {
    pub a: Vec<f64>,
    pub level: f64,
    /// Number of ×1.5 level increases needed.
    pub escalations: usize,
}

/// Finds `a` with `U a = target`, `‖a‖_∞ ≤ 1`, or reports the best residual.
///
/// Alternates the exact affine projection `a + Uᵀ(target - U a)` (valid
/// because `U Uᵀ = I`) with clipping to the cube, and periodically tries to
/// close the remaining gap by a minimum-norm correction on the unsaturated
/// coordinates.
fn box_solve(u: &DMatrix<f64>, target: &DVector<f64>, max_iter: usize) -> std::result::Result<DVector<f64>, f64> {
    let tol = EXACT_TOL * target.norm().max(1.0);
    let mut a = (u.transpose() * target).map(|v| v.clamp(-1.0, 1.0));
    let mut best = f64::INFINITY;
    let mut checkpoint = f64::INFINITY;
    for it in 0..max_iter {
        let r = target - u * &a;
        let res = r.norm();
        best = best.min(res);
        if res <= tol {
            return Ok(a);
        }
        if it % CORRECTION_EVERY == 0 {
            if let Some(fixed) = correct(u, &a, &r, tol) {
                return Ok(fixed);
            }
            // stalled: the cube and the affine set are (numerically) disjoint
            if res > 0.999 * checkpoint {
                return Err(best);
            }
            checkpoint = res;
        }
        a += u.transpose() * r;
        a.apply(|v| *v = v.clamp(-1.0, 1.0));
    }
    match correct(u, &a, &(target - u * &a), tol) {
        Some(fixed) => Ok(fixed),
        None => Err(best),
    }
}

/// Minimum-norm change of the free coordinates that removes residual `r`.
fn correct(u: &DMatrix<f64>, a: &DVector<f64>, r: &DVector<f64>, tol: f64) -> Option<DVector<f64>> {
    let free: Vec<usize> = (0..a.len()).filter(|&i| a[i].abs() < 1.0 - SATURATION).collect();
    if free.len() < u.nrows() {
        return None;
    }
    let uf = u.select_columns(&free);
    let w = (&uf * uf.transpose()).cholesky()?.solve(r);
    let step = uf.transpose() * w;
    let mut out = a.clone();
    for (c, &i) in free.iter().enumerate() {
        out[i] += step[c];
    }
    if out.amax() > 1.0 + 1e-12 {
        return None;
    }
    out.apply(|v| *v = v.clamp(-1.0, 1.0));
    let target = u * a + r;
    ((target - u * &out).norm() <= tol).then_some(out)
}

fn target_for(u: &DMatrix<f64>, x: &[f64], level: f64) -> DVector<f64> {
    let s = (u.ncols() as f64).sqrt() / level;
    DVector::from_iterator(x.len(), x.iter().map(|v| v * s))
}

/// Representation of `x` at `level`, raising the level by ×1.5 (at most
/// [`MAX_ESCALATIONS`] times) while the box problem has no solution.
pub fn kashin_represent(kf: &KashinFrame, x: &[f64], max_iter: usize, level: f64) -> Result<KashinRepresentation> {
    represent_with_u(&kf.u, x, max_iter, level)
}

pub(crate) fn represent_with_u(u: &DMatrix<f64>, x: &[f64], max_iter: usize, level: f64) -> Result<KashinRepresentation> {
    check_dim(u.nrows(), x.len())?;
    if !(level > 0.0 && level.is_finite()) {
        return Err(invalid(format!("level must be positive, got {level}")));
    }
    if l2(x) > 1.0 + 1e-12 {
        return Err(invalid("kashin representation needs ‖x‖ ≤ 1"));
    }
    let mut level = level;
    let mut best_residual = f64::INFINITY;
    for escalations in 0..=MAX_ESCALATIONS {
        match box_solve(u, &target_for(u, x, level), max_iter) {
            Ok(a) => return Ok(KashinRepresentation { a: a.iter().copied().collect(), level, escalations }),
            Err(r) => best_residual = best_residual.min(r),
        }
        level *= LEVEL_ESCALATION;
    }
    Err(Error::NonConvergence { level, best_residual })
}

/// Smallest level at which `x` has a representation, to relative precision
/// 1e-3, by bisection between `max(‖x‖, √N‖x‖²/‖Uᵀx‖₁)` and `√N‖Uᵀx‖_∞`.
pub fn kashin_min_level(kf: &KashinFrame, x: &[f64], max_iter: usize) -> Result<KashinRepresentation> {
    min_level_with_u(&kf.u, x, max_iter)
}

pub(crate) fn min_level_with_u(u: &DMatrix<f64>, x: &[f64], max_iter: usize) -> Result<KashinRepresentation> {
    check_dim(u.nrows(), x.len())?;
    let nx = l2(x);
    if nx == 0.0 {
        return Ok(KashinRepresentation { a: vec![0.0; u.ncols()], level: 0.0, escalations: 0 });
    }
    let sqrt_n = (u.ncols() as f64).sqrt();
    let ut = u.transpose() * DVector::from_column_slice(x);
    let mut hi = sqrt_n * ut.amax();
    let mut lo = nx.max(sqrt_n * nx * nx / ut.lp_norm(1));
    let mut rep = represent_with_u(u, x, max_iter, hi)?;
    hi = rep.level;
    while hi - lo > BISECTION_TOL * hi {
        let mid = 0.5 * (lo + hi);
        match box_solve(u, &target_for(u, x, mid), max_iter) {
            Ok(a) => {
                rep = KashinRepresentation { a: a.iter().copied().collect(), level: mid, escalations: 0 };
                hi = mid;
            }
            Err(_) => lo = mid,
        }
    }
    Ok(rep)
}

/// `√N / ‖Uᵀy‖₁` after locally minimizing `‖Uᵀy‖₁` over unit `y` from `y0`.
///
/// Any unit `y` gives a lower bound on the inclusion constant, by duality
/// between `min ‖a‖_∞` subject to `U a = x` and `max ⟨y, x⟩ / ‖Uᵀy‖₁`. The
/// minimization is iteratively reweighted: each step replaces `|t_i|` by the
/// quadratic majorizer `t_i² / |t_i⁰|` and takes the bottom eigenvector.
pub(crate) fn dual_refined_level(u: &DMatrix<f64>, y0: &[f64], iterations: usize) -> f64 {
    let mut y = DVector::from_column_slice(y0).normalize();
    let mut best = (u.transpose() * &y).lp_norm(1);
    for _ in 0..iterations {
        let t = u.transpose() * &y;
        let w = t.map(|v| 1.0 / v.abs().max(1e-9));
        let m = u * DMatrix::from_diagonal(&w) * u.transpose();
        let eig = m.symmetric_eigen();
        let imin = eig.eigenvalues.imin();
        y = eig.eigenvectors.column(imin).normalize();
        let val = (u.transpose() * &y).lp_norm(1);
        if val >= best * (1.0 - 1e-12) {
            best = best.min(val);
            break;
        }
        best = val;
    }
    (u.ncols() as f64).sqrt() / best
}

/// Represents `x` at level `K_hat`, then rounds `level·a_i` to multiples of
/// `δ` on the frame `u_i/√N`: error ≤ δ/2, `max|δk_i| ≤ level + δ/2`.
pub fn kashin_quantize(kf: &KashinFrame, x: &[f64], delta: f64) -> Result<QuantizationResult> {
    let rep = kashin_represent(kf, x, KASHIN_MAX_ITER, kf.k_hat)?;
    let c: Vec<f64> = rep.a.iter().map(|v| v * rep.level).collect();
    let k = round_coeffs(&c, delta)?;
    QuantizationResult::assemble(
        &kf.quantization_frame(),
        x,
        k,
        delta,
        "kashin",
        json!({ "level": rep.level, "escalations": rep.escalations, "k_hat": kf.k_hat }),
    )
}
