use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{invalid, Result};
use crate::frame_core::{Construction, Frame, HilbertFrameBounds};
use crate::norm::LpNorm;
use crate::quantizers::{dual_refined_level, min_level_with_u, KASHIN_MAX_ITER};
use crate::rng;

pub const KASHIN_MAX_REDRAWS: u64 = 8;
const RANK_TOL: f64 = 1e-10;
const REFINE_ITERATIONS: usize = 60;

/// Row-orthonormal `n × N` matrix with an empirical inclusion constant.
#[derive(Debug, Clone, PartialEq)]
pub struct KashinFrame {
    pub u: DMatrix<f64>,
    /// Largest representation level observed; a lower bound on the true
    /// inclusion constant.
    pub k_hat: f64,
    /// Seed requested by the caller.
    pub seed: u64,
    /// Seed of the draw that was kept (differs after rank-deficient redraws).
    pub seed_used: u64,
    pub n: usize,
    pub big_n: usize,
    pub trial_samples: usize,
    /// Set when `N < 2n`.
    pub advisory: Option<String>,
}

impl KashinFrame {
    /// Columns `u_i` as a self-dual frame; tight with bound 1.
    pub fn frame(&self) -> Frame {
        Frame::from_matrices(self.u.clone(), self.u.clone(), LpNorm::L2)
            .expect("validated at construction")
            .with_construction(self.construction())
    }

    /// `x_i = u_i/√N` with functionals `√N u_i`, the frame the quantizer
    /// rounds on.
    pub fn quantization_frame(&self) -> Frame {
        let s = (self.big_n as f64).sqrt();
        Frame::from_matrices(&self.u / s, &self.u * s, LpNorm::L2)
            .expect("validated at construction")
            .with_construction(self.construction())
    }

    pub fn construction(&self) -> Construction {
        Construction {
            kind: "kashin".into(),
            params: json!({
                "n": self.n,
                "N": self.big_n,
                "trial_samples": self.trial_samples,
                "k_hat": self.k_hat,
                "seed_used": self.seed_used,
                "generator": rng::GENERATOR,
            }),
            seed: Some(self.seed),
        }
    }

    /// `max |U Uᵀ - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        (&self.u * self.u.transpose() - DMatrix::<f64>::identity(self.n, self.n)).amax()
    }

    pub fn tightness(&self) -> HilbertFrameBounds {
        self.frame().frame_bounds()
    }

    /// Inverse of [`KashinFrame::frame`]: reads `U` and the recorded metadata.
    pub fn from_frame(frame: &Frame) -> Result<KashinFrame> {
        let c = frame.construction().filter(|c| c.kind == "kashin").ok_or_else(|| invalid("not a Kashin frame"))?;
        let p = &c.params;
        let field = |k: &str| p[k].as_u64().ok_or_else(|| invalid(format!("kashin params lack {k}")));
        let k_hat = p["k_hat"].as_f64().ok_or_else(|| invalid("kashin params lack k_hat"))?;
        let u = frame.synthesis_matrix().clone();
        let (n, big_n) = (u.nrows(), u.ncols());
        if field("n")? as usize != n || field("N")? as usize != big_n {
            return Err(invalid("kashin frame shape does not match its params"));
        }
        if (frame.analysis_matrix() - &u).amax() > 0.0 {
            return Err(invalid("expected the self-dual frame of U, not the quantization frame"));
        }
        let kf = KashinFrame {
            u,
            k_hat,
            seed: c.seed.unwrap_or(0),
            seed_used: field("seed_used")?,
            n,
            big_n,
            trial_samples: field("trial_samples")? as usize,
            advisory: advisory(n, big_n),
        };
        let defect = kf.orthonormality_defect();
        if defect > 1e-9 {
            return Err(invalid(format!("rows of U are not orthonormal (defect {defect:.3e})")));
        }
        Ok(kf)
    }
}

fn advisory(n: usize, big_n: usize) -> Option<String> {
    (big_n < 2 * n).then(|| format!("N = {big_n} < 2n = {}", 2 * n))
}

/// Orthonormal rows from the QR factorization of `Gᵀ` for a Gaussian
/// `n × N` matrix `G`, with `diag(R) ≥ 0`. `None` when `G` is rank deficient.
fn orthonormal_rows(n: usize, big_n: usize, seed: u64) -> Option<DMatrix<f64>> {
    let mut r = rng::seeded(seed);
    let g = DMatrix::from_row_iterator(n, big_n, rng::gaussian_vec(&mut r, n * big_n));
    let qr = g.transpose().qr();
    let rr = qr.r();
    let scale = rr.diagonal().amax();
    if rr.diagonal().iter().any(|d| d.abs() <= RANK_TOL * scale) {
        return None;
    }
    let mut q = qr.q();
    for c in 0..n {
        if rr[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    Some(q.transpose())
}

/// Draws the frame and estimates the inclusion constant from
/// `trial_samples` random unit vectors.
///
/// Each trial contributes its minimal representation level and also the
/// dual bound `√N/‖Uᵀy‖₁` after locally minimizing `‖Uᵀy‖₁` from the trial
/// direction. Both are lower bounds on the true constant.
pub fn kashin_frame(n: usize, big_n: usize, seed: u64, trial_samples: usize) -> Result<KashinFrame> {
    if n == 0 || big_n < n {
        return Err(invalid(format!("kashin_frame needs 1 ≤ n ≤ N, got n={n}, N={big_n}")));
    }
    let (u, seed_used) = (0..=KASHIN_MAX_REDRAWS)
        .find_map(|r| orthonormal_rows(n, big_n, seed.wrapping_add(r)).map(|u| (u, seed.wrapping_add(r))))
        .ok_or_else(|| invalid(format!("rank-deficient draws for {} consecutive seeds", KASHIN_MAX_REDRAWS + 1)))?;

    let mut r = rng::seeded(seed ^ 0x4b41_5348);
    let trials: Vec<Vec<f64>> = (0..trial_samples).map(|_| rng::sphere_point(&mut r, n, LpNorm::L2)).collect();
    let levels: Vec<f64> = trials
        .par_iter()
        .map(|x| {
            let primal = min_level_with_u(&u, x, KASHIN_MAX_ITER).map(|rep| rep.level)?;
            Ok(primal.max(dual_refined_level(&u, x, REFINE_ITERATIONS)))
        })
        .collect::<Result<_>>()?;
    let k_hat = levels.into_iter().fold(1.0, f64::max);
    let advisory = advisory(n, big_n);
    Ok(KashinFrame { u, k_hat, seed, seed_used, n, big_n, trial_samples, advisory })
}
