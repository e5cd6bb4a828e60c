use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{invalid, Result};
use crate::frame_core::{Construction, Frame};

/// Position `(i, j, s)` in the dyadic frame; `i` and `j` are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicIndex {
    pub i: usize,
    pub j: usize,
    pub s: u8,
}

/// Frame of length `2nm` built over a biorthogonal basis `(e_i, e*_i)`:
///
/// `x_(i,j,0) = e_1`, `x_(i,j,1) = e_1 + 2^-j/(1 - 2^-m) e_i`,
/// `f_(i,j,0) = -e*_i`, `f_(i,j,1) = e*_i`, ordered lexicographically.
#[derive(Debug, Clone)]
pub struct DyadicFrame {
    pub frame: Frame,
    pub base: Frame,
    pub n: usize,
    pub m: usize,
}

impl DyadicFrame {
    pub fn len(&self) -> usize {
        2 * self.n * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// 0-based flattened position.
    pub fn flatten(&self, idx: DyadicIndex) -> usize {
        debug_assert!(idx.i >= 1 && idx.i <= self.n && idx.j >= 1 && idx.j <= self.m && idx.s <= 1);
        ((idx.i - 1) * self.m + (idx.j - 1)) * 2 + idx.s as usize
    }

    pub fn unflatten(&self, pos: usize) -> DyadicIndex {
        let s = (pos % 2) as u8;
        let q = pos / 2;
        DyadicIndex { i: q / self.m + 1, j: q % self.m + 1, s }
    }

    /// `2^-j / (1 - 2^-m)`; these weights sum to one over `j ≤ m`.
    pub fn weight(&self, j: usize) -> f64 {
        dyadic_weight(j, self.m)
    }

    /// Recovers the dyadic structure of a frame written by [`dyadic_frame`].
    pub fn from_frame(frame: &Frame) -> Result<DyadicFrame> {
        let c = frame.construction().filter(|c| c.kind == "dyadic").ok_or_else(|| invalid("not a dyadic frame"))?;
        let get = |k: &str| c.params[k].as_u64().map(|v| v as usize).ok_or_else(|| invalid(format!("dyadic params lack {k}")));
        let (n, m) = (get("n")?, get("m")?);
        if m == 0 || frame.dim() != n || frame.len() != 2 * n * m {
            return Err(invalid(format!("dyadic frame shape does not match n = {n}, m = {m}")));
        }
        // e_1 sits at (1,1,0); e_i = (x_(i,1,1) - e_1)/w_1 and e*_i = f_(i,1,1)
        let e1 = frame.synthesis_matrix().column(0).into_owned();
        let w = dyadic_weight(1, m);
        let mut e = DMatrix::zeros(n, n);
        let mut f = DMatrix::zeros(n, n);
        for i in 0..n {
            let pos = i * m * 2 + 1;
            e.set_column(i, &((frame.synthesis_matrix().column(pos) - &e1) / w));
            f.set_column(i, &frame.analysis_matrix().column(pos));
        }
        let rebuilt = dyadic_frame(&Frame::from_matrices(e, f, frame.ambient())?, m)?;
        let defect = (rebuilt.frame.synthesis_matrix() - frame.synthesis_matrix())
            .amax()
            .max((rebuilt.frame.analysis_matrix() - frame.analysis_matrix()).amax());
        if defect > BIORTHOGONAL_TOL {
            return Err(invalid(format!("frame differs from the dyadic frame over its base by {defect:.3e}")));
        }
        // keep the stored vectors so results match the original bit for bit
        Ok(DyadicFrame { frame: frame.clone(), ..rebuilt })
    }
}

pub(crate) fn dyadic_weight(j: usize, m: usize) -> f64 {
    0.5f64.powi(j as i32) / (1.0 - 0.5f64.powi(m as i32))
}

/// Biorthogonality tolerance for the base.
const BIORTHOGONAL_TOL: f64 = 1e-9;

pub fn dyadic_frame(base: &Frame, m: usize) -> Result<DyadicFrame> {
    let n = base.dim();
    if base.len() != n {
        return Err(invalid(format!("dyadic base must be a basis: n = {n}, N = {}", base.len())));
    }
    if m == 0 {
        return Err(invalid("dyadic_frame needs m ≥ 1"));
    }
    let gram = base.analysis_matrix().transpose() * base.synthesis_matrix();
    let defect = (gram - DMatrix::<f64>::identity(n, n)).amax();
    if defect > BIORTHOGONAL_TOL {
        return Err(invalid(format!("base is not biorthogonal (defect {defect:.3e})")));
    }
    let e = base.synthesis_matrix();
    let f = base.analysis_matrix();
    let len = 2 * n * m;
    let mut synthesis = DMatrix::zeros(n, len);
    let mut analysis = DMatrix::zeros(n, len);
    let mut pos = 0;
    for i in 0..n {
        for j in 1..=m {
            let w = dyadic_weight(j, m);
            synthesis.set_column(pos, &e.column(0));
            analysis.set_column(pos, &(-f.column(i)));
            synthesis.set_column(pos + 1, &(e.column(0) + e.column(i) * w));
            analysis.set_column(pos + 1, &f.column(i));
            pos += 2;
        }
    }
    let frame = Frame::from_matrices(synthesis, analysis, base.ambient())?.with_construction(Construction {
        kind: "dyadic".into(),
        params: json!({ "n": n, "m": m }),
        seed: None,
    });
    Ok(DyadicFrame { frame, base: base.clone(), n, m })
}
