use nalgebra::DMatrix;
use serde_json::json;

use crate::error::{invalid, Result};
use crate::frame_core::{Construction, Frame};
use crate::norm::LpNorm;

/// The union of the standard basis of ℝⁿ with a basis rotated pairwise by
/// small angles, together with the orthogonal difference family.
#[derive(Debug, Clone)]
pub struct TwoOnbUnion {
    pub frame: Frame,
    /// `z_i = e_i - f_i`, one per coordinate.
    pub differences: Vec<Vec<f64>>,
}

/// `eps[i]` tilts the coordinate pair `(2i, 2i+1)`.
///
/// Frame order is `e_1..e_n` followed by `f_1..f_n`; the union of two
/// orthonormal bases is tight with bound 2, so the dual functionals are the
/// vectors halved.
pub fn two_onb_union(n: usize, eps: &[f64]) -> Result<TwoOnbUnion> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(invalid(format!("two_onb_union needs an even positive dimension, got {n}")));
    }
    if eps.len() != n / 2 {
        return Err(invalid(format!("expected {} tilt parameters, got {}", n / 2, eps.len())));
    }
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e < 0.5)) {
        return Err(invalid(format!("tilt parameter {e} outside (0, 1/2)")));
    }
    let mut f = DMatrix::zeros(n, n);
    for (i, &e) in eps.iter().enumerate() {
        let c = (1.0 - e * e).sqrt();
        let (a, b) = (2 * i, 2 * i + 1);
        f[(a, a)] = c;
        f[(b, a)] = e;
        f[(a, b)] = -e;
        f[(b, b)] = c;
    }
    let eye = DMatrix::<f64>::identity(n, n);
    let differences = (0..n).map(|i| (eye.column(i) - f.column(i)).iter().copied().collect()).collect();
    let synthesis = DMatrix::from_fn(n, 2 * n, |r, c| if c < n { eye[(r, c)] } else { f[(r, c - n)] });
    let analysis = &synthesis * 0.5;
    let frame = Frame::from_matrices(synthesis, analysis, LpNorm::L2)?.with_construction(Construction {
        kind: "two_onb".into(),
        params: json!({ "n": n, "eps": eps }),
        seed: None,
    });
    Ok(TwoOnbUnion { frame, differences })
}

/// Index bookkeeping for the dense ±1 frame.
///
/// The auxiliary unit vectors `e(i, j)` (level `i ≤ L`, coordinate `j ≤ n`)
/// are the coordinates of ℝ^{nL}, with `e(i, j)` at position `(i-1)n + j`;
/// in particular `e(1, j) = e_j`. Pairs are listed along the diagonals
/// `i + j = d`, increasing `i` within a diagonal.
#[derive(Debug, Clone)]
pub struct Pm1Layout {
    pub n: usize,
    pub levels: usize,
    /// `(i, j)` per pair, both 1-based, in emission order.
    pub pairs: Vec<(usize, usize)>,
}

impl Pm1Layout {
    pub fn ambient_dim(&self) -> usize {
        self.n * self.levels
    }

    /// 0-based coordinate of `e(i, j)`.
    pub fn aux_coord(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }
}

pub fn pm1_layout(n: usize, levels: usize) -> Pm1Layout {
    let mut pairs = Vec::with_capacity(n * levels);
    for d in 2..=n + levels {
        for i in 1..d {
            let j = d - i;
            if i <= levels && j <= n {
                pairs.push((i, j));
            }
        }
    }
    Pm1Layout { n, levels, pairs }
}

/// Finite section of the semi-normalized frame whose {-1, 0, 1}
/// combinations are dense in the unit ball.
///
/// Pair `(i, j)` contributes `2^-i e_j + e(i, j)` followed by `e(i, j)`.
/// Lives in ℝ^{nL}; analysis uses the canonical dual.
pub fn dense_pm1_frame(n: usize, levels: usize) -> Result<Frame> {
    if n == 0 || levels == 0 {
        return Err(invalid("dense_pm1_frame needs n ≥ 1 and L ≥ 1"));
    }
    let layout = pm1_layout(n, levels);
    let dim = layout.ambient_dim();
    let mut synthesis = DMatrix::zeros(dim, 2 * layout.pairs.len());
    for (p, &(i, j)) in layout.pairs.iter().enumerate() {
        let aux = layout.aux_coord(i, j);
        synthesis[(j - 1, 2 * p)] += 0.5f64.powi(i as i32);
        synthesis[(aux, 2 * p)] += 1.0;
        synthesis[(aux, 2 * p + 1)] = 1.0;
    }
    let frame = Frame::from_matrices(synthesis.clone(), synthesis, LpNorm::L2)?.canonical_dual()?;
    Ok(frame.with_construction(Construction {
        kind: "dense_pm1".into(),
        params: json!({ "n": n, "L": levels }),
        seed: None,
    }))
}

/// Signed digits `ε(i, j) ∈ {-1, 0, 1}` with `|x_j - Σ_i ε(i, j) 2^-i| ≤ 2^-L`
/// for `|x_j| ≤ 1`, returned as integer coefficients on the frame of
/// [`dense_pm1_frame`]: `ε` on the first vector of each pair, `-ε` on the
/// second, so the auxiliary parts cancel.
pub fn pm1_digits(n: usize, levels: usize, x: &[f64]) -> Result<Vec<i64>> {
    crate::error::check_dim(n, x.len())?;
    if x.iter().any(|v| v.abs() > 1.0) {
        return Err(invalid("pm1_digits needs |x_j| ≤ 1"));
    }
    let layout = pm1_layout(n, levels);
    let mut residual = x.to_vec();
    let mut digits = vec![vec![0i64; n]; levels];
    for i in 1..=levels {
        let c = 0.5f64.powi(i as i32);
        for (j, r) in residual.iter_mut().enumerate() {
            if r.abs() >= c / 2.0 {
                let s = r.signum();
                digits[i - 1][j] = s as i64;
                *r -= s * c;
            }
        }
    }
    let mut k = vec![0i64; 2 * layout.pairs.len()];
    for (p, &(i, j)) in layout.pairs.iter().enumerate() {
        k[2 * p] = digits[i - 1][j - 1];
        k[2 * p + 1] = -digits[i - 1][j - 1];
    }
    Ok(k)
}
