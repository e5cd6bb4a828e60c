//! Finite frames `(x_i, f_i)` in `(R^n, ‖·‖)`: analysis and synthesis maps,
//! the frame operator, Hilbert frame bounds, canonical duals, projection
//! constants and the associated coefficient-space norms.
//!
//! Functionals are stored as vectors and applied through the Euclidean inner
//! product. The ambient norm only enters norm evaluations.

mod io;
mod znorm;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, invalid, Error, Result};
use crate::norm::LpNorm;
use crate::rng;

pub use znorm::{ZNormValue, ZNormVariant, SIGN_MAX_EXHAUSTIVE_LIMIT, SIGN_MAX_SAMPLES};

/// Relative tolerance of the reconstruction identity `x = Σ f_i(x) x_i`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Provenance block attached to constructed frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Construction {
    pub kind: String,
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A finite Schauder frame: synthesis vectors `x_i` and analysis functionals
/// `f_i`, both stored as the columns of an `n × N` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    synthesis: DMatrix<f64>,
    analysis: DMatrix<f64>,
    ambient: LpNorm,
    construction: Option<Construction>,
}

/// Optimal constants `a ≤ b` in `a‖x‖² ≤ Σ⟨x, x_i⟩² ≤ b‖x‖²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertFrameBounds {
    pub a: f64,
    pub b: f64,
    /// False when the synthesis family does not span; `a` is then reported as 0.
    pub is_frame: bool,
}

impl Frame {
    /// Builds a frame from `n × N` synthesis and analysis matrices (one column
    /// per frame element).
    pub fn from_matrices(
        synthesis: DMatrix<f64>,
        analysis: DMatrix<f64>,
        ambient: LpNorm,
    ) -> Result<Self> {
        if synthesis.ncols() == 0 || synthesis.nrows() == 0 {
            return Err(invalid("a frame needs at least one vector in positive dimension"));
        }
        check_dim(synthesis.nrows(), analysis.nrows())?;
        check_dim(synthesis.ncols(), analysis.ncols())?;
        if synthesis.iter().chain(analysis.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("frame entries must be finite"));
        }
        Ok(Frame { synthesis, analysis, ambient, construction: None })
    }

    /// Builds a frame from lists of synthesis vectors and analysis vectors.
    pub fn new(synthesis: &[Vec<f64>], analysis: &[Vec<f64>], ambient: LpNorm) -> Result<Self> {
        check_dim(synthesis.len(), analysis.len())?;
        let n = synthesis.first().map(Vec::len).unwrap_or(0);
        Frame::from_matrices(columns(synthesis, n)?, columns(analysis, n)?, ambient)
    }

    /// Frame whose analysis functionals equal its synthesis vectors.
    pub fn self_dual(vectors: &[Vec<f64>], ambient: LpNorm) -> Result<Self> {
        Frame::new(vectors, vectors, ambient)
    }

    /// Standard basis of `R^n` with its coordinate functionals.
    pub fn orthonormal_basis(n: usize, ambient: LpNorm) -> Result<Self> {
        Frame::from_matrices(DMatrix::identity(n, n), DMatrix::identity(n, n), ambient)
    }

    pub fn with_construction(mut self, construction: Construction) -> Self {
        self.construction = Some(construction);
        self
    }

    pub fn construction(&self) -> Option<&Construction> {
        self.construction.as_ref()
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.synthesis.nrows()
    }

    /// Number of frame elements.
    pub fn len(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ambient(&self) -> LpNorm {
        self.ambient
    }

    pub fn synthesis_matrix(&self) -> &DMatrix<f64> {
        &self.synthesis
    }

    pub fn analysis_matrix(&self) -> &DMatrix<f64> {
        &self.analysis
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.synthesis.column(i).iter().copied().collect()
    }

    pub fn functional(&self, i: usize) -> Vec<f64> {
        self.analysis.column(i).iter().copied().collect()
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.vector(i)).collect()
    }

    pub fn functionals(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.functional(i)).collect()
    }

    /// Ambient norm of `x_i`.
    pub fn vector_norm(&self, i: usize) -> f64 {
        self.ambient.eval(self.synthesis.column(i).as_slice())
    }

    /// Coefficients `(f_i(x))_{i ≤ N}`.
    pub fn analysis(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let x = DVector::from_column_slice(x);
        Ok(self.analysis.tr_mul(&x).iter().copied().collect())
    }

    /// `Σ a_i x_i`.
    pub fn synthesis(&self, a: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.len(), a.len())?;
        let a = DVector::from_column_slice(a);
        Ok((&self.synthesis * a).iter().copied().collect())
    }

    /// `Σ δ k_i x_i` for integer coefficients.
    pub fn synthesis_int(&self, k: &[i64], delta: f64) -> Result<Vec<f64>> {
        let a: Vec<f64> = k.iter().map(|&k| delta * k as f64).collect();
        self.synthesis(&a)
    }

    /// `S = Σ x_i x_iᵀ`.
    pub fn frame_operator(&self) -> DMatrix<f64> {
        let s = &self.synthesis * self.synthesis.transpose();
        // symmetrize away rounding noise
        (&s + s.transpose()) * 0.5
    }

    pub fn frame_bounds(&self) -> HilbertFrameBounds {
        let eig = SymmetricEigen::new(self.frame_operator());
        let b = eig.eigenvalues.max().max(0.0);
        let min = eig.eigenvalues.min();
        let spans = b > 0.0 && min > 1e-12 * b;
        HilbertFrameBounds { a: if spans { min } else { 0.0 }, b, is_frame: spans }
    }

    /// The canonical dual: same synthesis vectors, analysis vectors `S⁻¹ x_i`.
    pub fn canonical_dual(&self) -> Result<Frame> {
        let s = self.frame_operator();
        let eig = SymmetricEigen::new(s.clone());
        let (min, max) = (eig.eigenvalues.min(), eig.eigenvalues.max());
        if !(max > 0.0 && min > 1e-12 * max) {
            return Err(Error::NotAFrame { min_eigenvalue: min });
        }
        let chol = s.cholesky().ok_or(Error::NotAFrame { min_eigenvalue: min })?;
        let analysis = chol.solve(&self.synthesis);
        Ok(Frame {
            synthesis: self.synthesis.clone(),
            analysis,
            ambient: self.ambient,
            construction: self.construction.clone(),
        })
    }

    /// `‖x − Σ f_i(x) x_i‖ / ‖x‖` in the ambient norm (0 for `x = 0`).
    pub fn reconstruction_error(&self, x: &[f64]) -> Result<f64> {
        let rec = self.synthesis(&self.analysis(x)?)?;
        let nx = self.ambient.eval(x);
        let err = self.ambient.dist(x, &rec);
        Ok(if nx == 0.0 { err } else { err / nx })
    }

    /// Largest relative reconstruction error over `samples` Gaussian vectors.
    pub fn check_reconstruction(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = rng::seeded(seed);
        (0..samples)
            .map(|_| {
                let x = rng::gaussian_vec(&mut rng, self.dim());
                self.reconstruction_error(&x).expect("dimension matches")
            })
            .fold(0.0, f64::max)
    }

    /// Sampled lower estimate of the projection constant
    /// `K = sup_{‖x‖≤1} max_{m≤k} ‖Σ_{i=m}^{k} f_i(x) x_i‖`.
    ///
    /// Exact `K` is a norm maximization over the unit ball; this is the max
    /// over `samples` unit vectors drawn with `seed`, so it never exceeds `K`.
    pub fn projection_constant_estimate(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = rng::seeded(seed);
        let mut best = 0.0f64;
        for _ in 0..samples.max(1) {
            let x = rng::sphere_point(&mut rng, self.dim(), self.ambient);
            let c = self.analysis(&x).expect("dimension matches");
            best = best.max(self.max_window_norm(&c));
        }
        best
    }

    /// `max_{m≤k} ‖Σ_{i=m}^{k} c_i x_i‖` over all index windows.
    pub(crate) fn max_window_norm(&self, c: &[f64]) -> f64 {
        let prefix = self.prefix_sums(c);
        let n = self.dim();
        let mut diff = vec![0.0; n];
        let mut best = 0.0f64;
        for k in 1..prefix.len() {
            for m in 0..k {
                for d in 0..n {
                    diff[d] = prefix[k][d] - prefix[m][d];
                }
                best = best.max(self.ambient.eval(&diff));
            }
        }
        best
    }

    /// `P_0 = 0, P_k = Σ_{i<k} c_i x_i`.
    pub(crate) fn prefix_sums(&self, c: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut prefix = Vec::with_capacity(self.len() + 1);
        let mut acc = vec![0.0; n];
        prefix.push(acc.clone());
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0.0 {
                for (d, x) in self.synthesis.column(i).iter().enumerate() {
                    acc[d] += ci * x;
                }
            }
            prefix.push(acc.clone());
        }
        prefix
    }

    /// Indices `i` with `x_i ≠ 0`.
    pub(crate) fn nonzero_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.synthesis.column(i).iter().any(|&v| v != 0.0))
            .collect()
    }
}

fn columns(vectors: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>> {
    for v in vectors {
        check_dim(n, v.len())?;
    }
    Ok(DMatrix::from_fn(n, vectors.len(), |r, c| vectors[c][r]))
}

/// A norm on coordinate space: an ℓp preset or one of the norms of the space
/// associated with a frame, evaluated on coefficient vectors.
#[derive(Clone, Debug)]
pub enum NormSpec {
    Lp(LpNorm),
    ZIntervalMax(Arc<Frame>),
    ZSignMax(Arc<Frame>),
}

impl NormSpec {
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        match self {
            NormSpec::Lp(n) => Ok(n.eval(v)),
            NormSpec::ZIntervalMax(f) => Ok(f.z_norm(v, ZNormVariant::IntervalMax)?.value),
            NormSpec::ZSignMax(f) => Ok(f.z_norm(v, ZNormVariant::SignMax)?.value),
        }
    }

    pub fn label(&self) -> String {
        match self {
            NormSpec::Lp(LpNorm::P(p)) => format!("l{p}"),
            NormSpec::Lp(LpNorm::Inf) => "linf".into(),
            NormSpec::ZIntervalMax(_) => "z_interval_max".into(),
            NormSpec::ZSignMax(_) => "z_sign_max".into(),
        }
    }
}
