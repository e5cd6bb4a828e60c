//! Seeded random sources shared by every randomized routine.
//!
//! All sampling goes through ChaCha20 seeded from a `u64`, so any run is
//! reproducible from its seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::norm::LpNorm;

/// Name recorded in serialized output for the generator below.
pub const GENERATOR: &str = "chacha20";

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// A point on the unit sphere of `norm`. Uniform for the Euclidean norm;
/// for other norms a Gaussian direction is rescaled onto the sphere.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, norm: LpNorm) -> Vec<f64> {
    loop {
        let mut v = gaussian_vec(rng, dim);
        let r = norm.eval(&v);
        if r > 1e-300 {
            v.iter_mut().for_each(|x| *x /= r);
            return v;
        }
    }
}

/// A uniform point of the unit ball of `norm`.
///
/// Euclidean: normalized Gaussian times `U^(1/n)`. Other norms: rejection
/// from the bounding cube `[-1, 1]^n` (every ℓp ball with p ≥ 1 sits inside it).
pub fn ball_point<R: Rng + ?Sized>(rng: &mut R, dim: usize, norm: LpNorm) -> Vec<f64> {
    if norm == LpNorm::L2 {
        let mut v = sphere_point(rng, dim, norm);
        let radius = rng.random::<f64>().powf(1.0 / dim as f64);
        v.iter_mut().for_each(|x| *x *= radius);
        return v;
    }
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if norm.eval(&v) <= 1.0 {
            return v;
        }
    }
}

/// Uniform point of the cube `[-1, 1]^dim`.
pub fn cube_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}
