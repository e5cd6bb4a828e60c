use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::QuantizedSet;
use crate::error::{invalid, Error, Result};
use crate::norm::LpNorm;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub epsilon_hat: f64,
    pub samples: usize,
    pub seed: u64,
    pub ambient: String,
    pub cardinality: usize,
}

/// Largest distance from sampled points of the unit ball to the nearest point
/// of `set`. Every fourth sample lies on the sphere, the rest are uniform in
/// the ball. A sampled lower estimate of the true covering radius.
pub fn covering_radius(set: &[Vec<f64>], dim: usize, norm: LpNorm, samples: usize, seed: u64) -> f64 {
    let mut r = rng::seeded(seed);
    let probes: Vec<Vec<f64>> = (0..samples)
        .map(|s| if s % 4 == 3 { rng::sphere_point(&mut r, dim, norm) } else { rng::ball_point(&mut r, dim, norm) })
        .collect();
    probes
        .par_iter()
        .map(|x| set.iter().map(|p| norm.dist(x, p)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max)
}

/// Empirical covering radius of the ambient unit ball by the points of `set`.
pub fn density_check(set: &QuantizedSet, ambient: LpNorm, samples: usize, seed: u64) -> Result<DensityReport> {
    if set.points.is_empty() {
        return Err(Error::EmptySet);
    }
    if samples == 0 {
        return Err(invalid("density check needs at least one sample"));
    }
    let dim = set.points[0].len();
    Ok(DensityReport {
        epsilon_hat: covering_radius(&set.points, dim, ambient, samples, seed),
        samples,
        seed,
        ambient: crate::frame_core::NormSpec::Lp(ambient).label(),
        cardinality: set.cardinality,
    })
}
