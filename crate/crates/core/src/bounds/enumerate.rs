use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::frame_core::{Frame, NormSpec};

/// Largest `N·log₂(2·cap + 1)` accepted before enumerating.
pub const ENUMERATION_BITS: f64 = 40.0;
/// Search-tree nodes visited before giving up.
pub const NODE_BUDGET: u64 = 1 << 25;
/// Points closer than this (per coordinate) are identified.
const DEDUP_SCALE: f64 = 1e12;

/// Distinct points `Σ δ n_j x_j` whose coefficients satisfy `‖δ n‖_Z ≤ C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedSet {
    pub points: Vec<Vec<f64>>,
    /// One coefficient vector per point.
    pub coefficients: Vec<Vec<i64>>,
    pub delta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub z_norm: String,
    pub coeff_cap: i64,
    pub cardinality: usize,
    pub nodes_visited: u64,
}

pub(crate) fn point_key(p: &[f64]) -> Vec<i64> {
    p.iter().map(|v| (v * DEDUP_SCALE).round() as i64).collect()
}

struct Search<'a> {
    frame: &'a Frame,
    z: &'a NormSpec,
    delta: f64,
    c: f64,
    cap: i64,
    coeffs: Vec<i64>,
    scaled: Vec<f64>,
    found: BTreeMap<Vec<i64>, (Vec<f64>, Vec<i64>)>,
    nodes: u64,
}

impl Search<'_> {
    /// Coordinates `< depth` are assigned, the rest are zero. Restricting to
    /// a prefix never increases the coefficient norm, so a prefix over `C`
    /// cuts the whole subtree.
    fn visit(&mut self, depth: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::EnumerationBudget(format!(
                "more than {NODE_BUDGET} search nodes; lower coeff_cap (now {})",
                self.cap
            )));
        }
        if depth == self.coeffs.len() {
            let p = self.frame.synthesis_int(&self.coeffs, self.delta)?;
            self.found.entry(point_key(&p)).or_insert_with(|| (p, self.coeffs.clone()));
            return Ok(());
        }
        // zero first, then ±1, ±2, ... until both signs are pruned
        self.visit(depth + 1)?;
        for sign in [1i64, -1] {
            for mag in 1..=self.cap {
                let v = sign * mag;
                self.coeffs[depth] = v;
                self.scaled[depth] = self.delta * v as f64;
                if self.z.eval(&self.scaled)? > self.c {
                    break;
                }
                self.visit(depth + 1)?;
            }
            self.coeffs[depth] = 0;
            self.scaled[depth] = 0.0;
        }
        Ok(())
    }
}

/// Exact enumeration by depth-first branch and bound.
///
/// The pruning rule requires the coefficient norm to be monotone under
/// restriction to initial segments and along rays, which holds for ℓp norms
/// and for both interval and sign Z-norms.
pub fn enumerate_quantized_set(
    frame: &Frame,
    delta: f64,
    c: f64,
    z: &NormSpec,
    coeff_cap: i64,
) -> Result<QuantizedSet> {
    if !(delta > 0.0) || !(c >= 0.0) || coeff_cap < 0 {
        return Err(invalid(format!("bad enumeration parameters δ={delta}, C={c}, cap={coeff_cap}")));
    }
    let bits = frame.len() as f64 * ((2 * coeff_cap + 1) as f64).log2();
    if bits > ENUMERATION_BITS {
        return Err(Error::EnumerationBudget(format!(
            "N·log2(2·cap+1) = {bits:.1} exceeds {ENUMERATION_BITS}; lower coeff_cap (now {coeff_cap})"
        )));
    }
    let mut s = Search {
        frame,
        z,
        delta,
        c,
        cap: coeff_cap,
        coeffs: vec![0; frame.len()],
        scaled: vec![0.0; frame.len()],
        found: BTreeMap::new(),
        nodes: 0,
    };
    s.visit(0)?;
    let nodes_visited = s.nodes;
    let (points, coefficients): (Vec<_>, Vec<_>) = s.found.into_values().unzip();
    Ok(QuantizedSet {
        cardinality: points.len(),
        points,
        coefficients,
        delta,
        c,
        z_norm: z.label(),
        coeff_cap,
        nodes_visited,
    })
}
