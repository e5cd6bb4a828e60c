use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowFamily {
    /// Cosine roll-off of `φ` between `π` and `eπ`; closed-form `ρ`, C¹ spectrum.
    RaisedCosine,
    /// C∞ roll-off `1 - s(t)` with `s(t) = ψ(t)/(ψ(t) + ψ(1-t))`, `ψ(t) = e^{-1/t}`;
    /// `ρ` tabulated by quadrature.
    MollifiedBump,
}

/// Table spacing and extent for tabulated windows.
const TABLE_STEP: f64 = 0.02;
const TABLE_EXTENT: f64 = 60.0;
/// Simpson panels over the roll-off band.
const ROLL_OFF_PANELS: usize = 2000;
/// Quadrature of `‖ρ′‖₁` for the closed-form window.
const DERIV_QUAD_STEP: f64 = 0.002;
const DERIV_QUAD_EXTENT: f64 = 400.0;
const DIFF_STEP: f64 = 1e-5;

#[derive(Debug)]
struct Table {
    rho: Vec<f64>,
    drho: Vec<f64>,
}

/// Smooth spectral window. `φ(ξ) = √(2π) ρ̂(ξ)` is 1 on `[-π, π]` and 0
/// outside `[-eπ, eπ]`.
#[derive(Debug, Clone)]
pub struct SpectralWindow {
    pub lambda: f64,
    pub family: WindowFamily,
    /// Spectral edge `e` in units of `π`, with `1 < e ≤ λ`.
    pub edge: f64,
    /// `‖ρ′‖_{L1}`, including `rho_prime_l1_tail`.
    pub rho_prime_l1: f64,
    /// Part of `rho_prime_l1` bounded analytically beyond the quadrature range.
    pub rho_prime_l1_tail: f64,
    table: Option<Arc<Table>>,
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// `cos(v/2) / (1 - (v/π)²)` written as `(π/2)·sinc(π(u-1)/2)/(u+1)` with
/// `u = |v|/π`, which is regular at `u = 1`.
fn taper(v: f64) -> f64 {
    let u = v.abs() / PI;
    let h = PI * (u - 1.0) / 2.0;
    let s = if h.abs() < 1e-8 { 1.0 - h * h / 6.0 } else { h.sin() / h };
    (PI / 2.0) * s / (u + 1.0)
}

impl SpectralWindow {
    /// Window whose roll-off uses the full band `[π, λπ]`.
    pub fn new(lambda: f64, family: WindowFamily) -> Result<Self> {
        Self::with_edge(lambda, family, lambda)
    }

    /// Window with roll-off on `[π, eπ]`, independent of `λ` as long as `e ≤ λ`.
    pub fn with_edge(lambda: f64, family: WindowFamily, edge: f64) -> Result<Self> {
        if !(lambda > 1.0) {
            return Err(invalid(format!("oversampling factor must exceed 1, got {lambda}")));
        }
        if !(edge > 1.0 && edge <= lambda) {
            return Err(invalid(format!("spectral edge must lie in (1, λ], got {edge} with λ = {lambda}")));
        }
        let mut w = Self { lambda, family, edge, rho_prime_l1: 0.0, rho_prime_l1_tail: 0.0, table: None };
        match family {
            WindowFamily::RaisedCosine => {
                let steps = (DERIV_QUAD_EXTENT / DERIV_QUAD_STEP) as usize;
                let body: f64 = (0..steps)
                    .map(|i| {
                        let x = (i as f64 + 0.5) * DERIV_QUAD_STEP;
                        w.rho_prime(x).abs()
                    })
                    .sum::<f64>()
                    * DERIV_QUAD_STEP
                    * 2.0;
                w.rho_prime_l1_tail = w.raised_cosine_deriv_tail(DERIV_QUAD_EXTENT);
                w.rho_prime_l1 = body + w.rho_prime_l1_tail;
            }
            WindowFamily::MollifiedBump => {
                w.table = Some(Arc::new(w.build_table()));
                let t = w.table.as_ref().expect("just built");
                // trapezoid on the tabulated derivative, both half-lines
                let inner: f64 = t.drho.iter().map(|v| v.abs()).sum::<f64>()
                    - 0.5 * (t.drho[0].abs() + t.drho[t.drho.len() - 1].abs());
                w.rho_prime_l1 = 2.0 * inner * TABLE_STEP;
            }
        }
        Ok(w)
    }

    fn roll_width(&self) -> f64 {
        (self.edge - 1.0) * PI
    }

    /// `φ(ξ) = √(2π) ρ̂(ξ)`.
    pub fn phi(&self, xi: f64) -> f64 {
        let a = xi.abs();
        if a <= PI {
            return 1.0;
        }
        let t = (a - PI) / self.roll_width();
        if t >= 1.0 {
            return 0.0;
        }
        match self.family {
            WindowFamily::RaisedCosine => 0.5 * (1.0 + (PI * t).cos()),
            WindowFamily::MollifiedBump => 1.0 - smooth_step(t),
        }
    }

    pub fn rho(&self, x: f64) -> f64 {
        match self.family {
            WindowFamily::RaisedCosine => {
                let w = self.roll_width();
                let c = (1.0 + self.edge) * PI / 2.0;
                let cx = c * x;
                let s = if cx.abs() < 1e-8 { 1.0 - cx * cx / 6.0 } else { cx.sin() / cx };
                c / PI * s * taper(w * x)
            }
            WindowFamily::MollifiedBump => self.lookup(x, false),
        }
    }

    pub fn rho_prime(&self, x: f64) -> f64 {
        match self.family {
            WindowFamily::RaisedCosine => (self.rho(x + DIFF_STEP) - self.rho(x - DIFF_STEP)) / (2.0 * DIFF_STEP),
            WindowFamily::MollifiedBump => self.lookup(x, true),
        }
    }

    /// Hermite interpolation of the tabulated `ρ` (or `ρ′` by differentiating
    /// the interpolant); zero beyond the table.
    fn lookup(&self, x: f64, derivative: bool) -> f64 {
        let t = self.table.as_ref().expect("tabulated window");
        let a = x.abs();
        let sign = if derivative && x < 0.0 { -1.0 } else { 1.0 };
        let pos = a / TABLE_STEP;
        let i = pos.floor() as usize;
        if i + 1 >= t.rho.len() {
            return 0.0;
        }
        let s = pos - i as f64;
        let (p0, p1) = (t.rho[i], t.rho[i + 1]);
        let (m0, m1) = (t.drho[i] * TABLE_STEP, t.drho[i + 1] * TABLE_STEP);
        if derivative {
            let d = (6.0 * s * s - 6.0 * s) * p0
                + (3.0 * s * s - 4.0 * s + 1.0) * m0
                + (-6.0 * s * s + 6.0 * s) * p1
                + (3.0 * s * s - 2.0 * s) * m1;
            sign * d / TABLE_STEP
        } else {
            let s2 = s * s;
            let s3 = s2 * s;
            (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * m1
        }
    }

    /// `ρ(x) = π⁻¹ ∫_0^{eπ} φ(ξ) cos(ξx) dξ` and its derivative: the flat part
    /// in closed form, the roll-off by Simpson's rule.
    fn build_table(&self) -> Table {
        let points = (TABLE_EXTENT / TABLE_STEP).round() as usize + 1;
        let h = self.roll_width() / ROLL_OFF_PANELS as f64;
        let nodes: Vec<(f64, f64)> = (0..=ROLL_OFF_PANELS)
            .map(|k| {
                let xi = PI + k as f64 * h;
                let wgt = if k == 0 || k == ROLL_OFF_PANELS {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                (xi, wgt * h / 3.0 * self.phi(xi))
            })
            .collect();
        let mut rho = Vec::with_capacity(points);
        let mut drho = Vec::with_capacity(points);
        for p in 0..points {
            let x = p as f64 * TABLE_STEP;
            let (flat, dflat) = if x == 0.0 {
                (PI, 0.0)
            } else {
                ((PI * x).sin() / x, (PI * x * (PI * x).cos() - (PI * x).sin()) / (x * x))
            };
            let mut r = 0.0;
            let mut d = 0.0;
            for &(xi, w) in &nodes {
                let (s, c) = (xi * x).sin_cos();
                r += w * c;
                d -= w * xi * s;
            }
            rho.push((flat + r) / PI);
            drho.push((dflat + d) / PI);
        }
        Table { rho, drho }
    }

    /// Bound on `2∫_X^∞ |ρ′|` for the closed-form window, from
    /// `|cos(v/2)/(1-(v/π)²)| ≤ 1/(u²-1) ≤ 4/(3u²)` when `u = wx/π ≥ 2`.
    fn raised_cosine_deriv_tail(&self, x0: f64) -> f64 {
        let w = self.roll_width();
        let c = (1.0 + self.edge) * PI / 2.0;
        if w * x0 / PI < 2.0 {
            return f64::INFINITY;
        }
        let one_side = (4.0 * PI / (3.0 * w * w)) * ((c + w / 2.0) / (2.0 * x0 * x0) + 1.0 / (3.0 * x0.powi(3)))
            + (32.0 * PI / 27.0) / (w * w * x0.powi(3));
        2.0 * one_side
    }

    /// Bound on `λ⁻¹ Σ |ρ(x - n/λ)|` over all `n` with `|x - n/λ| ≥ t0`,
    /// on both sides.
    pub fn tail_sum_bound(&self, t0: f64, lambda: f64) -> f64 {
        match self.family {
            WindowFamily::RaisedCosine => {
                // |ρ(t)| ≤ E(t) = 1/(π t (a²t² - 1)), a = w/π, decreasing for a t > 1
                let a = self.roll_width() / PI;
                if a * t0 <= 1.0 {
                    return f64::INFINITY;
                }
                let e = 1.0 / (PI * t0 * (a * a * t0 * t0 - 1.0));
                2.0 * e / lambda - (1.0 - 1.0 / (a * a * t0 * t0)).ln() / PI
            }
            WindowFamily::MollifiedBump => {
                // running maximum of |ρ| from the far end of the table inward
                let t = self.table.as_ref().expect("tabulated window");
                let mut envelope = vec![0.0; t.rho.len()];
                let mut m: f64 = 0.0;
                for i in (0..t.rho.len()).rev() {
                    m = m.max(t.rho[i].abs());
                    envelope[i] = m;
                }
                let mut total = 0.0;
                let mut s = t0;
                while s < TABLE_EXTENT {
                    let i = ((s / TABLE_STEP).floor() as usize).min(envelope.len() - 1);
                    total += envelope[i];
                    s += 1.0 / lambda;
                }
                2.0 * total / lambda
            }
        }
    }

    /// `∫ ρ(x) cos(ξx) dx` by the trapezoid rule on `[-X, X]`; approximates `φ(ξ)`.
    pub fn numeric_phi(&self, xi: f64, extent: f64, step: f64) -> f64 {
        let n = (extent / step).round() as usize;
        let mut acc = 0.5 * self.rho(0.0);
        for i in 1..=n {
            let x = i as f64 * step;
            acc += self.rho(x) * (xi * x).cos();
        }
        2.0 * acc * step
    }
}
