//! Oversampled expansion of bandlimited signals and one-bit Σ-Δ
//! reconstruction.
//!
//! Fourier convention is unitary: `ĝ(ξ) = (2π)^-1/2 ∫ g(x) e^{-iξx} dx`.
//! A window is described by `φ = √(2π)·ρ̂`, equal to 1 on `[-π, π]` and
//! vanishing outside `[-eπ, eπ]` for an edge `1 < e ≤ λ`, so that
//! `f(x) = λ⁻¹ Σ f(n/λ) ρ(x - n/λ)` for every `f` with spectrum in `[-π, π]`.

mod pipeline;
mod signal;
mod window;

pub use pipeline::{reconstruct_expansion, sd_pipeline, PipelineConfig, Reconstruction, SdReport};
pub use signal::{sample, sinc, BandlimitedSignal, Samples};
pub use window::{SpectralWindow, WindowFamily};
