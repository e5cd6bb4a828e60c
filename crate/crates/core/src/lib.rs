//! Coefficient quantization for finite frames in normed spaces.
//!
//! * [`frame_core`]: frames, frame operator, duals, projection constants and
//!   the norms of the associated coefficient space.
//! * [`constructions`]: explicit frames (unions of bases, dense ±1 frames,
//!   net-based Schauder frames, dyadic frames, expansions, Kashin frames).
//! * [`quantizers`]: rounding, dyadic bounded-coefficient quantization,
//!   ℓ∞ representation plus rounding, the iterative extension of a quantizer
//!   from the unit ball to the whole space, and first-order Σ-Δ.
//! * [`bandlimited`]: oversampled bandlimited expansions with one-bit Σ-Δ
//!   coefficients.
//! * [`bounds`]: lattice enumeration, covering radius estimates, counting and
//!   volume-ratio bounds, sampling tests and scaling sweeps.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandlimited;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod frame_core;
pub mod norm;
pub mod quantizers;
pub mod rng;

pub use error::{Error, Result};
pub use frame_core::{Construction, Frame, HilbertFrameBounds, NormSpec, ZNormValue, ZNormVariant};
pub use norm::LpNorm;
