//! Empirical checks of the quantitative bounds: enumeration of quantized
//! sets, covering radii, counting and volume-ratio formulas, bounded
//! coefficient sampling tests and scaling sweeps.

mod bcnqp;
mod density;
mod enumerate;
mod formulas;
mod sweep;

pub use bcnqp::{bcnqp_sample_test, BcnqpQuantizer, BcnqpReport};
pub use density::{covering_radius, density_check, DensityReport};
pub use enumerate::{enumerate_quantized_set, QuantizedSet, ENUMERATION_BITS, NODE_BUDGET};
pub use formulas::{
    counting_lower_bound, min_norm_ratio, frame_length_lower_bound, volume_ratio_bound, volume_ratio_bound2, BoundParams,
    GrowthFn,
};
pub use sweep::{scaling_sweep, ExperimentRecord, SweepConfig, SweepKind, CSV_HEADER};
