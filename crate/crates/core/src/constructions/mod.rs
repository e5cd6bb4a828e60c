//! Builders for explicit frames.
//!
//! Every builder returns frames that pass the reconstruction check of
//! [`Frame::check_reconstruction`](crate::Frame::check_reconstruction) and
//! carry a [`Construction`](crate::Construction) block naming the builder,
//! its parameters and its seed.

mod dyadic;
mod expand;
mod kashin;
mod schauder;
mod unions;

pub use dyadic::{dyadic_frame, DyadicFrame, DyadicIndex};
pub use expand::{expand_frame, net_augmented_frame, Expansion, NetAugmented, NET_RADIUS, NET_SEPARATION};
pub use kashin::{kashin_frame, KashinFrame, KASHIN_MAX_REDRAWS};
pub use schauder::{ball_net, dense_schauder_frame, DenseSchauderFrame};
pub use unions::{dense_pm1_frame, pm1_digits, pm1_layout, two_onb_union, Pm1Layout, TwoOnbUnion};
