//! Polar codes over binary-input AWGN channels: the transform, bit-channel
//! construction, successive-cancellation decoding and the construction
//! cache file.

mod construct;
mod decode;
mod record;
mod transform;

pub use construct::{construct_ga, construct_mc, ga_means, ConstructionMethod, PolarConstruction};
pub use decode::{channel_llr, sc_decode, ScDecoder, LLR_CLIP};
pub use record::ConstructionRecord;
pub use transform::{polar_transform, polar_transform_in_place};
