#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Physical-layer secure transmission over binary-input MISO wiretap fading
//! channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`precoding`] builds the artificial-noise basis `[p, Z]` from the
//!   legitimate channel and evaluates both receivers' SNRs.
//! * [`capacity`] evaluates binary-input AWGN capacity (series and quadrature),
//!   instantaneous secrecy capacity and the optimal signal/noise power split.
//! * [`polar`] holds the polar transform, code construction (Monte-Carlo and
//!   Gaussian approximation) and the successive-cancellation decoder.
//! * [`wiretap`] partitions indices into secret, random and frozen sets and
//!   wraps encoding/decoding of secret messages.
//! * [`sim`] runs the fading Monte-Carlo experiments (known eavesdropper CSI
//!   and distribution-only CDI) and writes result tables.
//!
//! Bit mapping throughout: bit 0 is sent as `+sqrt(P_u)`, bit 1 as
//! `-sqrt(P_u)`; LLRs are `ln P(y|0) / P(y|1)`. Index sets are 0-based.

pub mod capacity;
mod error;
pub mod polar;
pub mod precoding;
mod quadrature;
pub mod rng;
pub mod sim;
pub mod wiretap;

pub use error::{Error, Result};
