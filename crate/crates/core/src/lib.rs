//! Polar and convolutional polar codes over the binary symmetric channel.
//!
//! * [`kernel`]: polarization kernels as invertible F2 maps.
//! * [`circuit`]: encoding circuits, causal cones and the width/complexity
//!   figures of a polarization step.
//! * [`channel`]: channel likelihoods, probability vectors, noise sampling.
//! * [`decoder`]: successive cancellation by causal-cone contraction, with
//!   a brute-force effective channel for cross-checking.
//! * [`selection`]: undetected-error profiles and frozen-set selection.
//! * [`harness`]: Monte Carlo runs, sweeps, CSV output and the code file.

pub mod channel;
pub mod circuit;
pub mod decoder;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod selection;

pub use channel::{ChannelModel, ProbVector};
pub use circuit::{Circuit, ComplexityEstimate};
pub use decoder::{Code, DecodeResult, Decoder};
pub use error::{Error, Result};
pub use harness::{CodeFile, Rate, SimRecord, SweepSpec};
pub use kernel::Kernel;
pub use selection::ErrorProfile;
