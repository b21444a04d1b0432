//! Resolution and bit-depth adaptation around a host video codec.
//!
//! Frames are spatially halved and/or right-shifted before encoding, and
//! restored after decoding either by a residual CNN or by a Lanczos3 +
//! left-shift baseline. A small classifier decides per GOP whether spatial
//! down-sampling pays off.

pub mod cnn;
pub mod error;
pub mod metrics;
pub mod pipeline;
mod process;
pub mod qro;
pub mod resampler;
pub mod video_io;

pub use error::{Error, Result};
