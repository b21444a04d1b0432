use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{network_forward, ModelWeights};
use crate::error::{Error, Result};
use crate::video_io::{
    aggregate_blocks, extract_blocks, from_rgb, plan_blocks, to_rgb, Frame, DEFAULT_BLOCK_SIZE,
    DEFAULT_OVERLAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tiling {
    pub block_size: usize,
    pub overlap: usize,
}

impl Default for Tiling {
    fn default() -> Self {
        Tiling {
            block_size: DEFAULT_BLOCK_SIZE,
            overlap: DEFAULT_OVERLAP,
        }
    }
}

/// Restores a decoded frame to full bit depth with the network.
///
/// The input is read at its effective bit depth; spatial up-sampling, if
/// any, must already have happened. Blocks are processed in parallel and
/// re-assembled with mean blending.
pub fn reconstruct_frame(frame: &Frame, model: &ModelWeights, tiling: Tiling) -> Result<Frame> {
    if frame.width < tiling.block_size || frame.height < tiling.block_size {
        return Err(Error::InvalidArgument(format!(
            "{}x{} frame is smaller than one {}px block",
            frame.width, frame.height, tiling.block_size
        )));
    }
    let rgb = to_rgb(frame);
    let grid = plan_blocks(frame.width, frame.height, tiling.block_size, tiling.overlap)?;
    let blocks = extract_blocks(&rgb, &grid)?;
    let restored = blocks
        .par_iter()
        .map(|b| network_forward(model, b))
        .collect::<Result<Vec<_>>>()?;
    let out = aggregate_blocks(&restored, &grid)?;
    from_rgb(&out, frame.format())
}
