//! Raw planar video, colour conversion and block tiling.

mod color;
mod frame;
mod raw;
mod tiling;

pub use color::{from_rgb, to_rgb, RgbImage};
pub use frame::{ChromaFormat, Frame, FrameFormat, Plane, VideoSequence};
pub use raw::{decode_raw, encode_frame, encode_raw, read_raw_video, write_raw_video};
pub use tiling::{
    aggregate_blocks, extract_blocks, plan_blocks, BlockGrid, RgbBlock, DEFAULT_BLOCK_SIZE,
    DEFAULT_OVERLAP,
};
