//! Overlapping square tiling of a picture and mean-blend re-assembly.

use super::color::RgbImage;
use crate::error::{Error, Result};

pub const DEFAULT_BLOCK_SIZE: usize = 96;
pub const DEFAULT_OVERLAP: usize = 4;

/// Square RGB tile, channels in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct RgbBlock {
    pub size: usize,
    pub channels: [Vec<f32>; 3],
}

impl RgbBlock {
    pub fn filled(size: usize, rgb: [f32; 3]) -> Self {
        RgbBlock {
            size,
            channels: rgb.map(|v| vec![v; size * size]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGrid {
    pub block_size: usize,
    pub overlap: usize,
    pub frame_width: usize,
    pub frame_height: usize,
    /// Top-left corners, row-major over (y, x).
    pub origins: Vec<(usize, usize)>,
}

fn axis_origins(dim: usize, block: usize, overlap: usize) -> Vec<usize> {
    let step = block - overlap;
    let mut out = vec![0];
    let mut pos = 0;
    while pos + block < dim {
        pos = (pos + step).min(dim - block);
        out.push(pos);
    }
    out
}

/// Plans a grid stepping by `block_size - overlap`, with the last block in
/// each axis placed flush against the border.
pub fn plan_blocks(width: usize, height: usize, block_size: usize, overlap: usize) -> Result<BlockGrid> {
    if block_size == 0 || overlap >= block_size {
        return Err(Error::InvalidArgument(format!(
            "overlap {overlap} must be below block size {block_size}"
        )));
    }
    if block_size > width || block_size > height {
        return Err(Error::InvalidArgument(format!(
            "frame {width}x{height} is smaller than a {block_size}px block"
        )));
    }
    let xs = axis_origins(width, block_size, overlap);
    let ys = axis_origins(height, block_size, overlap);
    let origins = ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
        .collect();
    Ok(BlockGrid {
        block_size,
        overlap,
        frame_width: width,
        frame_height: height,
        origins,
    })
}

pub fn extract_blocks(image: &RgbImage, grid: &BlockGrid) -> Result<Vec<RgbBlock>> {
    if image.width != grid.frame_width || image.height != grid.frame_height {
        return Err(Error::Shape(format!(
            "grid planned for {}x{} applied to {}x{}",
            grid.frame_width, grid.frame_height, image.width, image.height
        )));
    }
    let s = grid.block_size;
    Ok(grid
        .origins
        .iter()
        .map(|&(ox, oy)| {
            let channels = std::array::from_fn(|c| {
                let src = &image.channels[c];
                let mut out = Vec::with_capacity(s * s);
                for y in oy..oy + s {
                    let row = y * image.width + ox;
                    out.extend_from_slice(&src[row..row + s]);
                }
                out
            });
            RgbBlock { size: s, channels }
        })
        .collect())
}

/// Re-assembles blocks; pixels covered by several blocks take their mean.
pub fn aggregate_blocks(blocks: &[RgbBlock], grid: &BlockGrid) -> Result<RgbImage> {
    if blocks.len() != grid.origins.len() {
        return Err(Error::Shape(format!(
            "{} blocks for {} grid positions",
            blocks.len(),
            grid.origins.len()
        )));
    }
    let (w, h, s) = (grid.frame_width, grid.frame_height, grid.block_size);
    let mut sums = [vec![0f64; w * h], vec![0f64; w * h], vec![0f64; w * h]];
    let mut counts = vec![0u32; w * h];
    for (block, &(ox, oy)) in blocks.iter().zip(&grid.origins) {
        if block.size != s {
            return Err(Error::Shape(format!("block of size {} in a {s}px grid", block.size)));
        }
        for y in 0..s {
            let dst = (oy + y) * w + ox;
            for x in 0..s {
                counts[dst + x] += 1;
            }
            for c in 0..3 {
                let src = &block.channels[c][y * s..(y + 1) * s];
                for (acc, &v) in sums[c][dst..dst + s].iter_mut().zip(src) {
                    *acc += v as f64;
                }
            }
        }
    }
    let channels = sums.map(|sum| {
        sum.iter()
            .zip(&counts)
            .map(|(&v, &n)| (v / n as f64) as f32)
            .collect()
    });
    Ok(RgbImage {
        width: w,
        height: h,
        channels,
    })
}
