use crate::error::{Error, Result};
use crate::video_io::Frame;

/// Reported PSNR for identical content.
pub const PSNR_CAP: f64 = 999.0;

/// Luma PSNR in dB with peak `2^coding_bit_depth - 1`, capped at [`PSNR_CAP`].
pub fn psnr_luma(reference: &Frame, test: &Frame) -> Result<f64> {
    let (a, b) = (reference.luma(), test.luma());
    if a.width != b.width || a.height != b.height || reference.coding_bit_depth != test.coding_bit_depth {
        return Err(Error::Shape(format!(
            "{}x{}@{} vs {}x{}@{}",
            a.width, a.height, reference.coding_bit_depth, b.width, b.height, test.coding_bit_depth
        )));
    }
    let sse: u64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(PSNR_CAP);
    }
    let mse = sse as f64 / a.data.len() as f64;
    let max = ((1u32 << reference.coding_bit_depth) - 1) as f64;
    Ok((10.0 * (max * max / mse).log10()).min(PSNR_CAP))
}

/// Mean of per-frame luma PSNR.
pub fn sequence_psnr_luma(reference: &[Frame], test: &[Frame]) -> Result<f64> {
    if reference.len() != test.len() || reference.is_empty() {
        return Err(Error::Shape(format!(
            "{} reference frames vs {} test frames",
            reference.len(),
            test.len()
        )));
    }
    let mut total = 0.0;
    for (a, b) in reference.iter().zip(test) {
        total += psnr_luma(a, b)?;
    }
    Ok(total / reference.len() as f64)
}
