//! BT.709 limited-range YCbCr <-> RGB in [0, 1].

use super::frame::{ChromaFormat, Frame, FrameFormat, Plane};
use crate::error::{Error, Result};

const KR: f64 = 0.2126;
const KB: f64 = 0.0722;
const KG: f64 = 1.0 - KR - KB;

/// Full-resolution RGB picture, channels in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub channels: [Vec<f32>; 3],
}

impl RgbImage {
    pub fn filled(width: usize, height: usize, rgb: [f32; 3]) -> Self {
        RgbImage {
            width,
            height,
            channels: rgb.map(|v| vec![v; width * height]),
        }
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [f32; 3] {
        let i = y * self.width + x;
        [self.channels[0][i], self.channels[1][i], self.channels[2][i]]
    }
}

/// Offsets and ranges of the limited-range code values at `bits`.
#[derive(Clone, Copy)]
struct Levels {
    black: f64,
    luma_range: f64,
    chroma_mid: f64,
    chroma_range: f64,
    max: f64,
}

impl Levels {
    fn new(bits: u8) -> Self {
        let s = 2f64.powi(bits as i32 - 8);
        Levels {
            black: 16.0 * s,
            luma_range: 219.0 * s,
            chroma_mid: 128.0 * s,
            chroma_range: 224.0 * s,
            max: (2f64.powi(bits as i32)) - 1.0,
        }
    }

    fn quantize(&self, v: f64) -> u16 {
        (v + 0.5).floor().clamp(0.0, self.max) as u16
    }
}

/// Chroma plane brought to luma resolution. 4:2:0 uses bilinear interpolation
/// with chroma samples co-sited on even luma positions.
fn upsample_chroma(plane: &Plane, chroma: ChromaFormat, width: usize, height: usize) -> Vec<f64> {
    match chroma {
        ChromaFormat::C444 => plane.data.iter().map(|&v| v as f64).collect(),
        ChromaFormat::C420 => {
            let (cw, ch) = (plane.width, plane.height);
            let mut out = Vec::with_capacity(width * height);
            for y in 0..height {
                let y0 = (y / 2).min(ch - 1);
                let y1 = (y0 + 1).min(ch - 1);
                let fy = if y % 2 == 1 { 0.5 } else { 0.0 };
                for x in 0..width {
                    let x0 = (x / 2).min(cw - 1);
                    let x1 = (x0 + 1).min(cw - 1);
                    let fx = if x % 2 == 1 { 0.5 } else { 0.0 };
                    let top = plane.get(x0, y0) as f64 * (1.0 - fx) + plane.get(x1, y0) as f64 * fx;
                    let bot = plane.get(x0, y1) as f64 * (1.0 - fx) + plane.get(x1, y1) as f64 * fx;
                    out.push(top * (1.0 - fy) + bot * fy);
                }
            }
            out
        }
    }
}

/// Converts a frame to RGB, interpreting samples at its effective bit depth.
pub fn to_rgb(frame: &Frame) -> RgbImage {
    let lv = Levels::new(frame.effective_bit_depth);
    let (w, h) = (frame.width, frame.height);
    let cb = upsample_chroma(&frame.planes[1], frame.chroma, w, h);
    let cr = upsample_chroma(&frame.planes[2], frame.chroma, w, h);
    let mut channels = [
        Vec::with_capacity(w * h),
        Vec::with_capacity(w * h),
        Vec::with_capacity(w * h),
    ];
    for (i, &yv) in frame.planes[0].data.iter().enumerate() {
        let y = (yv as f64 - lv.black) / lv.luma_range;
        let pb = (cb[i] - lv.chroma_mid) / lv.chroma_range;
        let pr = (cr[i] - lv.chroma_mid) / lv.chroma_range;
        let r = y + 2.0 * (1.0 - KR) * pr;
        let b = y + 2.0 * (1.0 - KB) * pb;
        let g = (y - KR * r - KB * b) / KG;
        channels[0].push(r.clamp(0.0, 1.0) as f32);
        channels[1].push(g.clamp(0.0, 1.0) as f32);
        channels[2].push(b.clamp(0.0, 1.0) as f32);
    }
    RgbImage {
        width: w,
        height: h,
        channels,
    }
}

/// Converts RGB back to YCbCr with `format`; the result carries its full
/// coding bit depth as effective depth. 4:2:0 chroma is the 2×2 mean.
pub fn from_rgb(rgb: &RgbImage, format: FrameFormat) -> Result<Frame> {
    format.validate()?;
    if rgb.width != format.width || rgb.height != format.height {
        return Err(Error::Shape(format!(
            "RGB image {}x{} does not match frame {}x{}",
            rgb.width, rgb.height, format.width, format.height
        )));
    }
    let lv = Levels::new(format.coding_bit_depth);
    let n = rgb.width * rgb.height;
    let mut luma = Vec::with_capacity(n);
    let mut pb = Vec::with_capacity(n);
    let mut pr = Vec::with_capacity(n);
    for i in 0..n {
        let r = rgb.channels[0][i] as f64;
        let g = rgb.channels[1][i] as f64;
        let b = rgb.channels[2][i] as f64;
        let y = KR * r + KG * g + KB * b;
        luma.push(lv.quantize(lv.black + lv.luma_range * y));
        pb.push((b - y) / (2.0 * (1.0 - KB)));
        pr.push((r - y) / (2.0 * (1.0 - KR)));
    }
    let (cw, ch) = format.chroma.chroma_dims(format.width, format.height);
    let chroma_plane = |p: &[f64]| -> Plane {
        let data = match format.chroma {
            ChromaFormat::C444 => p
                .iter()
                .map(|&v| lv.quantize(lv.chroma_mid + lv.chroma_range * v))
                .collect(),
            ChromaFormat::C420 => {
                let w = format.width;
                let mut d = Vec::with_capacity(cw * ch);
                for cy in 0..ch {
                    for cx in 0..cw {
                        let i = 2 * cy * w + 2 * cx;
                        let mean = (p[i] + p[i + 1] + p[i + w] + p[i + w + 1]) / 4.0;
                        d.push(lv.quantize(lv.chroma_mid + lv.chroma_range * mean));
                    }
                }
                d
            }
        };
        Plane {
            width: cw,
            height: ch,
            data,
        }
    };
    let planes = [
        Plane {
            width: format.width,
            height: format.height,
            data: luma,
        },
        chroma_plane(&pb),
        chroma_plane(&pr),
    ];
    Frame::new(format, format.coding_bit_depth, planes)
}
