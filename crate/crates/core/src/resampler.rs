//! Separable Lanczos3 and nearest-neighbour 2× resampling, plus
//! effective-bit-depth shifting.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::video_io::{ChromaFormat, Frame, Plane};

const LOBES: f64 = 3.0;

/// Lanczos3 window: `sinc(x)·sinc(x/3)` on |x| < 3, zero outside.
pub fn lanczos3(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x.abs() >= LOBES {
        return 0.0;
    }
    let px = PI * x;
    LOBES * px.sin() * (px / LOBES).sin() / (px * px)
}

/// Taps for one output phase, starting at `offset` source samples from the
/// phase's base position.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelPhase {
    pub offset: isize,
    pub taps: Vec<f64>,
}

/// A polyphase 1-D resampling kernel for a fixed rational ratio.
///
/// Output sample `o` uses phase `o % phases.len()`, anchored at source index
/// `(o / phases.len()) * source_step + phase.offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterKernel {
    pub phases: Vec<KernelPhase>,
    pub source_step: usize,
    /// Half-width of the kernel in source samples.
    pub support: f64,
    /// Output/input size ratio as (numerator, denominator).
    pub scale: (u32, u32),
}

impl FilterKernel {
    /// Builds the kernel for integer up (`up > 1`) or down (`down > 1`)
    /// factor with pixel-centre alignment. Downscaling dilates the window by
    /// the factor so its cutoff tracks the output Nyquist rate.
    fn lanczos(up: usize, down: usize) -> Self {
        let stretch = down as f64;
        let support = LOBES * stretch;
        let phases = (0..up)
            .map(|p| {
                // Source coordinate of output sample p in the first cycle.
                let pos = (p as f64 + 0.5) * down as f64 / up as f64 - 0.5;
                let first = (pos - support).floor() as isize + 1;
                let last = (pos + support).ceil() as isize - 1;
                let mut taps: Vec<f64> = (first..=last)
                    .map(|j| lanczos3((j as f64 - pos) / stretch))
                    .collect();
                let sum: f64 = taps.iter().sum();
                taps.iter_mut().for_each(|t| *t /= sum);
                KernelPhase { offset: first, taps }
            })
            .collect();
        FilterKernel {
            phases,
            source_step: down,
            support,
            scale: (up as u32, down as u32),
        }
    }

    /// Anti-aliased 2:1 decimation kernel, 12 taps.
    pub fn downsample_2x() -> Self {
        Self::lanczos(1, 2)
    }

    /// 1:2 interpolation kernel, 6 taps per phase.
    pub fn upsample_2x() -> Self {
        Self::lanczos(2, 1)
    }

    pub fn output_len(&self, input: usize) -> usize {
        input * self.scale.0 as usize / self.scale.1 as usize
    }

    /// Filters one line with edge replication.
    fn apply_line(&self, src: &[f64], stride: usize, len: usize, out: &mut [f64], out_stride: usize) {
        let n = self.phases.len();
        let last = len as isize - 1;
        for o in 0..self.output_len(len) {
            let phase = &self.phases[o % n];
            let base = ((o / n) * self.source_step) as isize + phase.offset;
            let mut acc = 0.0;
            for (k, &t) in phase.taps.iter().enumerate() {
                let j = (base + k as isize).clamp(0, last) as usize;
                acc += t * src[j * stride];
            }
            out[o * out_stride] = acc;
        }
    }
}

/// Separable filtering: rows with `kernel`, then columns with the same kernel.
/// Returns the unrounded result and its dimensions.
pub fn filter_plane(src: &[f64], width: usize, height: usize, kernel: &FilterKernel) -> (Vec<f64>, usize, usize) {
    let ow = kernel.output_len(width);
    let oh = kernel.output_len(height);
    let mut rows = vec![0.0; ow * height];
    for y in 0..height {
        kernel.apply_line(&src[y * width..], 1, width, &mut rows[y * ow..], 1);
    }
    let mut out = vec![0.0; ow * oh];
    for x in 0..ow {
        kernel.apply_line(&rows[x..], ow, height, &mut out[x..], ow);
    }
    (out, ow, oh)
}

fn round_clip(v: f64, max: u16) -> u16 {
    (v + 0.5).floor().clamp(0.0, max as f64) as u16
}

/// Resamples one plane with `kernel`, rounding half-up and clipping to `max`.
pub fn resample_plane(plane: &Plane, kernel: &FilterKernel, max: u16) -> Plane {
    let src: Vec<f64> = plane.data.iter().map(|&v| v as f64).collect();
    let (out, w, h) = filter_plane(&src, plane.width, plane.height, kernel);
    Plane {
        width: w,
        height: h,
        data: out.into_iter().map(|v| round_clip(v, max)).collect(),
    }
}

fn map_planes(frame: &Frame, width: usize, height: usize, f: impl Fn(&Plane) -> Plane) -> Result<Frame> {
    let planes = [f(&frame.planes[0]), f(&frame.planes[1]), f(&frame.planes[2])];
    let mut format = frame.format();
    format.width = width;
    format.height = height;
    Frame::new(format, frame.effective_bit_depth, planes)
}

/// Halves both dimensions with the anti-aliased Lanczos3 kernel. Chroma
/// planes are filtered at their own resolution.
pub fn lanczos3_downsample_2x(frame: &Frame) -> Result<Frame> {
    let align = match frame.chroma {
        ChromaFormat::C420 => 4,
        ChromaFormat::C444 => 2,
    };
    if frame.width % align != 0 || frame.height % align != 0 {
        return Err(Error::InvalidArgument(format!(
            "{}x{} frame cannot be halved ({:?} needs multiples of {align})",
            frame.width, frame.height, frame.chroma
        )));
    }
    let kernel = FilterKernel::downsample_2x();
    let max = frame.max_value();
    map_planes(frame, frame.width / 2, frame.height / 2, |p| resample_plane(p, &kernel, max))
}

pub fn lanczos3_upsample_2x(frame: &Frame) -> Result<Frame> {
    let kernel = FilterKernel::upsample_2x();
    let max = frame.max_value();
    map_planes(frame, frame.width * 2, frame.height * 2, |p| resample_plane(p, &kernel, max))
}

pub fn nearest_upsample_plane(plane: &Plane) -> Plane {
    let w = plane.width * 2;
    let mut data = Vec::with_capacity(w * plane.height * 2);
    for row in plane.rows() {
        let start = data.len();
        data.extend(row.iter().flat_map(|&v| [v, v]));
        data.extend_from_within(start..start + w);
    }
    Plane {
        width: w,
        height: plane.height * 2,
        data,
    }
}

/// Replicates every sample into a 2×2 block.
pub fn nearest_upsample_2x(frame: &Frame) -> Result<Frame> {
    map_planes(frame, frame.width * 2, frame.height * 2, nearest_upsample_plane)
}

/// Right-shifts every sample by `bits`, lowering the effective bit depth.
pub fn ebd_downshift(frame: &Frame, bits: u8) -> Result<Frame> {
    if bits == 0 || bits >= frame.effective_bit_depth {
        return Err(Error::InvalidArgument(format!(
            "cannot drop {bits} bits from a {}-bit effective depth",
            frame.effective_bit_depth
        )));
    }
    let mut out = frame.clone();
    for p in out.planes.iter_mut() {
        p.data.iter_mut().for_each(|v| *v >>= bits);
    }
    out.effective_bit_depth -= bits;
    Ok(out)
}

/// Left-shifts every sample by `bits`, restoring effective depth.
pub fn ebd_upshift(frame: &Frame, bits: u8) -> Result<Frame> {
    if frame.effective_bit_depth as u32 + bits as u32 > frame.coding_bit_depth as u32 {
        return Err(Error::InvalidArgument(format!(
            "shifting {}-bit content up by {bits} exceeds the {}-bit container",
            frame.effective_bit_depth, frame.coding_bit_depth
        )));
    }
    let mut out = frame.clone();
    for p in out.planes.iter_mut() {
        p.data.iter_mut().for_each(|v| *v <<= bits);
    }
    out.effective_bit_depth += bits;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::video_io::FrameFormat;

    fn frame444(w: usize, h: usize, f: impl Fn(usize, usize) -> u16) -> Frame {
        let mut fr = Frame::filled(FrameFormat::new(w, h, 10, ChromaFormat::C444), 0, 512).unwrap();
        for y in 0..h {
            for x in 0..w {
                fr.planes[0].set(x, y, f(x, y));
            }
        }
        fr
    }

    #[test]
    fn kernel_shapes() {
        let down = FilterKernel::downsample_2x();
        assert_eq!(down.phases.len(), 1);
        assert_eq!(down.phases[0].taps.len(), 12);
        assert_eq!(down.phases[0].offset, -5);
        let up = FilterKernel::upsample_2x();
        assert_eq!(up.phases.len(), 2);
        assert!(up.phases.iter().all(|p| p.taps.len() == 6));
        for p in down.phases.iter().chain(&up.phases) {
            assert!((p.taps.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        // symmetric decimation taps
        let t = &down.phases[0].taps;
        for k in 0..6 {
            assert!((t[k] - t[11 - k]).abs() < 1e-12);
        }
    }

    #[test]
    fn lanczos_zeros_at_integers() {
        assert_eq!(lanczos3(0.0), 1.0);
        for k in [1.0, 2.0, -1.0, -2.0] {
            assert!(lanczos3(k).abs() < 1e-12);
        }
        assert_eq!(lanczos3(3.0), 0.0);
    }

    #[test]
    fn constant_is_fixed_point() {
        let f = Frame::filled(FrameFormat::new(16, 8, 10, ChromaFormat::C420), 100, 700).unwrap();
        let d = lanczos3_downsample_2x(&f).unwrap();
        assert!(d.planes[0].data.iter().all(|&v| v == 100));
        assert!(d.planes[1].data.iter().all(|&v| v == 700));
        let u = lanczos3_upsample_2x(&f).unwrap();
        assert!(u.planes[0].data.iter().all(|&v| v == 100));
        assert_eq!((u.width, u.planes[1].width), (32, 16));
    }

    #[test]
    fn period_two_stripes_average_out() {
        let f = frame444(32, 32, |_, y| if y % 2 == 0 { 200 } else { 600 });
        let d = lanczos3_downsample_2x(&f).unwrap();
        for y in 3..13 {
            for x in 0..16 {
                assert!((d.planes[0].get(x, y) as i32 - 400).abs() <= 1);
            }
        }
    }

    #[test]
    fn odd_dims_rejected() {
        let f = frame444(6, 5, |_, _| 0);
        assert!(lanczos3_downsample_2x(&f).is_err());
        let g = Frame::filled(FrameFormat::new(6, 8, 10, ChromaFormat::C420), 1, 1).unwrap();
        assert!(lanczos3_downsample_2x(&g).is_err());
    }

    #[test]
    fn nearest_quadrants() {
        let mut f = frame444(2, 2, |_, _| 0);
        f.planes[0].data = vec![1, 2, 3, 4];
        let u = nearest_upsample_2x(&f).unwrap();
        assert_eq!(
            u.planes[0].data,
            vec![1, 1, 2, 2, 1, 1, 2, 2, 3, 3, 4, 4, 3, 3, 4, 4]
        );
        let back: Vec<u16> = (0..2).flat_map(|y| (0..2).map(move |x| (x, y))).map(|(x, y)| u.planes[0].get(2 * x, 2 * y)).collect();
        assert_eq!(back, f.planes[0].data);
    }

    #[test]
    fn shifts() {
        let f = frame444(2, 1, |x, _| if x == 0 { 1023 } else { 0 });
        let d = ebd_downshift(&f, 1).unwrap();
        assert_eq!(d.planes[0].data, vec![511, 0]);
        assert_eq!((d.effective_bit_depth, d.coding_bit_depth), (9, 10));
        let u = ebd_upshift(&d, 1).unwrap();
        assert_eq!(u.planes[0].data, vec![1022, 0]);
        assert!(ebd_upshift(&u, 1).is_err());
        assert!(ebd_downshift(&f, 10).is_err());
        assert!(ebd_downshift(&f, 0).is_err());
    }
}
