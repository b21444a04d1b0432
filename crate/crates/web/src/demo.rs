//! Plain functions behind the browser bindings, testable natively.

use resadapt::cnn::select_qp_group;
use resadapt::metrics::{bd_metric, psnr_luma, BdKind, QualityMetric, RdCurve, RdPoint};
use resadapt::resampler::{
    ebd_downshift, ebd_upshift, lanczos3, lanczos3_downsample_2x, lanczos3_upsample_2x, nearest_upsample_2x,
    FilterKernel,
};
use resadapt::video_io::{ChromaFormat, Frame, FrameFormat};

const BITS: u8 = 10;

/// `(x, lanczos3(x))` pairs over [-3, 3] with `n` points.
pub fn kernel_curve(n: usize) -> Vec<(f64, f64)> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let x = -3.0 + 6.0 * i as f64 / (n - 1) as f64;
            (x, lanczos3(x))
        })
        .collect()
}

/// Discrete taps of each polyphase branch: `(source offset, weights)`.
pub fn kernel_taps(down: bool) -> Vec<(isize, Vec<f64>)> {
    let k = if down {
        FilterKernel::downsample_2x()
    } else {
        FilterKernel::upsample_2x()
    };
    k.phases.iter().map(|p| (p.offset, p.taps.clone())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    Ramp,
    ZonePlate,
    Stripes,
    Checker,
}

impl Pattern {
    pub fn from_name(name: &str) -> Result<Pattern, String> {
        match name {
            "ramp" => Ok(Pattern::Ramp),
            "zoneplate" => Ok(Pattern::ZonePlate),
            "stripes" => Ok(Pattern::Stripes),
            "checker" => Ok(Pattern::Checker),
            _ => Err(format!("unknown pattern {name:?}")),
        }
    }

    fn sample(self, x: usize, y: usize, w: usize, h: usize, period: usize) -> f64 {
        let p = period.max(1);
        match self {
            Pattern::Ramp => 64.0 + 895.0 * (x + y) as f64 / (w + h - 2) as f64,
            Pattern::ZonePlate => {
                let (cx, cy) = (x as f64 - w as f64 / 2.0, y as f64 - h as f64 / 2.0);
                let k = std::f64::consts::PI / (w.max(h) as f64 * p as f64 / 4.0);
                512.0 + 400.0 * (k * (cx * cx + cy * cy)).cos()
            }
            Pattern::Stripes => {
                if (x / p) % 2 == 0 {
                    200.0
                } else {
                    800.0
                }
            }
            Pattern::Checker => {
                if (x / p + y / p) % 2 == 0 {
                    200.0
                } else {
                    800.0
                }
            }
        }
    }
}

pub fn pattern_frame(pattern: Pattern, w: usize, h: usize, period: usize) -> Result<Frame, String> {
    let mut f = Frame::filled(FrameFormat::new(w, h, BITS, ChromaFormat::C444), 0, 512).map_err(|e| e.to_string())?;
    for y in 0..h {
        for x in 0..w {
            let v = pattern.sample(x, y, w, h, period).round().clamp(0.0, 1023.0);
            f.planes[0].set(x, y, v as u16);
        }
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Upsampler {
    Lanczos3,
    Nearest,
}

/// Result of one round trip through the encoder-side adaptation and back.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub original: Frame,
    pub restored: Frame,
    pub psnr: f64,
}

/// Optional 2x down/up-sampling followed by an `ebd_bits` shift down and up.
pub fn round_trip(source: &Frame, spatial: Option<Upsampler>, ebd_bits: u8) -> Result<RoundTrip, String> {
    let err = |e: resadapt::Error| e.to_string();
    let mut f = source.clone();
    if spatial.is_some() {
        f = lanczos3_downsample_2x(&f).map_err(err)?;
    }
    if ebd_bits > 0 {
        f = ebd_downshift(&f, ebd_bits).map_err(err)?;
        f = ebd_upshift(&f, ebd_bits).map_err(err)?;
    }
    f = match spatial {
        Some(Upsampler::Lanczos3) => lanczos3_upsample_2x(&f).map_err(err)?,
        Some(Upsampler::Nearest) => nearest_upsample_2x(&f).map_err(err)?,
        None => f,
    };
    let psnr = psnr_luma(source, &f).map_err(err)?;
    Ok(RoundTrip {
        original: source.clone(),
        restored: f,
        psnr,
    })
}

/// Grey RGBA rendering of the luma plane.
pub fn luma_rgba(f: &Frame) -> Vec<u8> {
    let shift = f.coding_bit_depth - 8;
    f.luma()
        .data
        .iter()
        .flat_map(|&v| {
            let g = (v >> shift) as u8;
            [g, g, g, 255]
        })
        .collect()
}

/// Absolute luma error, amplified by `gain`, as RGBA.
pub fn error_rgba(a: &Frame, b: &Frame, gain: f64) -> Vec<u8> {
    a.luma()
        .data
        .iter()
        .zip(&b.luma().data)
        .flat_map(|(&x, &y)| {
            let e = ((x as f64 - y as f64).abs() * gain).min(255.0) as u8;
            [e, 0, 255 - e, 255]
        })
        .collect()
}

/// Parses `bitrate,quality` lines; blank lines and `#` comments are skipped.
pub fn parse_points(text: &str) -> Result<Vec<RdPoint>, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split([',', ' ', '\t']).filter(|s| !s.is_empty());
            match (it.next(), it.next(), it.next()) {
                (Some(r), Some(q), None) => {
                    let r: f64 = r.parse().map_err(|_| format!("bad bitrate in {l:?}"))?;
                    let q: f64 = q.parse().map_err(|_| format!("bad quality in {l:?}"))?;
                    Ok(RdPoint::new(r, q))
                }
                _ => Err(format!("expected `bitrate,quality` in {l:?}")),
            }
        })
        .collect()
}

/// BD-rate (%) and BD-quality of `test` against `anchor`.
pub fn bd_pair(anchor: &str, test: &str) -> Result<(f64, f64), String> {
    let curve = |t: &str| RdCurve::new(parse_points(t)?, QualityMetric::Psnr).map_err(|e| e.to_string());
    let (a, t) = (curve(anchor)?, curve(test)?);
    let rate = bd_metric(&a, &t, BdKind::Rate).map_err(|e| e.to_string())?;
    let quality = bd_metric(&a, &t, BdKind::Quality).map_err(|e| e.to_string())?;
    Ok((rate, quality))
}

pub fn model_group(qp_base: f64) -> u8 {
    select_qp_group(qp_base).value()
}
