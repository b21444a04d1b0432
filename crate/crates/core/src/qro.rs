//! Per-GOP decision on spatial down-sampling: temporal information, a
//! wavelet-domain resampling-quality score and a one-hidden-layer classifier.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resampler::{resample_plane, FilterKernel};
use crate::video_io::{Frame, Plane, VideoSequence};

pub const QRO_MAGIC: &[u8; 4] = b"VSQ2";
pub const QRO_FORMAT_VERSION: u16 = 1;
pub const DEFAULT_HIDDEN: usize = 10;
/// Energy floor in normalized units: a subband whose RMS is below 1% of
/// peak counts as empty.
pub const SRQM_ENERGY_FLOOR: f64 = 1e-4;

/// Mean absolute luma difference between `frames[index]` and its immediate
/// neighbours in the window, averaged over the neighbours that exist.
pub fn temporal_information(frames: &[&Plane], index: usize) -> f64 {
    let cur = frames[index];
    let mad = |other: &Plane| -> f64 {
        let sum: u64 = cur
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a as i64 - b as i64).unsigned_abs())
            .sum();
        sum as f64 / cur.data.len() as f64
    };
    let mut total = 0.0;
    let mut n = 0;
    if index > 0 {
        total += mad(frames[index - 1]);
        n += 1;
    }
    if index + 1 < frames.len() {
        total += mad(frames[index + 1]);
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        total / n as f64
    }
}

/// Subband energies (sums of squared coefficients) of a two-level
/// orthonormal Haar decomposition, ordered LL2, LH2, HL2, HH2, LH1, HL1, HH1.
fn haar_energies(plane: &Plane) -> [f64; 7] {
    let w = plane.width & !3;
    let h = plane.height & !3;
    let mut ll: Vec<f64> = Vec::with_capacity(w * h);
    for y in 0..h {
        ll.extend(plane.data[y * plane.width..y * plane.width + w].iter().map(|&v| v as f64));
    }
    let mut out = [0.0; 7];
    let (mut cw, mut ch) = (w, h);
    for level in 0..2 {
        let (hw, hh) = (cw / 2, ch / 2);
        let mut next = Vec::with_capacity(hw * hh);
        let (mut e_lh, mut e_hl, mut e_hh) = (0.0, 0.0, 0.0);
        for y in 0..hh {
            for x in 0..hw {
                let a = ll[2 * y * cw + 2 * x];
                let b = ll[2 * y * cw + 2 * x + 1];
                let c = ll[(2 * y + 1) * cw + 2 * x];
                let d = ll[(2 * y + 1) * cw + 2 * x + 1];
                next.push((a + b + c + d) / 2.0);
                let lh = (a + b - c - d) / 2.0;
                let hl = (a - b + c - d) / 2.0;
                let hh_ = (a - b - c + d) / 2.0;
                e_lh += lh * lh;
                e_hl += hl * hl;
                e_hh += hh_ * hh_;
            }
        }
        let base = if level == 0 { 4 } else { 1 };
        out[base] = e_lh;
        out[base + 1] = e_hl;
        out[base + 2] = e_hh;
        ll = next;
        cw = hw;
        ch = hh;
    }
    out[0] = ll.iter().map(|v| v * v).sum();
    out
}

/// Subband weights, same order as the decomposition.
pub const SRQM_WEIGHTS: [f64; 7] = [0.1, 0.15, 0.15, 0.1, 0.15, 0.15, 0.2];

/// Per-frame score in [0, 1]; 1 means no subband lost or gained energy.
///
/// Each subband contributes `w·min(1, |E_ref − E_res| / (E_ref + floor))`
/// where energies are mean squares of coefficients on a `[0, 1]` sample
/// scale (`peak` maps to 1).
pub fn srqm_frame(reference: &Plane, resampled: &Plane, peak: f64) -> Result<f64> {
    if reference.width != resampled.width || reference.height != resampled.height {
        return Err(Error::Shape(format!(
            "reference {}x{} vs resampled {}x{}",
            reference.width, reference.height, resampled.width, resampled.height
        )));
    }
    // coefficient count of each band, in the same order
    let n1 = ((reference.width & !3) * (reference.height & !3) / 4).max(1) as f64;
    let n2 = (n1 / 4.0).max(1.0);
    let counts = [n2, n2, n2, n2, n1, n1, n1];
    let norm = peak * peak;
    let er = haar_energies(reference);
    let es = haar_energies(resampled);
    let penalty: f64 = (0..7)
        .map(|s| {
            let (a, b) = (er[s] / counts[s] / norm, es[s] / counts[s] / norm);
            SRQM_WEIGHTS[s] * ((a - b).abs() / (a + SRQM_ENERGY_FLOOR)).min(1.0)
        })
        .sum();
    Ok((1.0 - penalty).clamp(0.0, 1.0))
}

/// Luma-domain score between reference frames and their resampled versions,
/// averaged over the window.
pub fn srqm_score(reference: &[Frame], resampled: &[Frame]) -> Result<f64> {
    if reference.len() != resampled.len() || reference.is_empty() {
        return Err(Error::Shape(format!(
            "{} reference frames vs {} resampled",
            reference.len(),
            resampled.len()
        )));
    }
    let mut total = 0.0;
    for (a, b) in reference.iter().zip(resampled) {
        total += srqm_frame(a.luma(), b.luma(), a.max_value() as f64)?;
    }
    Ok(total / reference.len() as f64)
}

fn crop_even(plane: &Plane) -> Plane {
    let (w, h) = (plane.width & !1, plane.height & !1);
    if (w, h) == (plane.width, plane.height) {
        return plane.clone();
    }
    let data = plane.rows().take(h).flat_map(|r| r[..w].iter().copied()).collect();
    Plane {
        width: w,
        height: h,
        data,
    }
}

/// Lanczos3 down-sampling followed by Lanczos3 up-sampling of a luma plane
/// (cropped to even size). Returns the cropped reference alongside.
pub fn lanczos_roundtrip_luma(plane: &Plane, max: u16) -> (Plane, Plane) {
    let src = crop_even(plane);
    let down = resample_plane(&src, &FilterKernel::downsample_2x(), max);
    let up = resample_plane(&down, &FilterKernel::upsample_2x(), max);
    (src, up)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QroFeatures {
    pub srqm_mean: f64,
    pub ti_mean: f64,
    pub qp_base: f64,
}

impl QroFeatures {
    pub fn as_array(&self) -> [f64; 3] {
        [self.srqm_mean, self.ti_mean, self.qp_base]
    }
}

/// Features of the GOP `[gop_start, gop_start + gop_len)`. Temporal
/// neighbours outside the window are ignored.
pub fn gop_features(video: &VideoSequence, gop_start: usize, gop_len: usize, qp_base: f64) -> Result<QroFeatures> {
    let end = gop_start.saturating_add(gop_len);
    if gop_len == 0 || end > video.len() {
        return Err(Error::InvalidArgument(format!(
            "GOP window {gop_start}..{end} outside a {}-frame sequence",
            video.len()
        )));
    }
    let frames = &video.frames[gop_start..end];
    let lumas: Vec<&Plane> = frames.iter().map(Frame::luma).collect();
    let mut srqm = 0.0;
    let mut ti = 0.0;
    for (i, f) in frames.iter().enumerate() {
        let (reference, resampled) = lanczos_roundtrip_luma(f.luma(), f.max_value());
        srqm += srqm_frame(&reference, &resampled, f.max_value() as f64)?;
        ti += temporal_information(&lumas, i);
    }
    Ok(QroFeatures {
        srqm_mean: srqm / gop_len as f64,
        ti_mean: ti / gop_len as f64,
        qp_base,
    })
}

/// Z-score statistics for the three features.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureNorm {
    pub mean: [f64; 3],
    pub scale: [f64; 3],
}

impl Default for FeatureNorm {
    fn default() -> Self {
        FeatureNorm {
            mean: [0.0; 3],
            scale: [1.0; 3],
        }
    }
}

impl FeatureNorm {
    pub fn normalize(&self, x: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| (x[i] - self.mean[i]) / self.scale[i])
    }

    pub fn denormalize(&self, z: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| z[i] * self.scale[i] + self.mean[i])
    }
}

/// Shallow classifier: tanh hidden layer, sigmoid output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub hidden_weights: Vec<[f64; 3]>,
    pub hidden_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: f64,
    pub feature_norm: FeatureNorm,
}

impl MlpModel {
    pub fn zeros(hidden: usize) -> Self {
        MlpModel {
            hidden_weights: vec![[0.0; 3]; hidden],
            hidden_bias: vec![0.0; hidden],
            output_weights: vec![0.0; hidden],
            output_bias: 0.0,
            feature_norm: FeatureNorm::default(),
        }
    }

    pub fn hidden_size(&self) -> usize {
        self.hidden_weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.hidden_size();
        if h == 0 || self.hidden_bias.len() != h || self.output_weights.len() != h {
            return Err(Error::Shape(format!(
                "classifier with {} hidden rows, {} biases, {} output weights",
                h,
                self.hidden_bias.len(),
                self.output_weights.len()
            )));
        }
        let n = &self.feature_norm;
        let all = self
            .hidden_weights
            .iter()
            .flatten()
            .chain(&self.hidden_bias)
            .chain(&self.output_weights)
            .chain(std::iter::once(&self.output_bias))
            .chain(&n.mean)
            .chain(&n.scale);
        if !all.into_iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("classifier parameters".into()));
        }
        if n.scale.contains(&0.0) {
            return Err(Error::InvalidArgument("zero feature scale".into()));
        }
        Ok(())
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Probability that spatial down-sampling improves the GOP.
pub fn mlp_forward(model: &MlpModel, f: &QroFeatures) -> f64 {
    let z = model.feature_norm.normalize(f.as_array());
    let logit = model
        .hidden_weights
        .iter()
        .zip(&model.hidden_bias)
        .zip(&model.output_weights)
        .map(|((w, b), wo)| {
            let a = w[0] * z[0] + w[1] * z[1] + w[2] * z[2] + b;
            wo * a.tanh()
        })
        .sum::<f64>()
        + model.output_bias;
    sigmoid(logit)
}

/// True selects spatial + bit-depth adaptation; false keeps bit-depth only.
pub fn decide_sr(model: &MlpModel, f: &QroFeatures) -> bool {
    mlp_forward(model, f) >= 0.5
}

pub fn encode_mlp(model: &MlpModel) -> Result<Vec<u8>> {
    model.validate()?;
    let h = model.hidden_size();
    let mut out = Vec::with_capacity(8 + 4 * (6 + 5 * h + 1));
    out.extend_from_slice(QRO_MAGIC);
    out.extend_from_slice(&QRO_FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&u16::try_from(h).map_err(|_| Error::InvalidArgument("hidden layer too wide".into()))?.to_le_bytes());
    let mut put = |v: f64| out.extend_from_slice(&(v as f32).to_le_bytes());
    for i in 0..3 {
        put(model.feature_norm.mean[i]);
        put(model.feature_norm.scale[i]);
    }
    model.hidden_weights.iter().flatten().for_each(|&v| put(v));
    model.hidden_bias.iter().for_each(|&v| put(v));
    model.output_weights.iter().for_each(|&v| put(v));
    put(model.output_bias);
    Ok(out)
}

pub fn decode_mlp(bytes: &[u8]) -> Result<MlpModel> {
    if bytes.len() < 8 || &bytes[..4] != QRO_MAGIC {
        return Err(Error::Format("bad classifier magic".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != QRO_FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported classifier version {version}")));
    }
    let h = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let expected = 8 + 4 * (6 + 5 * h + 1);
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected: expected as u64,
            found: bytes.len() as u64,
        });
    }
    if bytes.len() > expected {
        return Err(Error::Format(format!("{} trailing bytes", bytes.len() - expected)));
    }
    let mut vals = bytes[8..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64);
    let mut next = || vals.next().expect("length checked");
    let mut norm = FeatureNorm::default();
    for i in 0..3 {
        norm.mean[i] = next();
        norm.scale[i] = next();
    }
    let hidden_weights = (0..h).map(|_| [next(), next(), next()]).collect();
    let hidden_bias = (0..h).map(|_| next()).collect();
    let output_weights = (0..h).map(|_| next()).collect();
    let model = MlpModel {
        hidden_weights,
        hidden_bias,
        output_weights,
        output_bias: next(),
        feature_norm: norm,
    };
    model.validate()?;
    Ok(model)
}

pub fn load_mlp(path: &Path) -> Result<MlpModel> {
    decode_mlp(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

pub fn save_mlp(model: &MlpModel, path: &Path) -> Result<()> {
    fs::write(path, encode_mlp(model)?).map_err(|e| Error::io(path, e))
}
