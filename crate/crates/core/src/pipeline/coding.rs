//! Encoder and decoder wrappers around the host codec.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adapter::{CodecAdapter, CodingParams};
use super::container::{frame_rate_ratio, parse_stream, serialize_stream, Segment, SegmentHeader, HEADER_LEN};
use super::qp::{apply_qp_offset, AdaptationMode, QpRange};
use super::segment::{segment_sequence, SegmentPlan};
use crate::cnn::{reconstruct_frame, select_model, AdaptationVersion, Tiling, WeightBank};
use crate::error::{Error, Result};
use crate::qro::{gop_features, mlp_forward, MlpModel, QroFeatures};
use crate::resampler::{ebd_downshift, ebd_upshift, lanczos3_downsample_2x, lanczos3_upsample_2x, nearest_upsample_2x};
use crate::video_io::{decode_raw, encode_raw, ChromaFormat, Frame, FrameFormat, VideoSequence};

pub const DEFAULT_GOP: usize = 16;

/// Bits removed by the bit-depth adaptation.
pub const EBD_SHIFT: u8 = 1;

#[derive(Clone, Debug)]
pub enum ModeSelection {
    /// Per-GOP decision by the classifier.
    Auto(MlpModel),
    Forced(AdaptationMode),
}

#[derive(Clone, Debug)]
pub struct EncodeOptions {
    pub qp_base: f64,
    pub gop_len: usize,
    pub selection: ModeSelection,
    pub qp_range: QpRange,
    pub workdir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GopLog {
    pub start: usize,
    pub frames: usize,
    pub features: Option<QroFeatures>,
    pub probability: Option<f64>,
    pub sr_decision: bool,
    /// Set when spatial adaptation was ruled out by the frame size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodeSegmentLog {
    pub index: usize,
    pub start: usize,
    pub frames: usize,
    pub sr_flag: bool,
    pub mode: AdaptationMode,
    pub qp_base: f64,
    pub qp_offset: f64,
    pub qp: f64,
    pub coded_width: usize,
    pub coded_height: usize,
    pub payload_bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodeReport {
    pub gop_len: usize,
    pub gops: Vec<GopLog>,
    pub segments: Vec<EncodeSegmentLog>,
    pub stream_bytes: u64,
}

fn sr_supported(format: FrameFormat) -> bool {
    let align = match format.chroma {
        ChromaFormat::C420 => 4,
        ChromaFormat::C444 => 2,
    };
    format.width % align == 0 && format.height % align == 0
}

/// Encoder-side adaptation of one frame.
pub fn adapt_frame(frame: &Frame, mode: AdaptationMode) -> Result<Frame> {
    let f = if mode.sr_flag() {
        lanczos3_downsample_2x(frame)?
    } else {
        frame.clone()
    };
    ebd_downshift(&f, EBD_SHIFT)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn decide_gops(video: &VideoSequence, opts: &EncodeOptions) -> Result<Vec<GopLog>> {
    let format = video.format().expect("non-empty");
    let total = video.len();
    (0..total.div_ceil(opts.gop_len))
        .map(|g| {
            let start = g * opts.gop_len;
            let frames = opts.gop_len.min(total - start);
            Ok(match &opts.selection {
                ModeSelection::Forced(mode) => GopLog {
                    start,
                    frames,
                    features: None,
                    probability: None,
                    sr_decision: mode.sr_flag(),
                    note: None,
                },
                ModeSelection::Auto(model) => {
                    let features = gop_features(video, start, frames, opts.qp_base)?;
                    let p = mlp_forward(model, &features);
                    let supported = sr_supported(format);
                    GopLog {
                        start,
                        frames,
                        features: Some(features),
                        probability: Some(p),
                        sr_decision: p >= 0.5 && supported,
                        note: (!supported).then(|| "frame size does not allow 2x down-sampling".to_owned()),
                    }
                }
            })
        })
        .collect()
}

/// Encodes `video` segment by segment through `adapter`.
pub fn encode_video(video: &VideoSequence, adapter: &CodecAdapter, opts: &EncodeOptions) -> Result<(Vec<u8>, EncodeReport)> {
    adapter.validate()?;
    let format = video
        .format()
        .ok_or_else(|| Error::InvalidArgument("empty input video".into()))?;
    if opts.gop_len == 0 {
        return Err(Error::InvalidArgument("GOP length must be positive".into()));
    }
    if video.frames[0].effective_bit_depth != format.coding_bit_depth {
        return Err(Error::InvalidArgument("input must use its full coding bit depth".into()));
    }
    if let ModeSelection::Forced(AdaptationMode::SrEbd) = opts.selection {
        if !sr_supported(format) {
            return Err(Error::InvalidArgument(format!(
                "{}x{} {:?} cannot be spatially halved",
                format.width, format.height, format.chroma
            )));
        }
    }
    if let ModeSelection::Auto(model) = &opts.selection {
        model.validate()?;
    }
    ensure_dir(&opts.workdir)?;

    let gops = decide_gops(video, opts)?;
    let decisions: Vec<bool> = gops.iter().map(|g| g.sr_decision).collect();
    let plans = segment_sequence(&decisions, opts.gop_len, video.frame_rate, video.len())?;
    let (fps_num, fps_den) = frame_rate_ratio(video.frame_rate);

    let mut segments = Vec::with_capacity(plans.len());
    let mut logs = Vec::with_capacity(plans.len());
    for (index, plan) in plans.iter().enumerate() {
        let (segment, log) = encode_segment(video, adapter, opts, index, plan, (fps_num, fps_den))
            .map_err(|e| e.in_segment(index))?;
        segments.push(segment);
        logs.push(log);
    }
    let stream = serialize_stream(&segments);
    let report = EncodeReport {
        gop_len: opts.gop_len,
        gops,
        segments: logs,
        stream_bytes: stream.len() as u64,
    };
    Ok((stream, report))
}

fn encode_segment(
    video: &VideoSequence,
    adapter: &CodecAdapter,
    opts: &EncodeOptions,
    index: usize,
    plan: &SegmentPlan,
    (fps_num, fps_den): (u32, u32),
) -> Result<(Segment, EncodeSegmentLog)> {
    let mode = AdaptationMode::from_sr_flag(plan.sr_flag);
    let frames = &video.frames[plan.start..plan.start + plan.len];
    let adapted = frames
        .par_iter()
        .map(|f| adapt_frame(f, mode))
        .collect::<Result<Vec<_>>>()?;
    let coded = adapted[0].format();
    let qp = apply_qp_offset(opts.qp_base, mode, opts.qp_range);

    let raw_path = opts.workdir.join(format!("seg{index:04}.yuv"));
    let bit_path = opts.workdir.join(format!("seg{index:04}.bin"));
    fs::write(&raw_path, encode_raw(&adapted)).map_err(|e| Error::io(&raw_path, e))?;
    let params = CodingParams {
        qp,
        width: coded.width,
        height: coded.height,
        fps: video.frame_rate,
        bit_depth: coded.coding_bit_depth,
    };
    let result = adapter.encode(&raw_path, &bit_path, &params).and_then(|_| {
        fs::read(&bit_path).map_err(|e| Error::io(&bit_path, e))
    });
    let _ = fs::remove_file(&raw_path);
    let _ = fs::remove_file(&bit_path);
    let payload = result?;

    let first = &frames[0];
    let header = SegmentHeader {
        sr_flag: plan.sr_flag,
        chroma: first.chroma,
        width: first.width as u32,
        height: first.height as u32,
        frame_count: plan.len as u32,
        frame_rate_num: fps_num,
        frame_rate_den: fps_den,
        coding_bit_depth: first.coding_bit_depth,
        payload_length: payload.len() as u64,
    };
    let log = EncodeSegmentLog {
        index,
        start: plan.start,
        frames: plan.len,
        sr_flag: plan.sr_flag,
        mode,
        qp_base: opts.qp_base,
        qp_offset: mode.qp_offset(),
        qp,
        coded_width: coded.width,
        coded_height: coded.height,
        payload_bytes: payload.len() as u64 + HEADER_LEN as u64,
    };
    Ok((Segment { header, payload }, log))
}

/// How decoded frames are brought back to full resolution and bit depth.
#[derive(Clone, Copy, Debug)]
pub enum Restoration<'a> {
    /// Lanczos3 up-sampling and a left shift.
    Baseline,
    Cnn {
        bank: &'a WeightBank,
        tiling: Tiling,
        /// Use Lanczos3 instead of nearest-neighbour before the network.
        lanczos_pre_upsample: bool,
    },
}

#[derive(Clone, Debug)]
pub struct DecodeOptions<'a> {
    pub qp_base: f64,
    pub restoration: Restoration<'a>,
    pub qp_range: QpRange,
    pub workdir: PathBuf,
}

pub const BASELINE_LABEL: &str = "Lanczos3 + left shift";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeSegmentLog {
    pub index: usize,
    pub start: usize,
    pub frames: usize,
    pub sr_flag: bool,
    pub restoration: String,
    pub model: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub qp_base: f64,
    pub segments: Vec<DecodeSegmentLog>,
}

/// Re-interprets host decoder output as content with one bit removed.
fn as_reduced_depth(mut f: Frame) -> Frame {
    f.effective_bit_depth = f.coding_bit_depth - EBD_SHIFT;
    let max = f.max_value();
    for p in f.planes.iter_mut() {
        p.data.iter_mut().for_each(|v| *v = (*v).min(max));
    }
    f
}

pub fn decode_video(stream: &[u8], adapter: &CodecAdapter, opts: &DecodeOptions) -> Result<(VideoSequence, DecodeReport)> {
    adapter.validate()?;
    let segments = parse_stream(stream)?;
    let h0 = &segments[0].header;
    for (i, s) in segments.iter().enumerate().skip(1) {
        let h = &s.header;
        if (h.width, h.height, h.coding_bit_depth, h.chroma, h.frame_rate_num, h.frame_rate_den)
            != (h0.width, h0.height, h0.coding_bit_depth, h0.chroma, h0.frame_rate_num, h0.frame_rate_den)
        {
            return Err(Error::Format("segment format differs from segment 0".into()).in_segment(i));
        }
    }
    ensure_dir(&opts.workdir)?;

    let mut frames = Vec::new();
    let mut logs = Vec::with_capacity(segments.len());
    for (index, seg) in segments.iter().enumerate() {
        let (restored, log) =
            decode_segment(seg, adapter, opts, index, frames.len()).map_err(|e| e.in_segment(index))?;
        frames.extend(restored);
        logs.push(log);
    }
    let video = VideoSequence::new(frames, h0.frame_rate())?;
    Ok((
        video,
        DecodeReport {
            qp_base: opts.qp_base,
            segments: logs,
        },
    ))
}

fn decode_segment(
    seg: &Segment,
    adapter: &CodecAdapter,
    opts: &DecodeOptions,
    index: usize,
    start: usize,
) -> Result<(Vec<Frame>, DecodeSegmentLog)> {
    let h = &seg.header;
    let (cw, ch) = h.coded_dims();
    let coded = FrameFormat::new(cw, ch, h.coding_bit_depth, h.chroma);
    let mode = AdaptationMode::from_sr_flag(h.sr_flag);

    let bit_path = opts.workdir.join(format!("dseg{index:04}.bin"));
    let raw_path = opts.workdir.join(format!("dseg{index:04}.yuv"));
    fs::write(&bit_path, &seg.payload).map_err(|e| Error::io(&bit_path, e))?;
    let params = CodingParams {
        qp: apply_qp_offset(opts.qp_base, mode, opts.qp_range),
        width: cw,
        height: ch,
        fps: h.frame_rate(),
        bit_depth: h.coding_bit_depth,
    };
    let result = adapter
        .decode(&bit_path, &raw_path, &params)
        .and_then(|_| fs::read(&raw_path).map_err(|e| Error::io(&raw_path, e)));
    let _ = fs::remove_file(&bit_path);
    let _ = fs::remove_file(&raw_path);
    let decoded = decode_raw(&result?, coded, h.frame_rate())?;
    if decoded.len() != h.frame_count as usize {
        return Err(Error::Format(format!(
            "host decoder produced {} frames, header declares {}",
            decoded.len(),
            h.frame_count
        )));
    }

    let reduced: Vec<Frame> = decoded.frames.into_iter().map(as_reduced_depth).collect();
    let (restored, restoration, model) = match opts.restoration {
        Restoration::Baseline => {
            let out = reduced
                .par_iter()
                .map(|f| {
                    let up = if h.sr_flag { lanczos3_upsample_2x(f)? } else { f.clone() };
                    ebd_upshift(&up, EBD_SHIFT)
                })
                .collect::<Result<Vec<_>>>()?;
            (out, BASELINE_LABEL.to_owned(), None)
        }
        Restoration::Cnn {
            bank,
            tiling,
            lanczos_pre_upsample,
        } => {
            let key = select_model(opts.qp_base, &adapter.codec_id, AdaptationVersion::from_sr_flag(h.sr_flag));
            let model = bank.get(&key).ok_or_else(|| Error::MissingModel(key.to_string()))?;
            let out = reduced
                .iter()
                .map(|f| {
                    let up = match (h.sr_flag, lanczos_pre_upsample) {
                        (false, _) => f.clone(),
                        (true, false) => nearest_upsample_2x(f)?,
                        (true, true) => lanczos3_upsample_2x(f)?,
                    };
                    reconstruct_frame(&up, model, tiling)
                })
                .collect::<Result<Vec<_>>>()?;
            (out, "CNN".to_owned(), Some(key.to_string()))
        }
    };
    let log = DecodeSegmentLog {
        index,
        start,
        frames: restored.len(),
        sr_flag: h.sr_flag,
        restoration,
        model,
    };
    Ok((restored, log))
}
