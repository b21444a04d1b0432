use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use resadapt::cnn::{
    save_weights, AdaptationVersion, ModelKey, ModelWeights, NetworkSpec, QpGroup, Tiling, WeightBank,
};
use resadapt::metrics::{
    bd_metric, curve_from_records, sequence_psnr_luma, vmaf_external, write_rd_csv, BdKind, QualityMetric, RdRecord,
};
use resadapt::pipeline::{
    decode_video, encode_video, AdaptationMode, CodecAdapter, DecodeOptions, EncodeOptions, ModeSelection, QpRange,
    Restoration,
};
use resadapt::qro::{load_mlp, save_mlp, MlpModel};
use resadapt::video_io::{read_raw_video, write_raw_video, ChromaFormat, FrameFormat, VideoSequence};

use crate::args::{
    AdapterArgs, ChromaArg, DecodeArgs, EncodeArgs, EvaluateArgs, ForceMode, InitArgs, QpSet, RawFormatArgs,
};
use crate::failure::usage;

pub const LOW_QPS: [f64; 4] = [22.0, 27.0, 32.0, 37.0];
pub const HIGH_QPS: [f64; 4] = [27.0, 32.0, 37.0, 42.0];

/// Working directory that is removed on drop when we created it.
struct Scratch {
    path: PathBuf,
    owned: bool,
}

impl Scratch {
    fn new(requested: Option<&Path>) -> Scratch {
        match requested {
            Some(p) => Scratch {
                path: p.to_path_buf(),
                owned: false,
            },
            None => Scratch {
                path: std::env::temp_dir().join(format!("resadapt-{}", std::process::id())),
                owned: true,
            },
        }
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        if self.owned {
            let _ = fs::remove_dir_all(&self.path);
        }
    }
}

fn frame_format(a: &RawFormatArgs) -> Result<FrameFormat> {
    let chroma = match a.chroma {
        ChromaArg::C420 => ChromaFormat::C420,
        ChromaArg::C444 => ChromaFormat::C444,
    };
    let f = FrameFormat::new(a.width, a.height, a.bitdepth, chroma);
    f.validate()?;
    Ok(f)
}

fn read_video(path: &Path, a: &RawFormatArgs) -> Result<VideoSequence> {
    let video = read_raw_video(path, frame_format(a)?, a.fps)?;
    if video.is_empty() {
        return Err(usage(format!("{} holds no frames", path.display())));
    }
    Ok(video)
}

fn adapter(a: &AdapterArgs) -> Result<CodecAdapter> {
    Ok(CodecAdapter::new(&a.codec, &a.adapter_encode, &a.adapter_decode)?)
}

fn check_qp(qp: f64) -> Result<()> {
    if !(qp.is_finite() && (0.0..=63.0).contains(&qp)) {
        return Err(usage(format!("--qp {qp} is outside 0..=63")));
    }
    Ok(())
}

fn emit_log<T: Serialize>(log: &T, dest: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(log)?;
    match dest {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct EncodeLog<'a> {
    input: &'a Path,
    codec: &'a str,
    force_mode: String,
    #[serde(flatten)]
    report: resadapt::pipeline::EncodeReport,
}

pub fn encode(a: EncodeArgs) -> Result<()> {
    check_qp(a.qp)?;
    let video = read_video(&a.input, &a.format)?;
    let adapter = adapter(&a.adapter)?;
    let selection = match (a.force_mode, &a.qro_model) {
        (ForceMode::Ebd, _) => ModeSelection::Forced(AdaptationMode::EbdOnly),
        (ForceMode::SrEbd, _) => ModeSelection::Forced(AdaptationMode::SrEbd),
        (ForceMode::Auto, Some(p)) => ModeSelection::Auto(load_mlp(p)?),
        (ForceMode::Auto, None) => return Err(usage("--force-mode auto needs --qro-model")),
    };
    let scratch = Scratch::new(a.adapter.workdir.as_deref());
    let opts = EncodeOptions {
        qp_base: a.qp,
        gop_len: a.gop,
        selection,
        qp_range: QpRange::default(),
        workdir: scratch.path.clone(),
    };
    let (stream, report) = encode_video(&video, &adapter, &opts)?;
    fs::write(&a.out, &stream).with_context(|| format!("writing {}", a.out.display()))?;
    let log = EncodeLog {
        input: &a.input,
        codec: &adapter.codec_id,
        force_mode: format!("{:?}", a.force_mode).to_lowercase(),
        report,
    };
    emit_log(&log, a.log.as_deref())
}

#[derive(Serialize)]
struct DecodeLog<'a> {
    stream: &'a Path,
    codec: &'a str,
    frames: usize,
    #[serde(flatten)]
    report: resadapt::pipeline::DecodeReport,
}

pub fn decode(a: DecodeArgs) -> Result<()> {
    check_qp(a.qp)?;
    if a.block_size <= a.overlap {
        return Err(usage(format!(
            "--block-size {} must exceed --overlap {}",
            a.block_size, a.overlap
        )));
    }
    let adapter = adapter(&a.adapter)?;
    let stream = fs::read(&a.stream).with_context(|| format!("reading {}", a.stream.display()))?;
    let bank = match (a.no_cnn, &a.weights) {
        (true, _) => None,
        (false, Some(p)) => Some(resadapt::cnn::load_weights(p)?),
        (false, None) => return Err(usage("CNN restoration needs --weights (or pass --no-cnn)")),
    };
    let restoration = match &bank {
        None => Restoration::Baseline,
        Some(bank) => Restoration::Cnn {
            bank,
            tiling: Tiling {
                block_size: a.block_size,
                overlap: a.overlap,
            },
            lanczos_pre_upsample: a.baseline_upsample,
        },
    };
    let scratch = Scratch::new(a.adapter.workdir.as_deref());
    let opts = DecodeOptions {
        qp_base: a.qp,
        restoration,
        qp_range: QpRange::default(),
        workdir: scratch.path.clone(),
    };
    let (video, report) = decode_video(&stream, &adapter, &opts)?;
    write_raw_video(&video, &a.out)?;
    let log = DecodeLog {
        stream: &a.stream,
        codec: &adapter.codec_id,
        frames: video.len(),
        report,
    };
    emit_log(&log, a.log.as_deref())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub label: String,
    pub qp: f64,
    pub decoded: PathBuf,
    pub stream: PathBuf,
}

pub fn parse_run(spec: &str) -> Result<Run> {
    let parts: Vec<&str> = spec.splitn(4, ',').collect();
    let [label, qp, decoded, stream] = parts[..] else {
        return Err(usage(format!("--run {spec:?}: expected LABEL,QP,DECODED,STREAM")));
    };
    let qp: f64 = qp
        .trim()
        .parse()
        .map_err(|_| usage(format!("--run {spec:?}: QP {qp:?} is not a number")))?;
    if label.is_empty() {
        return Err(usage(format!("--run {spec:?}: empty label")));
    }
    Ok(Run {
        label: label.to_owned(),
        qp,
        decoded: decoded.into(),
        stream: stream.into(),
    })
}

#[derive(Debug, Serialize)]
struct BdRow<'a> {
    label: &'a str,
    anchor: &'a str,
    metric: &'static str,
    qp_set: &'static str,
    bd_rate_pct: Option<f64>,
    bd_quality: Option<f64>,
    note: String,
}

pub fn evaluate(a: EvaluateArgs) -> Result<()> {
    let runs = a.runs.iter().map(|s| parse_run(s)).collect::<Result<Vec<_>>>()?;
    let reference = read_video(&a.reference, &a.format)?;
    let sequence = a.sequence.clone().unwrap_or_else(|| {
        a.reference
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "sequence".into())
    });
    let duration = reference.len() as f64 / a.format.fps;

    let mut records = Vec::with_capacity(runs.len());
    let mut vmaf_error: Option<anyhow::Error> = None;
    for run in &runs {
        let decoded = read_video(&run.decoded, &a.format).with_context(|| format!("run {}", run.label))?;
        let psnr = sequence_psnr_luma(&reference.frames, &decoded.frames)
            .with_context(|| format!("run {} QP {}", run.label, run.qp))?;
        let bytes = fs::metadata(&run.stream)
            .with_context(|| format!("reading {}", run.stream.display()))?
            .len();
        let vmaf = match (&a.vmaf_cmd, &vmaf_error) {
            (Some(cmd), None) => {
                match vmaf_external(&a.reference, &run.decoded, a.format.width, a.format.height, a.format.bitdepth, cmd) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        vmaf_error = Some(anyhow::Error::new(e).context(format!("VMAF for run {} QP {}", run.label, run.qp)));
                        None
                    }
                }
            }
            _ => None,
        };
        records.push(RdRecord {
            sequence: sequence.clone(),
            codec: run.label.clone(),
            qp: run.qp,
            bitrate_kbps: bytes as f64 * 8.0 / duration / 1000.0,
            psnr_db: psnr,
            vmaf,
        });
    }
    if vmaf_error.is_some() {
        records.iter_mut().for_each(|r| r.vmaf = None);
    }
    let file = fs::File::create(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
    write_rd_csv(&records, file)?;

    let mut labels: Vec<&str> = Vec::new();
    for r in &runs {
        if !labels.contains(&r.label.as_str()) {
            labels.push(&r.label);
        }
    }
    let anchor = labels[0];
    let sets: Vec<(&'static str, &[f64])> = match a.qp_set {
        QpSet::Low => vec![("low", &LOW_QPS)],
        QpSet::High => vec![("high", &HIGH_QPS)],
        QpSet::Both => vec![("low", &LOW_QPS), ("high", &HIGH_QPS)],
    };
    let mut metrics = vec![("psnr", QualityMetric::Psnr)];
    if a.vmaf_cmd.is_some() && vmaf_error.is_none() {
        metrics.push(("vmaf", QualityMetric::Vmaf));
    }
    let mut out = csv::Writer::from_writer(std::io::stdout().lock());
    for label in &labels {
        for &(mname, metric) in &metrics {
            for &(sname, qps) in &sets {
                out.serialize(bd_row(&records, &sequence, anchor, label, mname, metric, sname, qps))?;
            }
        }
    }
    out.flush()?;
    std::io::stdout().flush()?;
    match vmaf_error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[allow(clippy::too_many_arguments)]
fn bd_row<'a>(
    records: &[RdRecord],
    sequence: &str,
    anchor: &'a str,
    label: &'a str,
    metric_name: &'static str,
    metric: QualityMetric,
    set_name: &'static str,
    qps: &[f64],
) -> BdRow<'a> {
    let mut row = BdRow {
        label,
        anchor,
        metric: metric_name,
        qp_set: set_name,
        bd_rate_pct: None,
        bd_quality: None,
        note: String::new(),
    };
    let curves = curve_from_records(records, sequence, anchor, qps, metric)
        .and_then(|a| Ok((a, curve_from_records(records, sequence, label, qps, metric)?)));
    match curves {
        Ok((a, t)) => {
            let mut notes = Vec::new();
            match bd_metric(&a, &t, BdKind::Rate) {
                Ok(v) => row.bd_rate_pct = Some(v),
                Err(e) => notes.push(e.to_string()),
            }
            match bd_metric(&a, &t, BdKind::Quality) {
                Ok(v) => row.bd_quality = Some(v),
                Err(e) => notes.push(e.to_string()),
            }
            row.note = notes.join("; ");
        }
        Err(e) => row.note = e.to_string(),
    }
    row
}

pub fn init_models(a: InitArgs) -> Result<()> {
    if a.blocks == 0 || a.feature_maps == 0 || a.hidden == 0 {
        return Err(usage("--blocks, --feature-maps and --hidden must be positive"));
    }
    let spec = NetworkSpec {
        n_residual_blocks: a.blocks,
        feature_maps: a.feature_maps,
    };
    let bank: WeightBank = [AdaptationVersion::Ebd, AdaptationVersion::SrEbd]
        .into_iter()
        .flat_map(|version| {
            QpGroup::ALL.into_iter().map(move |qp_group| (version, qp_group))
        })
        .map(|(version, qp_group)| {
            let key = ModelKey {
                codec: a.codec.clone(),
                version,
                qp_group,
            };
            (key, ModelWeights::zeros(spec))
        })
        .collect::<BTreeMap<_, _>>();
    save_weights(&bank, &a.weights)?;
    save_mlp(&MlpModel::zeros(a.hidden), &a.qro_model)?;
    Ok(())
}
