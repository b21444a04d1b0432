use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "resadapt", version, about = "Resolution and bit-depth adaptation around a host video codec")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Adapt, segment and encode a raw video into a segment stream.
    Encode(EncodeArgs),
    /// Decode a segment stream and restore full resolution and bit depth.
    Decode(DecodeArgs),
    /// Measure decoded runs against the original and compare RD curves.
    Evaluate(EvaluateArgs),
    /// Write an all-zero weight bank and QRO model (identity restoration).
    InitModels(InitArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChromaArg {
    #[value(name = "420")]
    C420,
    #[value(name = "444")]
    C444,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForceMode {
    Auto,
    Ebd,
    SrEbd,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpSet {
    Low,
    High,
    Both,
}

#[derive(Args, Debug)]
pub struct RawFormatArgs {
    #[arg(long)]
    pub width: usize,
    #[arg(long)]
    pub height: usize,
    /// Coding bit depth of the raw file.
    #[arg(long, default_value_t = 10)]
    pub bitdepth: u8,
    #[arg(long, value_enum, default_value = "420")]
    pub chroma: ChromaArg,
    #[arg(long, default_value_t = 30.0)]
    pub fps: f64,
}

#[derive(Args, Debug)]
pub struct AdapterArgs {
    /// Host encoder command; placeholders {input} {output} {qp} {width} {height} {fps} {bitdepth}.
    #[arg(long, default_value = "cp {input} {output}")]
    pub adapter_encode: String,
    /// Host decoder command, same placeholders.
    #[arg(long, default_value = "cp {input} {output}")]
    pub adapter_decode: String,
    /// Host codec identifier used in model keys.
    #[arg(long, default_value = "HM")]
    pub codec: String,
    /// Scratch directory for segment files (default: a fresh directory under the system temp dir).
    #[arg(long)]
    pub workdir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    /// Raw planar YUV input.
    pub input: PathBuf,
    #[command(flatten)]
    pub format: RawFormatArgs,
    /// Base QP before adaptation offsets.
    #[arg(long)]
    pub qp: f64,
    #[arg(long, default_value_t = 16)]
    pub gop: usize,
    #[command(flatten)]
    pub adapter: AdapterArgs,
    /// QRO model file, required for --force-mode auto.
    #[arg(long)]
    pub qro_model: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub force_mode: ForceMode,
    /// Output segment stream.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON log destination (default: stdout).
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// Segment stream written by `encode`.
    pub stream: PathBuf,
    /// Base QP the stream was encoded with; selects the model group.
    #[arg(long)]
    pub qp: f64,
    #[command(flatten)]
    pub adapter: AdapterArgs,
    /// Weight bank file, required unless --no-cnn.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Restore with Lanczos3 up-sampling and a left shift instead of the CNN.
    #[arg(long)]
    pub no_cnn: bool,
    /// Up-sample with Lanczos3 rather than nearest-neighbour before the CNN.
    #[arg(long)]
    pub baseline_upsample: bool,
    #[arg(long, default_value_t = 96)]
    pub block_size: usize,
    #[arg(long, default_value_t = 4)]
    pub overlap: usize,
    /// Output raw video.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Original raw video.
    #[arg(long)]
    pub reference: PathBuf,
    #[command(flatten)]
    pub format: RawFormatArgs,
    /// Sequence name written to the CSV (default: reference file stem).
    #[arg(long)]
    pub sequence: Option<String>,
    /// One RD point as LABEL,QP,DECODED_RAW,STREAM. The first label is the anchor.
    #[arg(long = "run", required = true)]
    pub runs: Vec<String>,
    #[arg(long, value_enum, default_value = "both")]
    pub qp_set: QpSet,
    /// VMAF tool command; placeholders {ref} {dist} {width} {height} {bitdepth}.
    #[arg(long)]
    pub vmaf_cmd: Option<String>,
    /// RD points CSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct InitArgs {
    #[arg(long, default_value = "HM")]
    pub codec: String,
    #[arg(long, default_value_t = 16)]
    pub blocks: usize,
    #[arg(long, default_value_t = 64)]
    pub feature_maps: usize,
    #[arg(long, default_value_t = 10)]
    pub hidden: usize,
    /// Weight bank output.
    #[arg(long)]
    pub weights: PathBuf,
    /// QRO model output.
    #[arg(long)]
    pub qro_model: PathBuf,
}
