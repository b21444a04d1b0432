//! QP-indexed model bank and its binary file format.
//!
//! ```text
//! "VSB2" | version u16 | model count u16
//! per model: codec len u8, codec bytes, version u8, qp group u8,
//!            residual blocks u16, feature maps u16, layers...
//! per layer: tag u8 (0 conv, 1 prelu) | rank u8 | dims u32 × rank | f32 payload
//! ```
//!
//! All integers and floats are little-endian. Layers follow the fixed
//! topology order: head conv, head prelu, (conv1, prelu, conv2) per block,
//! post-block conv, tail conv. A conv payload is its `[out][in][3][3]`
//! weights followed by `out` biases.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::layers::{ConvParams, PReluParams, KERNEL};
use super::model::{ModelWeights, NetworkSpec, ResidualBlock, IO_CHANNELS};
use crate::error::{Error, Result};

pub const BANK_MAGIC: &[u8; 4] = b"VSB2";
pub const BANK_FORMAT_VERSION: u16 = 1;

const TAG_CONV: u8 = 0;
const TAG_PRELU: u8 = 1;

/// Which adaptation a model was trained to undo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AdaptationVersion {
    /// Bit-depth reduction only.
    Ebd,
    /// Spatial down-sampling plus bit-depth reduction.
    SrEbd,
}

impl AdaptationVersion {
    pub fn from_sr_flag(sr: bool) -> Self {
        if sr {
            AdaptationVersion::SrEbd
        } else {
            AdaptationVersion::Ebd
        }
    }

    fn code(self) -> u8 {
        match self {
            AdaptationVersion::Ebd => 0,
            AdaptationVersion::SrEbd => 1,
        }
    }

    fn from_code(c: u8) -> Result<Self> {
        match c {
            0 => Ok(AdaptationVersion::Ebd),
            1 => Ok(AdaptationVersion::SrEbd),
            _ => Err(Error::Format(format!("unknown adaptation version {c}"))),
        }
    }
}

/// One of the five base-QP groups a model is trained for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct QpGroup(u8);

impl QpGroup {
    pub const ALL: [QpGroup; 5] = [QpGroup(22), QpGroup(27), QpGroup(32), QpGroup(37), QpGroup(42)];

    pub fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for QpGroup {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        QpGroup::ALL
            .into_iter()
            .find(|g| g.0 == v)
            .ok_or_else(|| Error::Format(format!("{v} is not a trained QP group")))
    }
}

impl From<QpGroup> for u8 {
    fn from(g: QpGroup) -> u8 {
        g.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelKey {
    pub codec: String,
    pub version: AdaptationVersion,
    pub qp_group: QpGroup,
}

impl fmt::Display for ModelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.version {
            AdaptationVersion::Ebd => "EBD",
            AdaptationVersion::SrEbd => "SR-EBD",
        };
        write!(f, "{}/{}/{}", self.codec, v, self.qp_group.0)
    }
}

/// Picks the QP group from the base QP (before any offset). A value of
/// exactly 39.5 lands in group 37.
pub fn select_qp_group(qp_base: f64) -> QpGroup {
    let g = if qp_base <= 24.5 {
        22
    } else if qp_base <= 29.5 {
        27
    } else if qp_base <= 34.5 {
        32
    } else if qp_base <= 39.5 {
        37
    } else {
        42
    };
    QpGroup(g)
}

pub fn select_model(qp_base: f64, codec: &str, version: AdaptationVersion) -> ModelKey {
    ModelKey {
        codec: codec.to_owned(),
        version,
        qp_group: select_qp_group(qp_base),
    }
}

pub type WeightBank = BTreeMap<ModelKey, ModelWeights>;

fn put_u16(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f32s(out: &mut Vec<u8>, vs: &[f32]) {
    out.extend(vs.iter().flat_map(|v| v.to_le_bytes()));
}

fn put_conv(out: &mut Vec<u8>, c: &ConvParams) {
    out.push(TAG_CONV);
    out.push(4);
    for d in [c.out_channels, c.in_channels, KERNEL, KERNEL] {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    put_f32s(out, &c.weights);
    put_f32s(out, &c.bias);
}

fn put_prelu(out: &mut Vec<u8>, p: &PReluParams) {
    out.push(TAG_PRELU);
    out.push(1);
    out.extend_from_slice(&(p.alpha.len() as u32).to_le_bytes());
    put_f32s(out, &p.alpha);
}

pub fn encode_bank(bank: &WeightBank) -> Result<Vec<u8>> {
    if bank.is_empty() {
        return Err(Error::InvalidArgument("empty model bank".into()));
    }
    if bank.len() > u16::MAX as usize {
        return Err(Error::InvalidArgument("too many models".into()));
    }
    let mut out = Vec::new();
    out.extend_from_slice(BANK_MAGIC);
    put_u16(&mut out, BANK_FORMAT_VERSION);
    put_u16(&mut out, bank.len() as u16);
    for (key, m) in bank {
        m.validate()?;
        let codec = key.codec.as_bytes();
        if codec.len() > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("codec id `{}` too long", key.codec)));
        }
        out.push(codec.len() as u8);
        out.extend_from_slice(codec);
        out.push(key.version.code());
        out.push(key.qp_group.0);
        put_u16(&mut out, m.spec.n_residual_blocks as u16);
        put_u16(&mut out, m.spec.feature_maps as u16);
        put_conv(&mut out, &m.head_conv);
        put_prelu(&mut out, &m.head_prelu);
        for b in &m.blocks {
            put_conv(&mut out, &b.conv1);
            put_prelu(&mut out, &b.prelu);
            put_conv(&mut out, &b.conv2);
        }
        put_conv(&mut out, &m.post_blocks_conv);
        put_conv(&mut out, &m.tail_conv);
    }
    Ok(out)
}

pub fn save_weights(bank: &WeightBank, path: &Path) -> Result<()> {
    let bytes = encode_bank(bank)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or(Error::Truncated {
            expected: (self.pos + n) as u64,
            found: self.buf.len() as u64,
        })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let b = self.take(n.checked_mul(4).ok_or_else(|| Error::Format("layer too large".into()))?)?;
        Ok(b.chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect())
    }

    fn layer_header(&mut self, tag: u8, dims: &[usize], what: &str) -> Result<()> {
        let t = self.u8()?;
        if t != tag {
            return Err(Error::Format(format!("{what}: layer tag {t}, expected {tag}")));
        }
        let rank = self.u8()? as usize;
        if rank != dims.len() {
            return Err(Error::Shape(format!("{what}: rank {rank}, expected {}", dims.len())));
        }
        for (k, &want) in dims.iter().enumerate() {
            let d = self.u32()? as usize;
            if d != want {
                return Err(Error::Shape(format!("{what}: dim {k} is {d}, expected {want}")));
            }
        }
        Ok(())
    }

    fn conv(&mut self, out_ch: usize, in_ch: usize, what: &str) -> Result<ConvParams> {
        self.layer_header(TAG_CONV, &[out_ch, in_ch, KERNEL, KERNEL], what)?;
        let weights = self.f32s(out_ch * in_ch * KERNEL * KERNEL)?;
        let bias = self.f32s(out_ch)?;
        ConvParams::new(out_ch, in_ch, weights, bias)
    }

    fn prelu(&mut self, ch: usize, what: &str) -> Result<PReluParams> {
        self.layer_header(TAG_PRELU, &[ch], what)?;
        Ok(PReluParams { alpha: self.f32s(ch)? })
    }
}

pub fn decode_bank(bytes: &[u8]) -> Result<WeightBank> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4).ok() != Some(&BANK_MAGIC[..]) {
        return Err(Error::Format("bad weight bank magic".into()));
    }
    let version = r.u16()?;
    if version != BANK_FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported weight bank version {version}")));
    }
    let count = r.u16()?;
    let mut bank = WeightBank::new();
    for m in 0..count {
        let len = r.u8()? as usize;
        let codec = String::from_utf8(r.take(len)?.to_vec())
            .map_err(|_| Error::Format(format!("model {m}: codec id is not UTF-8")))?;
        let version = AdaptationVersion::from_code(r.u8()?)?;
        let qp_group = QpGroup::try_from(r.u8()?)?;
        let spec = NetworkSpec {
            n_residual_blocks: r.u16()? as usize,
            feature_maps: r.u16()? as usize,
        };
        let fm = spec.feature_maps;
        let head_conv = r.conv(fm, IO_CHANNELS, "head conv")?;
        let head_prelu = r.prelu(fm, "head prelu")?;
        let blocks = (0..spec.n_residual_blocks)
            .map(|_| {
                Ok(ResidualBlock {
                    conv1: r.conv(fm, fm, "block conv1")?,
                    prelu: r.prelu(fm, "block prelu")?,
                    conv2: r.conv(fm, fm, "block conv2")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let post_blocks_conv = r.conv(fm, fm, "post-block conv")?;
        let tail_conv = r.conv(IO_CHANNELS, fm, "tail conv")?;
        let weights = ModelWeights {
            spec,
            head_conv,
            head_prelu,
            blocks,
            post_blocks_conv,
            tail_conv,
        };
        weights.validate()?;
        let key = ModelKey {
            codec,
            version,
            qp_group,
        };
        if bank.insert(key.clone(), weights).is_some() {
            return Err(Error::Format(format!("duplicate model {key}")));
        }
    }
    if r.pos != bytes.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes after the last model",
            bytes.len() - r.pos
        )));
    }
    Ok(bank)
}

pub fn load_weights(path: &Path) -> Result<WeightBank> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_bank(&bytes)
}
