//! Segment container: each host bitstream is preceded by a fixed header.
//!
//! ```text
//! "VSG2" | flags u8 | width u32 | height u32 | frame_count u32
//!        | fps_num u32 | fps_den u32 | coding_bit_depth u8 | payload_length u64
//! ```
//!
//! Flag bit 0 is the spatial-adaptation flag; bit 1 marks 4:4:4 chroma.
//! The remaining bits are reserved and must be zero. Integers are
//! little-endian; width and height are the original (pre-adaptation) size.

use crate::error::{Error, Result};
use crate::video_io::ChromaFormat;

pub const SEGMENT_MAGIC: &[u8; 4] = b"VSG2";
pub const HEADER_LEN: usize = 34;

const FLAG_SR: u8 = 0x01;
const FLAG_444: u8 = 0x02;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentHeader {
    pub sr_flag: bool,
    pub chroma: ChromaFormat,
    pub width: u32,
    pub height: u32,
    pub frame_count: u32,
    pub frame_rate_num: u32,
    pub frame_rate_den: u32,
    pub coding_bit_depth: u8,
    pub payload_length: u64,
}

impl SegmentHeader {
    pub fn frame_rate(&self) -> f64 {
        self.frame_rate_num as f64 / self.frame_rate_den as f64
    }

    /// Dimensions of the pictures inside the host bitstream.
    pub fn coded_dims(&self) -> (usize, usize) {
        let (w, h) = (self.width as usize, self.height as usize);
        if self.sr_flag {
            (w / 2, h / 2)
        } else {
            (w, h)
        }
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(SEGMENT_MAGIC);
        let mut flags = 0;
        if self.sr_flag {
            flags |= FLAG_SR;
        }
        if self.chroma == ChromaFormat::C444 {
            flags |= FLAG_444;
        }
        out.push(flags);
        for v in [
            self.width,
            self.height,
            self.frame_count,
            self.frame_rate_num,
            self.frame_rate_den,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.push(self.coding_bit_depth);
        out.extend_from_slice(&self.payload_length.to_le_bytes());
    }

    pub fn parse(b: &[u8]) -> Result<Self> {
        if b.len() < HEADER_LEN {
            return Err(Error::Truncated {
                expected: HEADER_LEN as u64,
                found: b.len() as u64,
            });
        }
        if &b[..4] != SEGMENT_MAGIC {
            return Err(Error::Format("bad segment magic".into()));
        }
        let flags = b[4];
        if flags & !(FLAG_SR | FLAG_444) != 0 {
            return Err(Error::Format(format!("reserved segment flag bits set ({flags:#04x})")));
        }
        let u32_at = |o: usize| u32::from_le_bytes([b[o], b[o + 1], b[o + 2], b[o + 3]]);
        let header = SegmentHeader {
            sr_flag: flags & FLAG_SR != 0,
            chroma: if flags & FLAG_444 != 0 {
                ChromaFormat::C444
            } else {
                ChromaFormat::C420
            },
            width: u32_at(5),
            height: u32_at(9),
            frame_count: u32_at(13),
            frame_rate_num: u32_at(17),
            frame_rate_den: u32_at(21),
            coding_bit_depth: b[25],
            payload_length: u64::from_le_bytes(b[26..34].try_into().expect("8 bytes")),
        };
        if header.frame_rate_den == 0 || header.frame_rate_num == 0 {
            return Err(Error::Format("zero frame rate in segment header".into()));
        }
        Ok(header)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub header: SegmentHeader,
    pub payload: Vec<u8>,
}

pub fn serialize_stream(segments: &[Segment]) -> Vec<u8> {
    let mut out = Vec::with_capacity(segments.iter().map(|s| HEADER_LEN + s.payload.len()).sum());
    for s in segments {
        debug_assert_eq!(s.header.payload_length, s.payload.len() as u64);
        s.header.write_to(&mut out);
        out.extend_from_slice(&s.payload);
    }
    out
}

/// Splits a stream into segments; any malformed or short segment fails the
/// whole parse, with the segment index attached.
pub fn parse_stream(bytes: &[u8]) -> Result<Vec<Segment>> {
    let mut pos = 0;
    let mut segments = Vec::new();
    while pos < bytes.len() {
        let index = segments.len();
        let header = SegmentHeader::parse(&bytes[pos..]).map_err(|e| e.in_segment(index))?;
        let start = pos + HEADER_LEN;
        let available = (bytes.len() - start) as u64;
        if header.payload_length > available {
            return Err(Error::Truncated {
                expected: header.payload_length,
                found: available,
            }
            .in_segment(index));
        }
        let end = start + header.payload_length as usize;
        segments.push(Segment {
            header,
            payload: bytes[start..end].to_vec(),
        });
        pos = end;
    }
    if segments.is_empty() {
        return Err(Error::Format("empty stream".into()));
    }
    Ok(segments)
}

/// Rational approximation of a frame rate: integers exactly, NTSC-style
/// rates over 1001, anything else over 1000.
pub fn frame_rate_ratio(fps: f64) -> (u32, u32) {
    if (fps - fps.round()).abs() < 1e-9 {
        return (fps.round() as u32, 1);
    }
    let ntsc = fps * 1001.0;
    if (ntsc - ntsc.round()).abs() < 1e-3 {
        return (ntsc.round() as u32, 1001);
    }
    ((fps * 1000.0).round() as u32, 1000)
}
