//! Headerless planar YCbCr files: Y, Cb, Cr planes per frame, row-major,
//! one byte per sample up to 8 bits and two little-endian bytes above that.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::frame::{Frame, FrameFormat, Plane, VideoSequence};
use crate::error::{Error, Result};

pub fn read_raw_video(path: &Path, format: FrameFormat, frame_rate: f64) -> Result<VideoSequence> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_raw(&bytes, format, frame_rate)
}

/// Parses an in-memory raw buffer. The buffer length must be a whole number of frames.
pub fn decode_raw(bytes: &[u8], format: FrameFormat, frame_rate: f64) -> Result<VideoSequence> {
    format.validate()?;
    let frame_bytes = format.frame_bytes();
    if bytes.len() % frame_bytes != 0 {
        let whole = bytes.len() / frame_bytes;
        return Err(Error::Truncated {
            expected: ((whole + 1) * frame_bytes) as u64,
            found: bytes.len() as u64,
        });
    }
    let frames = bytes
        .chunks_exact(frame_bytes)
        .map(|chunk| decode_frame(chunk, format))
        .collect::<Result<Vec<_>>>()?;
    VideoSequence::new(frames, frame_rate)
}

fn decode_frame(bytes: &[u8], format: FrameFormat) -> Result<Frame> {
    let (cw, ch) = format.chroma.chroma_dims(format.width, format.height);
    let dims = [(format.width, format.height), (cw, ch), (cw, ch)];
    let bps = format.bytes_per_sample();
    let max = ((1u32 << format.coding_bit_depth) - 1) as u16;
    let mut offset = 0;
    let mut planes = Vec::with_capacity(3);
    for (w, h) in dims {
        let n = w * h;
        let raw = &bytes[offset..offset + n * bps];
        offset += n * bps;
        let data: Vec<u16> = if bps == 1 {
            raw.iter().map(|&b| b as u16).collect()
        } else {
            raw.chunks_exact(2)
                .map(|c| u16::from_le_bytes([c[0], c[1]]))
                .collect()
        };
        if let Some(&bad) = data.iter().find(|&&v| v > max) {
            return Err(Error::Format(format!(
                "sample {bad} exceeds {}-bit range",
                format.coding_bit_depth
            )));
        }
        planes.push(Plane::new(w, h, data)?);
    }
    let planes: [Plane; 3] = planes.try_into().expect("three planes");
    Frame::new(format, format.coding_bit_depth, planes)
}

/// Serializes one frame in the raw layout.
pub fn encode_frame(frame: &Frame, out: &mut Vec<u8>) {
    let two_bytes = frame.coding_bit_depth > 8;
    for plane in &frame.planes {
        if two_bytes {
            out.extend(plane.data.iter().flat_map(|v| v.to_le_bytes()));
        } else {
            out.extend(plane.data.iter().map(|&v| v as u8));
        }
    }
}

pub fn encode_raw(frames: &[Frame]) -> Vec<u8> {
    let mut out = Vec::with_capacity(frames.first().map_or(0, |f| f.format().frame_bytes()) * frames.len());
    for f in frames {
        encode_frame(f, &mut out);
    }
    out
}

pub fn write_raw_video(seq: &VideoSequence, path: &Path) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::InvalidArgument("cannot write an empty sequence".into()));
    }
    let bytes = encode_raw(&seq.frames);
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    Ok(())
}
