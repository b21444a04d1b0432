use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChromaFormat {
    C420,
    C444,
}

impl ChromaFormat {
    /// Chroma plane dimensions for a luma plane of `width`×`height`.
    pub fn chroma_dims(self, width: usize, height: usize) -> (usize, usize) {
        match self {
            ChromaFormat::C420 => (width / 2, height / 2),
            ChromaFormat::C444 => (width, height),
        }
    }

    /// Number of samples in one frame across all three planes.
    pub fn samples_per_frame(self, width: usize, height: usize) -> usize {
        let (cw, ch) = self.chroma_dims(width, height);
        width * height + 2 * cw * ch
    }
}

/// One plane of unsigned samples, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u16>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<u16>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Shape(format!(
                "plane {width}x{height} needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Plane {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u16) -> Self {
        Plane {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u16) {
        self.data[y * self.width + x] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u16]> {
        self.data.chunks_exact(self.width.max(1))
    }

    pub fn max_sample(&self) -> u16 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

/// Geometry and sample format shared by every frame of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFormat {
    pub width: usize,
    pub height: usize,
    pub coding_bit_depth: u8,
    pub chroma: ChromaFormat,
}

impl FrameFormat {
    pub fn new(width: usize, height: usize, coding_bit_depth: u8, chroma: ChromaFormat) -> Self {
        FrameFormat {
            width,
            height,
            coding_bit_depth,
            chroma,
        }
    }

    pub fn bytes_per_sample(&self) -> usize {
        if self.coding_bit_depth <= 8 {
            1
        } else {
            2
        }
    }

    pub fn frame_bytes(&self) -> usize {
        self.chroma.samples_per_frame(self.width, self.height) * self.bytes_per_sample()
    }

    pub fn validate(&self) -> Result<()> {
        if !(8..=16).contains(&self.coding_bit_depth) {
            return Err(Error::InvalidArgument(format!(
                "coding bit depth {} outside 8..=16",
                self.coding_bit_depth
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidArgument("empty frame dimensions".into()));
        }
        if self.chroma == ChromaFormat::C420 && (self.width % 2 != 0 || self.height % 2 != 0) {
            return Err(Error::InvalidArgument(format!(
                "4:2:0 frame needs even dimensions, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// A planar YCbCr picture.
///
/// `effective_bit_depth` counts the low-order bits that carry signal; it is
/// lowered by a right shift ahead of encoding and restored afterwards, while
/// `coding_bit_depth` (the container depth) never changes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub width: usize,
    pub height: usize,
    pub coding_bit_depth: u8,
    pub effective_bit_depth: u8,
    pub chroma: ChromaFormat,
    pub planes: [Plane; 3],
}

impl Frame {
    pub fn new(format: FrameFormat, effective_bit_depth: u8, planes: [Plane; 3]) -> Result<Self> {
        let frame = Frame {
            width: format.width,
            height: format.height,
            coding_bit_depth: format.coding_bit_depth,
            effective_bit_depth,
            chroma: format.chroma,
            planes,
        };
        frame.validate()?;
        Ok(frame)
    }

    /// Frame with every luma sample `y` and every chroma sample `c`, at full effective depth.
    pub fn filled(format: FrameFormat, y: u16, c: u16) -> Result<Self> {
        format.validate()?;
        let (cw, ch) = format.chroma.chroma_dims(format.width, format.height);
        Frame::new(
            format,
            format.coding_bit_depth,
            [
                Plane::filled(format.width, format.height, y),
                Plane::filled(cw, ch, c),
                Plane::filled(cw, ch, c),
            ],
        )
    }

    pub fn format(&self) -> FrameFormat {
        FrameFormat {
            width: self.width,
            height: self.height,
            coding_bit_depth: self.coding_bit_depth,
            chroma: self.chroma,
        }
    }

    pub fn luma(&self) -> &Plane {
        &self.planes[0]
    }

    /// Largest sample value allowed by the effective bit depth.
    pub fn max_value(&self) -> u16 {
        ((1u32 << self.effective_bit_depth) - 1) as u16
    }

    pub fn validate(&self) -> Result<()> {
        self.format().validate()?;
        if self.effective_bit_depth == 0 || self.effective_bit_depth > self.coding_bit_depth {
            return Err(Error::InvalidArgument(format!(
                "effective bit depth {} must lie in 1..={}",
                self.effective_bit_depth, self.coding_bit_depth
            )));
        }
        let (cw, ch) = self.chroma.chroma_dims(self.width, self.height);
        let expected = [(self.width, self.height), (cw, ch), (cw, ch)];
        for (i, (plane, (w, h))) in self.planes.iter().zip(expected).enumerate() {
            if plane.width != w || plane.height != h || plane.data.len() != w * h {
                return Err(Error::Shape(format!(
                    "plane {i} is {}x{}, expected {w}x{h}",
                    plane.width, plane.height
                )));
            }
        }
        let max = self.max_value();
        for (i, plane) in self.planes.iter().enumerate() {
            let m = plane.max_sample();
            if m > max {
                return Err(Error::Format(format!(
                    "plane {i} holds sample {m} above {max} ({}-bit effective)",
                    self.effective_bit_depth
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VideoSequence {
    pub frames: Vec<Frame>,
    pub frame_rate: f64,
}

impl VideoSequence {
    pub fn new(frames: Vec<Frame>, frame_rate: f64) -> Result<Self> {
        if !(frame_rate.is_finite() && frame_rate > 0.0) {
            return Err(Error::InvalidArgument(format!("frame rate {frame_rate}")));
        }
        if let Some(first) = frames.first() {
            let fmt = first.format();
            let ebd = first.effective_bit_depth;
            if let Some(i) = frames
                .iter()
                .position(|f| f.format() != fmt || f.effective_bit_depth != ebd)
            {
                return Err(Error::Shape(format!(
                    "frame {i} does not share the format of frame 0"
                )));
            }
        }
        Ok(VideoSequence { frames, frame_rate })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn format(&self) -> Option<FrameFormat> {
        self.frames.first().map(Frame::format)
    }
}
