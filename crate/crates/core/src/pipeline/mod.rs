//! Encode/decode orchestration around an external host codec.

mod adapter;
mod coding;
mod container;
mod qp;
mod segment;

pub use adapter::{CodecAdapter, CodingParams, PLACEHOLDERS};
pub use coding::{
    adapt_frame, decode_video, encode_video, DecodeOptions, DecodeReport, DecodeSegmentLog,
    EncodeOptions, EncodeReport, EncodeSegmentLog, GopLog, ModeSelection, Restoration,
    BASELINE_LABEL, DEFAULT_GOP, EBD_SHIFT,
};
pub use container::{
    frame_rate_ratio, parse_stream, serialize_stream, Segment, SegmentHeader, HEADER_LEN,
    SEGMENT_MAGIC,
};
pub use qp::{apply_qp_offset, AdaptationMode, QpRange};
pub use segment::{min_segment_frames, segment_sequence, SegmentPlan};
