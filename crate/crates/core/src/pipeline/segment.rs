use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentPlan {
    pub start: usize,
    pub len: usize,
    pub sr_flag: bool,
}

/// Minimum segment length: one second of frames.
pub fn min_segment_frames(frame_rate: f64) -> usize {
    frame_rate.ceil().max(1.0) as usize
}

/// Turns per-GOP decisions into coding segments of at least one second.
///
/// Adjacent GOPs with equal decisions form runs. A run shorter than the
/// minimum is absorbed by the segment before it, and a segment still shorter
/// than the minimum keeps absorbing the runs after it, keeping its own flag.
/// A short trailing segment merges backward. The last GOP may be partial when
/// `total_frames` is not a multiple of `gop_len`.
pub fn segment_sequence(decisions: &[bool], gop_len: usize, frame_rate: f64, total_frames: usize) -> Result<Vec<SegmentPlan>> {
    if decisions.is_empty() || gop_len == 0 || total_frames == 0 {
        return Err(Error::InvalidArgument("segmentation needs decisions and frames".into()));
    }
    if decisions.len() != total_frames.div_ceil(gop_len) {
        return Err(Error::InvalidArgument(format!(
            "{} decisions for {total_frames} frames in GOPs of {gop_len}",
            decisions.len()
        )));
    }
    let min = min_segment_frames(frame_rate);

    let mut runs: Vec<SegmentPlan> = Vec::new();
    for (g, &d) in decisions.iter().enumerate() {
        let start = g * gop_len;
        let len = gop_len.min(total_frames - start);
        match runs.last_mut() {
            Some(r) if r.sr_flag == d => r.len += len,
            _ => runs.push(SegmentPlan {
                start,
                len,
                sr_flag: d,
            }),
        }
    }

    let mut segs: Vec<SegmentPlan> = Vec::new();
    for run in runs {
        match segs.last_mut() {
            Some(last) if last.len < min || run.len < min || last.sr_flag == run.sr_flag => {
                last.len += run.len
            }
            _ => segs.push(run),
        }
    }
    if segs.len() > 1 && segs[segs.len() - 1].len < min {
        let tail = segs.pop().expect("len > 1");
        segs.last_mut().expect("len > 1").len += tail.len;
    }
    Ok(segs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_true() {
        let s = segment_sequence(&[true; 4], 16, 30.0, 64).unwrap();
        assert_eq!(s, vec![SegmentPlan { start: 0, len: 64, sr_flag: true }]);
    }

    #[test]
    fn two_long_runs() {
        let d = [true, true, true, true, false, false, false, false];
        let s = segment_sequence(&d, 16, 30.0, 128).unwrap();
        assert_eq!(
            s,
            vec![
                SegmentPlan { start: 0, len: 64, sr_flag: true },
                SegmentPlan { start: 64, len: 64, sr_flag: false }
            ]
        );
    }

    #[test]
    fn alternating_at_sixty() {
        let d: Vec<bool> = (0..12).map(|g| g % 2 == 0).collect();
        let s = segment_sequence(&d, 16, 60.0, 192).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].sr_flag);
        assert_eq!(s[0].len, 192);
    }

    #[test]
    fn short_first_run_merges_forward() {
        // 16 false then 64 true @ 30 fps: first run absorbs the next one
        let d = [false, true, true, true, true];
        let s = segment_sequence(&d, 16, 30.0, 80).unwrap();
        assert_eq!(s, vec![SegmentPlan { start: 0, len: 80, sr_flag: false }]);
    }

    #[test]
    fn short_middle_run_absorbed_backward() {
        let d = [true, true, false, true, true];
        let s = segment_sequence(&d, 16, 30.0, 80).unwrap();
        assert_eq!(s, vec![SegmentPlan { start: 0, len: 80, sr_flag: true }]);
    }

    #[test]
    fn partial_last_gop() {
        let s = segment_sequence(&[true, true, false], 16, 24.0, 40).unwrap();
        assert_eq!(s.iter().map(|p| p.len).sum::<usize>(), 40);
        assert!(segment_sequence(&[true], 16, 24.0, 40).is_err());
    }
}
