//! Luma PSNR, Bjøntegaard deltas, RD-curve labelling and external VMAF.

mod bd;
mod psnr;
mod rd_csv;
mod vmaf;

pub use bd::{
    bd_metric, point_above_curve, BdKind, CurveComparison, Cubic, QualityMetric, RdCurve, RdPoint,
    MIN_CURVE_POINTS,
};
pub use psnr::{psnr_luma, sequence_psnr_luma, PSNR_CAP};
pub use rd_csv::{curve_from_records, read_rd_csv, write_rd_csv, RdRecord};
pub use vmaf::{parse_vmaf_output, vmaf_external};
