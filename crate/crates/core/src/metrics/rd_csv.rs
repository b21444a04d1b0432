//! RD data interchange: `sequence,codec,qp,bitrate_kbps,psnr_db[,vmaf]`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::bd::{QualityMetric, RdCurve, RdPoint};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RdRecord {
    pub sequence: String,
    pub codec: String,
    pub qp: f64,
    pub bitrate_kbps: f64,
    pub psnr_db: f64,
    #[serde(default)]
    pub vmaf: Option<f64>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("RD CSV: {e}"))
}

pub fn write_rd_csv<W: Write>(records: &[RdRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rd_csv<R: Read>(input: R) -> Result<Vec<RdRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<Vec<RdRecord>, _>>()
        .map_err(csv_err)
}

/// Builds the curve of one (sequence, codec) pair over the QPs in `qps`.
pub fn curve_from_records(
    records: &[RdRecord],
    sequence: &str,
    codec: &str,
    qps: &[f64],
    metric: QualityMetric,
) -> Result<RdCurve> {
    let points = records
        .iter()
        .filter(|r| r.sequence == sequence && r.codec == codec && qps.contains(&r.qp))
        .map(|r| {
            let q = match metric {
                QualityMetric::Psnr => Some(r.psnr_db),
                QualityMetric::Vmaf => r.vmaf,
            };
            q.map(|q| RdPoint::new(r.bitrate_kbps, q)).ok_or_else(|| {
                Error::InvalidArgument(format!("{sequence}/{codec} QP {} has no VMAF value", r.qp))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RdCurve::new(points, metric)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_and_without_vmaf() {
        let recs = vec![
            RdRecord {
                sequence: "Campfire".into(),
                codec: "anchor".into(),
                qp: 22.0,
                bitrate_kbps: 1234.5,
                psnr_db: 41.2,
                vmaf: Some(95.0),
            },
            RdRecord {
                sequence: "Campfire".into(),
                codec: "anchor".into(),
                qp: 27.0,
                bitrate_kbps: 600.0,
                psnr_db: 38.0,
                vmaf: None,
            },
        ];
        let mut buf = Vec::new();
        write_rd_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("sequence,codec,qp,bitrate_kbps,psnr_db,vmaf\n"));
        assert_eq!(read_rd_csv(&buf[..]).unwrap(), recs);

        let no_vmaf = "sequence,codec,qp,bitrate_kbps,psnr_db\nA,x,22,100,40\n";
        let r = read_rd_csv(no_vmaf.as_bytes()).unwrap();
        assert_eq!(r[0].vmaf, None);
    }
}
