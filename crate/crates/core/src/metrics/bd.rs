//! Bjøntegaard deltas from cubic least-squares fits of RD curves.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QualityMetric {
    Psnr,
    Vmaf,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RdPoint {
    pub bitrate_kbps: f64,
    pub quality: f64,
}

impl RdPoint {
    pub fn new(bitrate_kbps: f64, quality: f64) -> Self {
        RdPoint {
            bitrate_kbps,
            quality,
        }
    }
}

/// At least four points with strictly increasing, positive bitrates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RdCurve {
    points: Vec<RdPoint>,
    pub metric: QualityMetric,
}

pub const MIN_CURVE_POINTS: usize = 4;

impl RdCurve {
    pub fn new(mut points: Vec<RdPoint>, metric: QualityMetric) -> Result<Self> {
        if points.len() < MIN_CURVE_POINTS {
            return Err(Error::InvalidArgument(format!(
                "RD curve needs {MIN_CURVE_POINTS} points, got {}",
                points.len()
            )));
        }
        if points
            .iter()
            .any(|p| !(p.bitrate_kbps > 0.0 && p.bitrate_kbps.is_finite() && p.quality.is_finite()))
        {
            return Err(Error::InvalidArgument("RD points need finite values and positive bitrate".into()));
        }
        points.sort_by(|a, b| a.bitrate_kbps.total_cmp(&b.bitrate_kbps));
        if points.windows(2).any(|w| w[0].bitrate_kbps == w[1].bitrate_kbps) {
            return Err(Error::InvalidArgument("duplicate bitrate in RD curve".into()));
        }
        if points.windows(2).any(|w| w[1].quality < w[0].quality) {
            log::warn!("RD curve quality is not monotone in bitrate; using the fitted values");
        }
        Ok(RdCurve { points, metric })
    }

    pub fn points(&self) -> &[RdPoint] {
        &self.points
    }

    fn log_rates(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.bitrate_kbps.log10()).collect()
    }

    fn qualities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.quality).collect()
    }
}

/// Least-squares cubic in a centred, scaled variable.
#[derive(Clone, Debug)]
pub struct Cubic {
    coeffs: [f64; 4],
    centre: f64,
    scale: f64,
}

impl Cubic {
    pub fn fit(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        let centre = xs.iter().sum::<f64>() / n as f64;
        let spread = xs.iter().map(|x| (x - centre).abs()).fold(0.0, f64::max);
        let scale = if spread > 0.0 { spread } else { 1.0 };
        let a = DMatrix::from_fn(n, 4, |r, c| ((xs[r] - centre) / scale).powi(c as i32));
        let b = DVector::from_column_slice(ys);
        let sol = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::InvalidArgument(format!("cubic fit failed: {e}")))?;
        Ok(Cubic {
            coeffs: [sol[0], sol[1], sol[2], sol[3]],
            centre,
            scale,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.centre) / self.scale;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// Exact integral over `[lo, hi]`.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let anti = |x: f64| {
            let t = (x - self.centre) / self.scale;
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * t.powi(k as i32 + 1) / (k as f64 + 1.0))
                .sum::<f64>()
        };
        (anti(hi) - anti(lo)) * self.scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BdKind {
    /// Average bitrate difference at equal quality, in percent.
    Rate,
    /// Average quality difference at equal bitrate, in the metric's units.
    Quality,
}

fn overlap(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = min(a).max(min(b));
    let hi = max(a).min(max(b));
    if hi <= lo {
        return Err(Error::InvalidArgument(format!(
            "RD curves do not overlap ([{lo}, {hi}])"
        )));
    }
    Ok((lo, hi))
}

/// Bjøntegaard delta of `test` relative to `anchor`.
pub fn bd_metric(anchor: &RdCurve, test: &RdCurve, kind: BdKind) -> Result<f64> {
    if anchor.metric != test.metric {
        return Err(Error::InvalidArgument(format!(
            "{:?} curve compared with {:?} curve",
            anchor.metric, test.metric
        )));
    }
    let (xa, ya, xt, yt) = match kind {
        BdKind::Rate => (anchor.qualities(), anchor.log_rates(), test.qualities(), test.log_rates()),
        BdKind::Quality => (anchor.log_rates(), anchor.qualities(), test.log_rates(), test.qualities()),
    };
    let (lo, hi) = overlap(&xa, &xt)?;
    let fa = Cubic::fit(&xa, &ya)?;
    let ft = Cubic::fit(&xt, &yt)?;
    let avg = (ft.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
    Ok(match kind {
        BdKind::Rate => (10f64.powf(avg) - 1.0) * 100.0,
        BdKind::Quality => avg,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveComparison {
    pub above: bool,
    /// The point's bitrate lies outside the curve's bitrate range.
    pub extrapolated: bool,
    pub fitted_quality: f64,
}

/// Whether `point` lies strictly above the cubic fit of quality against
/// log-bitrate. Differences within 1e-9 (relative) count as on the curve.
pub fn point_above_curve(curve: &RdCurve, point: RdPoint) -> Result<CurveComparison> {
    if !(point.bitrate_kbps > 0.0) {
        return Err(Error::InvalidArgument("bitrate must be positive".into()));
    }
    let fit = Cubic::fit(&curve.log_rates(), &curve.qualities())?;
    let fitted = fit.eval(point.bitrate_kbps.log10());
    let first = curve.points[0].bitrate_kbps;
    let last = curve.points[curve.points.len() - 1].bitrate_kbps;
    let tol = 1e-9 * fitted.abs().max(1.0);
    Ok(CurveComparison {
        above: point.quality > fitted + tol,
        extrapolated: point.bitrate_kbps < first || point.bitrate_kbps > last,
        fitted_quality: fitted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anchor() -> RdCurve {
        RdCurve::new(
            vec![
                RdPoint::new(800.0, 32.1),
                RdPoint::new(1500.0, 35.0),
                RdPoint::new(2900.0, 37.6),
                RdPoint::new(6000.0, 40.2),
            ],
            QualityMetric::Psnr,
        )
        .unwrap()
    }

    #[test]
    fn identical_curves() {
        let a = anchor();
        assert!(bd_metric(&a, &a, BdKind::Rate).unwrap().abs() < 1e-9);
        assert!(bd_metric(&a, &a, BdKind::Quality).unwrap().abs() < 1e-9);
    }

    #[test]
    fn curve_validation() {
        assert!(RdCurve::new(vec![RdPoint::new(1.0, 1.0); 3], QualityMetric::Psnr).is_err());
        let dup = vec![RdPoint::new(1.0, 1.0), RdPoint::new(1.0, 2.0), RdPoint::new(2.0, 3.0), RdPoint::new(3.0, 4.0)];
        assert!(RdCurve::new(dup, QualityMetric::Psnr).is_err());
        let neg = vec![RdPoint::new(-1.0, 1.0), RdPoint::new(1.0, 2.0), RdPoint::new(2.0, 3.0), RdPoint::new(3.0, 4.0)];
        assert!(RdCurve::new(neg, QualityMetric::Psnr).is_err());
    }

    #[test]
    fn disjoint_curves() {
        let a = anchor();
        let b = RdCurve::new(
            a.points().iter().map(|p| RdPoint::new(p.bitrate_kbps, p.quality + 20.0)).collect(),
            QualityMetric::Psnr,
        )
        .unwrap();
        assert!(bd_metric(&a, &b, BdKind::Rate).is_err());
    }

    #[test]
    fn metric_mismatch() {
        let a = anchor();
        let mut b = anchor();
        b.metric = QualityMetric::Vmaf;
        assert!(bd_metric(&a, &b, BdKind::Quality).is_err());
    }

    #[test]
    fn curve_points_are_not_above() {
        let a = anchor();
        for p in a.points() {
            let c = point_above_curve(&a, *p).unwrap();
            assert!(!c.above);
            assert!(!c.extrapolated);
            let lifted = RdPoint::new(p.bitrate_kbps, p.quality + 0.5);
            assert!(point_above_curve(&a, lifted).unwrap().above);
        }
        assert!(point_above_curve(&a, RdPoint::new(10000.0, 50.0)).unwrap().extrapolated);
    }

    #[test]
    fn cubic_integral_matches_polynomial() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 + 2.0 * x - x * x + 0.5 * x * x * x).collect();
        let c = Cubic::fit(&xs, &ys).unwrap();
        assert!((c.eval(2.5) - (1.0 + 5.0 - 6.25 + 0.5 * 15.625)).abs() < 1e-9);
        // ∫0^4 = 4 + 16 - 64/3 + 0.5*64
        assert!((c.integral(0.0, 4.0) - (4.0 + 16.0 - 64.0 / 3.0 + 32.0)).abs() < 1e-9);
    }
}
