use serde::{Deserialize, Serialize};

/// Adaptation applied to a segment. Bit-depth reduction is present in both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AdaptationMode {
    EbdOnly,
    SrEbd,
}

impl AdaptationMode {
    pub fn from_sr_flag(sr: bool) -> Self {
        if sr {
            AdaptationMode::SrEbd
        } else {
            AdaptationMode::EbdOnly
        }
    }

    pub fn sr_flag(self) -> bool {
        self == AdaptationMode::SrEbd
    }

    /// Fixed offset applied to the base QP.
    pub fn qp_offset(self) -> f64 {
        match self {
            AdaptationMode::EbdOnly => -6.0,
            AdaptationMode::SrEbd => -12.0,
        }
    }
}

/// Legal QP interval of the host codec.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QpRange {
    pub min: f64,
    pub max: f64,
}

impl Default for QpRange {
    fn default() -> Self {
        QpRange { min: 0.0, max: 63.0 }
    }
}

pub fn apply_qp_offset(qp_base: f64, mode: AdaptationMode, range: QpRange) -> f64 {
    (qp_base + mode.qp_offset()).clamp(range.min, range.max)
}
