//! WebAssembly bindings for the browser demo in `www/`.

pub mod demo;

use wasm_bindgen::prelude::*;

use demo::{Pattern, Upsampler};

/// Interleaved `[x0, y0, x1, y1, ...]` samples of the Lanczos3 kernel.
#[wasm_bindgen(js_name = kernelCurve)]
pub fn kernel_curve(samples: usize) -> Vec<f64> {
    demo::kernel_curve(samples).into_iter().flat_map(|(x, y)| [x, y]).collect()
}

/// Phases as JSON: `[{"offset": -5, "taps": [...]}, ...]`.
#[wasm_bindgen(js_name = kernelTaps)]
pub fn kernel_taps(down: bool) -> String {
    let phases: Vec<_> = demo::kernel_taps(down)
        .into_iter()
        .map(|(offset, taps)| serde_json::json!({ "offset": offset, "taps": taps }))
        .collect();
    serde_json::Value::Array(phases).to_string()
}

#[wasm_bindgen]
pub struct RoundTripView {
    width: usize,
    height: usize,
    original: Vec<u8>,
    restored: Vec<u8>,
    error: Vec<u8>,
    psnr: f64,
}

#[wasm_bindgen]
impl RoundTripView {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }

    #[wasm_bindgen(getter)]
    pub fn height(&self) -> usize {
        self.height
    }

    #[wasm_bindgen(getter)]
    pub fn psnr(&self) -> f64 {
        self.psnr
    }

    pub fn original(&self) -> Vec<u8> {
        self.original.clone()
    }

    pub fn restored(&self) -> Vec<u8> {
        self.restored.clone()
    }

    pub fn error(&self) -> Vec<u8> {
        self.error.clone()
    }
}

/// Runs a test pattern through down-sampling and/or bit-depth reduction and
/// back. `upsampler` is "lanczos3", "nearest" or "none" (no spatial step).
#[wasm_bindgen(js_name = roundTrip)]
pub fn round_trip(
    pattern: &str,
    width: usize,
    height: usize,
    period: usize,
    upsampler: &str,
    ebd_bits: u8,
    error_gain: f64,
) -> Result<RoundTripView, JsError> {
    let spatial = match upsampler {
        "lanczos3" => Some(Upsampler::Lanczos3),
        "nearest" => Some(Upsampler::Nearest),
        "none" => None,
        other => return Err(JsError::new(&format!("unknown up-sampler {other:?}"))),
    };
    let src = demo::pattern_frame(Pattern::from_name(pattern).map_err(|e| JsError::new(&e))?, width, height, period)
        .map_err(|e| JsError::new(&e))?;
    let rt = demo::round_trip(&src, spatial, ebd_bits).map_err(|e| JsError::new(&e))?;
    Ok(RoundTripView {
        width,
        height,
        original: demo::luma_rgba(&rt.original),
        restored: demo::luma_rgba(&rt.restored),
        error: demo::error_rgba(&rt.original, &rt.restored, error_gain),
        psnr: rt.psnr,
    })
}

/// `[bd_rate_percent, bd_psnr_db]` for two `bitrate,psnr` point lists.
#[wasm_bindgen(js_name = bdMetrics)]
pub fn bd_metrics(anchor: &str, test: &str) -> Result<Vec<f64>, JsError> {
    let (r, q) = demo::bd_pair(anchor, test).map_err(|e| JsError::new(&e))?;
    Ok(vec![r, q])
}

/// Trained QP group whose model the decoder would load for `qp_base`.
#[wasm_bindgen(js_name = modelGroup)]
pub fn model_group(qp_base: f64) -> u8 {
    demo::model_group(qp_base)
}
