//! WebAssembly exports for the static page in `www/`.
//!
//! Monte Carlo runs use a single worker stream, so results match
//! `gcap ... --workers 1` for the same seed.

use wasm_bindgen::prelude::*;

pub mod demo;

pub use demo::{Curve, FourPoints, HullSummary, MedianPanel};

fn js_err(e: gausscap::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = captureCurve)]
pub fn capture_curve(xi_max: f64, points: usize, tol: f64) -> Result<Curve, JsError> {
    demo::capture_curve(xi_max, points, tol).map_err(js_err)
}

#[wasm_bindgen(js_name = captureCurveMc)]
pub fn capture_curve_mc(xi_max: f64, points: usize, samples: u32, seed: u32) -> Result<Curve, JsError> {
    demo::capture_curve_mc(xi_max, points, samples.into(), seed.into()).map_err(js_err)
}

#[wasm_bindgen(js_name = medianPanel)]
pub fn median_panel(samples: u32, seed: u32) -> Result<MedianPanel, JsError> {
    demo::median_panel(samples.into(), seed.into()).map_err(js_err)
}

#[wasm_bindgen(js_name = sampleFour)]
pub fn sample_four(seed: u32, draw: u32) -> Result<FourPoints, JsError> {
    demo::sample_four(seed.into(), draw.into()).map_err(js_err)
}

#[wasm_bindgen(js_name = hullSummary)]
pub fn hull_summary(samples: u32, seed: u32) -> Result<HullSummary, JsError> {
    demo::hull_summary(samples.into(), seed.into()).map_err(js_err)
}
