//! wasm-bindgen front end for the static demo page in `www/`.
//!
//! Three operations: a live twin experiment, a preview of observation
//! regions and their trajectories, and a thickness-ratio explorer.

pub mod demo;

use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct TwinDemo {
    inner: demo::Twin,
}

#[wasm_bindgen]
impl TwinDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32) -> Result<TwinDemo, JsError> {
        Ok(TwinDemo {
            inner: demo::Twin::new(seed as u64).map_err(|e| JsError::new(&e))?,
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn time(&self) -> f64 {
        self.inner.time()
    }

    pub fn elapsed(&self) -> f64 {
        self.inner.elapsed()
    }

    pub fn assimilating(&self) -> bool {
        self.inner.is_assimilating()
    }

    pub fn start(&mut self, mu: f64, subdomain: &str, p: u32, interpolant: &str) -> Result<(), JsError> {
        self.inner
            .start(mu, subdomain, p, interpolant)
            .map_err(|e| JsError::new(&e))
    }

    pub fn stop(&mut self) {
        self.inner.stop();
    }

    /// Relative L² error after `steps` steps (NaN while only spinning up).
    pub fn advance(&mut self, steps: u32) -> Result<f64, JsError> {
        self.inner.advance(steps).map_err(|e| JsError::new(&e))
    }

    /// RGBA pixels for `ref`, `assim` or `diff`.
    pub fn render(&self, view: &str) -> Result<Vec<u8>, JsError> {
        let view = demo::View::parse(view).map_err(|e| JsError::new(&e))?;
        Ok(self.inner.render(view))
    }
}

#[wasm_bindgen]
pub fn mask_preview(n: usize, subdomain: &str, t: f64, samples: u32) -> Result<Vec<u8>, JsError> {
    demo::mask_preview(n, subdomain, t, samples).map_err(|e| JsError::new(&e))
}

/// JSON: slope, intercept, r_squared, mask_fraction, k[], max_ratio[].
#[wasm_bindgen]
pub fn spectral_explorer(n: usize, fraction: f64, k_max: u32, samples: usize, seed: u32) -> Result<String, JsError> {
    demo::spectral_explorer(n, fraction, k_max, samples, seed as u64).map_err(|e| JsError::new(&e))
}
