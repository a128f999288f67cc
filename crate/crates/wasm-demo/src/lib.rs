//! Browser bindings. Each exported function takes a run configuration as
//! JSON text and returns JSON text; the plain `*_json` functions carry the
//! logic so they can be tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use tccss::io::{parse_config, preset, FigureId, RunConfig};
use tccss::lax::pde_residual_at;
use tccss::scattering::{omega77_sampled, SampledPotential};
use tccss::{FieldEvaluator, C64};

/// Largest grid the page will sample in one call.
const MAX_POINTS: usize = 400_000;

fn config(text: &str) -> Result<RunConfig, String> {
    parse_config(text).map_err(|e| e.to_string())
}

pub fn preset_json(id: u8) -> Result<String, String> {
    let id = FigureId::new(id).map_err(|e| e.to_string())?;
    let p = preset(id);
    let config: Value = serde_json::from_str(&p.config.to_json()).map_err(|e| e.to_string())?;
    Ok(json!({ "caption": p.caption, "notes": p.notes, "config": config }).to_string())
}

/// |u₁|, |u₂|, |u₃| on the configured grid, t-major.
pub fn field_grid_json(cfg: &str) -> Result<String, String> {
    let cfg = config(cfg)?;
    let g = *cfg.grid();
    if g.len() > MAX_POINTS {
        return Err(format!("grid has {} points, the demo allows {MAX_POINTS}", g.len()));
    }
    let spec = cfg.spectrum();
    let mut abs = [Vec::with_capacity(g.len()), Vec::with_capacity(g.len()), Vec::with_capacity(g.len())];
    for (x, t) in g.points() {
        let u = spec.sample(x, t).map_err(|e| e.to_string())?.components();
        for (col, z) in abs.iter_mut().zip(u) {
            col.push(z.norm());
        }
    }
    Ok(json!({ "grid": g, "abs": abs }).to_string())
}

/// PDE residual max_m |r_m| along x at time `t`, using the configured stencil.
pub fn residual_slice_json(cfg: &str, t: f64) -> Result<String, String> {
    let cfg = config(cfg)?;
    let g = cfg.grid();
    let mut xs = Vec::with_capacity(g.nx);
    let mut res = Vec::with_capacity(g.nx);
    for i in 0..g.nx {
        let x = g.x(i);
        let r = pde_residual_at(cfg.spectrum(), x, t, cfg.stencil()).map_err(|e| e.to_string())?;
        xs.push(x);
        res.push(r.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(json!({ "t": t, "x": xs, "residual": res }).to_string())
}

/// |Ω₇₇(iη)| for η in (0, eta_max]; it vanishes at purely imaginary zeros.
pub fn omega_sweep_json(cfg: &str, eta_max: f64, n: usize) -> Result<String, String> {
    if !(eta_max > 0.0 && eta_max.is_finite()) || n == 0 {
        return Err("need eta_max > 0 and n > 0".into());
    }
    let cfg = config(cfg)?;
    let sc = cfg.scattering();
    let pot = SampledPotential::new(cfg.spectrum(), sc.t, sc.domain(), sc.n_steps).map_err(|e| e.to_string())?;
    let mut etas = Vec::with_capacity(n);
    let mut abs = Vec::with_capacity(n);
    for k in 1..=n {
        let eta = eta_max * k as f64 / n as f64;
        let w = omega77_sampled(&pot, C64::new(0.0, eta)).map_err(|e| e.to_string())?;
        etas.push(eta);
        abs.push(w.norm());
    }
    Ok(json!({ "eta": etas, "abs_omega77": abs }).to_string())
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn preset_config(id: u8) -> Result<String, JsValue> {
    js(preset_json(id))
}

#[wasm_bindgen]
pub fn field_grid(cfg: &str) -> Result<String, JsValue> {
    js(field_grid_json(cfg))
}

#[wasm_bindgen]
pub fn residual_slice(cfg: &str, t: f64) -> Result<String, JsValue> {
    js(residual_slice_json(cfg, t))
}

#[wasm_bindgen]
pub fn omega_sweep(cfg: &str, eta_max: f64, n: usize) -> Result<String, JsValue> {
    js(omega_sweep_json(cfg, eta_max, n))
}
