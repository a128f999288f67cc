use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::grid::GridSpec;
use crate::lax::FieldEvaluator;
use crate::parallel::try_map_ordered;
use crate::soliton::{FieldSample, SolitonError};

use super::config::{OutputFormat, RunConfig};
use super::IoError;

pub const CSV_HEADER: &str = "x,t,re_u1,im_u1,re_u2,im_u2,re_u3,im_u3,abs_u1,abs_u2,abs_u3";

/// Field samples on a grid, t-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    grid: GridSpec,
    samples: Vec<FieldSample>,
}

impl FieldGrid {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[FieldSample] {
        &self.samples
    }

    /// Sample at x-index i, t-index k.
    pub fn at(&self, i: usize, k: usize) -> FieldSample {
        self.samples[k * self.grid.nx + i]
    }

    pub fn max_abs(&self, component: usize) -> f64 {
        self.samples
            .iter()
            .map(|s| s.components()[component].norm())
            .fold(0.0, f64::max)
    }
}

pub fn sample_grid<F: FieldEvaluator + ?Sized>(f: &F, grid: &GridSpec) -> Result<FieldGrid, SolitonError> {
    let samples = try_map_ordered(&grid.points(), |&(x, t)| f.sample(x, t))?;
    Ok(FieldGrid { grid: *grid, samples })
}

/// 17 significant digits, exponent form.
fn num(out: &mut String, v: f64) {
    // normalize −0 so sign-of-zero noise never changes the bytes
    let v = if v == 0.0 { 0.0 } else { v };
    write!(out, "{v:.16e}").expect("writing to a String");
}

pub fn to_csv(fg: &FieldGrid) -> String {
    let mut out = String::with_capacity(fg.samples.len() * 256);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for ((x, t), s) in fg.grid.points().into_iter().zip(&fg.samples) {
        let c = s.components();
        let cols = [x, t, c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im, c[0].norm(), c[1].norm(), c[2].norm()];
        for (j, v) in cols.into_iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            num(&mut out, v);
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonGrid<'a> {
    grid: &'a GridSpec,
    x: Vec<f64>,
    t: Vec<f64>,
    u1: Vec<[f64; 2]>,
    u2: Vec<[f64; 2]>,
    u3: Vec<[f64; 2]>,
}

pub fn to_json(fg: &FieldGrid) -> String {
    let g = &fg.grid;
    let comp = |m: usize| fg.samples.iter().map(|s| { let z = s.components()[m]; [z.re, z.im] }).collect();
    let doc = JsonGrid {
        grid: g,
        x: (0..g.nx).map(|i| g.x(i)).collect(),
        t: (0..g.nt).map(|k| g.t(k)).collect(),
        u1: comp(0),
        u2: comp(1),
        u3: comp(2),
    };
    serde_json::to_string(&doc).expect("finite samples always serialize")
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write { path: path.to_path_buf(), source })
}

/// Evaluates the configured spectrum on its grid and writes it to `path` in
/// the configured format (CSV when no output section is given).
pub fn export_grid(cfg: &RunConfig, path: &Path) -> Result<FieldGrid, IoError> {
    let fg = sample_grid(cfg.spectrum(), cfg.grid())?;
    let format = cfg.output().map(|o| o.format).unwrap_or_default();
    let text = match format {
        OutputFormat::Csv => to_csv(&fg),
        OutputFormat::Json => to_json(&fg),
    };
    write_text(path, &text)?;
    Ok(fg)
}
