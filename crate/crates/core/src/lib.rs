//! Multi-soliton solutions of the three-component coupled Sasa–Satsuma
//! equation
//!
//! ```text
//! uₘ,t + uₘ,xxx + 6(|u₁|² + |u₂|² + |u₃|²)uₘ,x + 3uₘ(|u₁|² + |u₂|² + |u₃|²)_x = 0,  m = 1, 2, 3
//! ```
//!
//! built from reflectionless Riemann–Hilbert data, with independent checks:
//! Lax-pair zero curvature, PDE residuals, Riemann–Hilbert symmetries and
//! direct scattering.

pub mod algebra;
pub mod grid;
pub mod io;
pub mod lax;
mod parallel;
pub mod report;
pub mod rhp;
pub mod scattering;
pub mod soliton;
pub mod structure;

pub use algebra::{ComplexMatrix, C64};
pub use grid::GridSpec;
pub use lax::{FieldEvaluator, StencilSpec};
pub use parallel::set_threads;
pub use report::ResidualReport;
pub use soliton::{eval_fields, FieldSample, SpectrumConfig};
