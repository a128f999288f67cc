//! Lax pair matrices and finite-difference residuals.
//!
//! ```text
//! Φ_x = UΦ,  U = iλσ₃ + Q
//! Φ_t = VΦ,  V = 4iλ³σ₃ + 4λ²Q + 2iλ(Q² + Q_x)σ₃ + Q_xQ − QQ_x − Q_xx + 2Q³
//! ```
//!
//! Every residual here samples a [`FieldEvaluator`] on a central-difference
//! footprint around each point. Evaluators are closed-form, so stencils
//! extend past the grid freely.

mod gauge;
mod matrices;
mod residual;
mod stencil;

use thiserror::Error;

use crate::soliton::{eval_fields, eval_fields_offset, FieldSample, SolitonError, SpectrumConfig};

pub use gauge::{cnls_residual_at, gauge_factor, gauge_transform_and_cnls_residual, GaugeMapped};
pub use matrices::{build_q, build_u, build_v, build_v_x};
pub use residual::{pde_residual_at, pde_residual_tccss, zero_curvature_matrix, zero_curvature_residual};
pub use stencil::{Order, StencilError, StencilSpec, MAX_STEP};

/// A deterministic map (x, t) ↦ (u₁, u₂, u₃).
pub trait FieldEvaluator: Sync {
    fn sample(&self, x: f64, t: f64) -> Result<FieldSample, SolitonError>;

    /// The field at (x₀ + dx, t₀ + dt). Stencils call this with a fixed base
    /// point so evaluators can keep the rounding of the large part common
    /// to every stencil node.
    fn sample_offset(&self, x0: f64, t0: f64, dx: f64, dt: f64) -> Result<FieldSample, SolitonError> {
        self.sample(x0 + dx, t0 + dt)
    }
}

impl FieldEvaluator for SpectrumConfig {
    fn sample(&self, x: f64, t: f64) -> Result<FieldSample, SolitonError> {
        eval_fields(self, x, t)
    }

    fn sample_offset(&self, x0: f64, t0: f64, dx: f64, dt: f64) -> Result<FieldSample, SolitonError> {
        eval_fields_offset(self, (x0, t0), (dx, dt))
    }
}

impl<F> FieldEvaluator for F
where
    F: Fn(f64, f64) -> Result<FieldSample, SolitonError> + Sync,
{
    fn sample(&self, x: f64, t: f64) -> Result<FieldSample, SolitonError> {
        self(x, t)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LaxError {
    #[error("field evaluation failed at ({x}, {t}): {source}")]
    Field {
        x: f64,
        t: f64,
        #[source]
        source: SolitonError,
    },
    #[error("field is not finite at ({x}, {t})")]
    NonFinite { x: f64, t: f64 },
}

/// Samples at (x₀ + dx, t₀ + dt) and rejects non-finite values.
pub(crate) fn sample_checked<F: FieldEvaluator + ?Sized>(
    f: &F,
    (x0, t0): (f64, f64),
    (dx, dt): (f64, f64),
) -> Result<FieldSample, LaxError> {
    let (x, t) = (x0 + dx, t0 + dt);
    let s = f.sample_offset(x0, t0, dx, dt).map_err(|source| LaxError::Field { x, t, source })?;
    if s.is_finite() {
        Ok(s)
    } else {
        Err(LaxError::NonFinite { x, t })
    }
}
