use crate::algebra::C64;
use crate::grid::GridSpec;
use crate::parallel::try_map_ordered;
use crate::report::ResidualReport;
use crate::soliton::{FieldSample, SolitonError};

use super::residual::stencil_note;
use super::stencil::{Line, StencilSpec};
use super::{sample_checked, FieldEvaluator, LaxError};

/// exp{(i/6)(X − T/18)}
pub fn gauge_factor(big_x: f64, big_t: f64) -> C64 {
    C64::from_polar(1.0, (big_x - big_t / 18.0) / 6.0)
}

/// Maps a solution u(x, t) of the three-component equation to the
/// higher-order NLS field q(X, T) = u(X − T/12, T)·exp{(i/6)(X − T/18)}.
pub struct GaugeMapped<'a, F: ?Sized> {
    inner: &'a F,
}

impl<'a, F: FieldEvaluator + ?Sized> GaugeMapped<'a, F> {
    pub fn new(inner: &'a F) -> Self {
        Self { inner }
    }
}

impl<F: FieldEvaluator + ?Sized> FieldEvaluator for GaugeMapped<'_, F> {
    fn sample(&self, big_x: f64, big_t: f64) -> Result<FieldSample, SolitonError> {
        let u = self.inner.sample(big_x - big_t / 12.0, big_t)?;
        Ok(u.scale(gauge_factor(big_x, big_t)))
    }

    fn sample_offset(&self, x0: f64, t0: f64, dx: f64, dt: f64) -> Result<FieldSample, SolitonError> {
        let u = self.inner.sample_offset(x0 - t0 / 12.0, t0, dx - dt / 12.0, dt)?;
        Ok(u.scale(gauge_factor(x0, t0) * gauge_factor(dx, dt)))
    }
}

/// iq_T + ½q_XX + qI + i[q_XXX + 6q_X I + 3q I_X] per component, I = Σ|qₘ|².
pub fn cnls_residual_at<F: FieldEvaluator + ?Sized>(
    q: &F,
    big_x: f64,
    big_t: f64,
    st: &StencilSpec,
) -> Result<[C64; 3], LaxError> {
    let order = st.order();
    let (hx, ht) = (st.hx(), st.ht());
    let xs = Line::sample(order.reach(), |k| sample_checked(q, (big_x, big_t), (k as f64 * hx, 0.0)))?;
    let ts = Line::sample(order.reach(), |k| sample_checked(q, (big_x, big_t), (0.0, k as f64 * ht)))?;
    let intensity = xs.map(|s| s.intensity());

    let v = xs.at(0).components();
    let vx = xs.derivative(order, 1, hx).components();
    let vxx = xs.derivative(order, 2, hx).components();
    let vxxx = xs.derivative(order, 3, hx).components();
    let vt = ts.derivative(order, 1, ht).components();
    let i0 = intensity.at(0);
    let ix = intensity.derivative(order, 1, hx);
    let i = C64::i();

    Ok([0, 1, 2].map(|m| {
        i * vt[m] + 0.5 * vxx[m] + v[m] * i0 + i * (vxxx[m] + 6.0 * vx[m] * i0 + 3.0 * v[m] * ix)
    }))
}

/// Residual of the higher-order NLS equation for the gauge image of `f`,
/// sampled on a regular (X, T) grid.
pub fn gauge_transform_and_cnls_residual<F: FieldEvaluator + ?Sized>(
    f: &F,
    grid: &GridSpec,
    st: &StencilSpec,
) -> Result<ResidualReport, LaxError> {
    let q = GaugeMapped::new(f);
    let values = try_map_ordered(&grid.points(), |&(x, t)| {
        cnls_residual_at(&q, x, t, st).map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max))
    })?;
    Ok(ResidualReport::from_values("cnls", format!("(X, T): {}", grid.describe()), &values)
        .note(stencil_note(st))
        .note("q(X,T) = u(X - T/12, T) exp{(i/6)(X - T/18)}".to_string()))
}
