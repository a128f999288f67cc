use crate::algebra::{ComplexMatrix, C64};
use crate::grid::GridSpec;
use crate::parallel::try_map_ordered;
use crate::report::ResidualReport;

use super::matrices::{build_q, build_u, build_v, build_v_x};
use super::stencil::{Line, StencilSpec};
use super::{sample_checked, FieldEvaluator, LaxError};

/// U_t − V_x + [U, V] at one point. Q_x, Q_xx, Q_xxx and Q_t come from
/// central differences; V_x is assembled from them by the product rule.
pub fn zero_curvature_matrix<F: FieldEvaluator + ?Sized>(
    f: &F,
    lambda: C64,
    x: f64,
    t: f64,
    st: &StencilSpec,
) -> Result<ComplexMatrix, LaxError> {
    let order = st.order();
    let (hx, ht) = (st.hx(), st.ht());
    let xs = Line::sample(order.reach(), |k| sample_checked(f, (x, t), (k as f64 * hx, 0.0)))?;
    let ts = Line::sample(order.reach(), |k| sample_checked(f, (x, t), (0.0, k as f64 * ht)))?;

    let q = build_q(&xs.at(0));
    let qx = build_q(&xs.derivative(order, 1, hx));
    let qxx = build_q(&xs.derivative(order, 2, hx));
    let qxxx = build_q(&xs.derivative(order, 3, hx));
    let qt = build_q(&ts.derivative(order, 1, ht));

    let u = build_u(lambda, &q);
    let v = build_v(lambda, &q, &qx, &qxx);
    let vx = build_v_x(lambda, &q, &qx, &qxx, &qxxx);
    Ok(&(&qt - &vx) + &u.commutator(&v))
}

/// Max-abs entry of [`zero_curvature_matrix`].
pub fn zero_curvature_residual<F: FieldEvaluator + ?Sized>(
    f: &F,
    lambda: C64,
    x: f64,
    t: f64,
    st: &StencilSpec,
) -> Result<f64, LaxError> {
    Ok(zero_curvature_matrix(f, lambda, x, t, st)?.max_abs())
}

/// uₘ,t + uₘ,xxx + 6 I uₘ,x + 3 uₘ I_x with I = |u₁|² + |u₂|² + |u₃|², per component.
pub fn pde_residual_at<F: FieldEvaluator + ?Sized>(
    f: &F,
    x: f64,
    t: f64,
    st: &StencilSpec,
) -> Result<[C64; 3], LaxError> {
    let order = st.order();
    let (hx, ht) = (st.hx(), st.ht());
    let xs = Line::sample(order.reach(), |k| sample_checked(f, (x, t), (k as f64 * hx, 0.0)))?;
    let ts = Line::sample(order.reach(), |k| sample_checked(f, (x, t), (0.0, k as f64 * ht)))?;
    let intensity = xs.map(|s| s.intensity());

    let u = xs.at(0).components();
    let ux = xs.derivative(order, 1, hx).components();
    let uxxx = xs.derivative(order, 3, hx).components();
    let ut = ts.derivative(order, 1, ht).components();
    let i0 = intensity.at(0);
    let ix = intensity.derivative(order, 1, hx);

    Ok([0, 1, 2].map(|m| ut[m] + uxxx[m] + 6.0 * i0 * ux[m] + 3.0 * u[m] * ix))
}

/// Residual of the three-component equation over a grid; the per-point value
/// is the largest component modulus.
pub fn pde_residual_tccss<F: FieldEvaluator + ?Sized>(
    f: &F,
    grid: &GridSpec,
    st: &StencilSpec,
) -> Result<ResidualReport, LaxError> {
    let values = try_map_ordered(&grid.points(), |&(x, t)| {
        pde_residual_at(f, x, t, st).map(|r| r.iter().map(|z| z.norm()).fold(0.0, f64::max))
    })?;
    Ok(ResidualReport::from_values("pde", grid.describe(), &values).note(stencil_note(st)))
}

pub(crate) fn stencil_note(st: &StencilSpec) -> String {
    format!("order {} central differences, hx = {}, ht = {}", st.order().value(), st.hx(), st.ht())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::Order;
    use crate::soliton::{one_soliton_closed_form, FieldSample, SolitonError, SpectrumConfig};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn fig3() -> SpectrumConfig {
        SpectrumConfig::type_two(vec![c(0.0, 1.0)], vec![[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]]).unwrap()
    }

    fn fig4() -> SpectrumConfig {
        SpectrumConfig::type_two(
            vec![c(0.0, 0.3), c(0.0, 0.5)],
            vec![[c(1.0, 0.0), c(1.0, 1.0), c(1.0, 1.0)], [c(0.0, 1.0), c(0.0, 0.5), c(0.0, 1.0)]],
        )
        .unwrap()
    }

    fn zero_field(_: f64, _: f64) -> Result<FieldSample, SolitonError> {
        Ok(FieldSample::ZERO)
    }

    #[test]
    fn zero_field_has_zero_residuals() {
        let st = StencilSpec::default();
        for l in [c(0.3, 0.0), c(1.1, 0.4), c(-2.0, 0.1)] {
            assert_eq!(zero_curvature_residual(&zero_field, l, 0.2, 0.1, &st).unwrap(), 0.0);
        }
        let grid = GridSpec::new(-1.0, 1.0, 5, 0.0, 1.0, 3).unwrap();
        assert_eq!(pde_residual_tccss(&zero_field, &grid, &st).unwrap().max_abs, 0.0);
    }

    #[test]
    fn one_soliton_zero_curvature() {
        let r = zero_curvature_residual(&fig3(), c(0.7, 0.2), 0.3, 0.1, &StencilSpec::default()).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn zero_curvature_holds_for_every_lambda() {
        let st = StencilSpec::default();
        for l in [c(0.3, 0.0), c(1.1, 0.4), c(-2.0, 0.1)] {
            let r = zero_curvature_residual(&fig4(), l, -1.3, 0.4, &st).unwrap();
            assert!(r < 1e-6, "λ = {l}: {r}");
        }
    }

    #[test]
    fn zero_curvature_convergence_order() {
        // at h = 1e-3 the residual is roundoff-limited, so compare coarser steps
        let cfg = fig3();
        for (order, lo, hi) in [(Order::Fourth, 10.0, 22.0), (Order::Second, 3.0, 5.5)] {
            let r = |h: f64| {
                zero_curvature_residual(&cfg, c(0.7, 0.2), 0.3, 0.1, &StencilSpec::uniform(h, order).unwrap()).unwrap()
            };
            let ratio = r(0.04) / r(0.02);
            assert!(ratio > lo && ratio < hi, "{order:?}: {ratio}");
        }
    }

    #[test]
    fn pde_residual_on_figure_grids() {
        let grid = GridSpec::new(-5.0, 5.0, 41, -0.5, 0.5, 11).unwrap();
        let st = StencilSpec::default();
        let r3 = pde_residual_tccss(&fig3(), &grid, &st).unwrap();
        assert!(r3.max_abs < 1e-5, "{r3:?}");
        let r4 = pde_residual_tccss(&fig4(), &grid, &st).unwrap();
        assert!(r4.max_abs < 1e-4, "{r4:?}");
        assert!(r3.rms <= r3.max_abs);
    }

    #[test]
    fn pde_residual_detects_non_solutions() {
        // a rescaled soliton is not a solution of the cubic equation
        let wrong = |x: f64, t: f64| {
            one_soliton_closed_form(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), 1.0, x, t).map(|s| s.scale(c(1.2, 0.0)))
        };
        let grid = GridSpec::new(-2.0, 2.0, 9, 0.0, 0.0, 1).unwrap();
        assert!(pde_residual_tccss(&wrong, &grid, &StencilSpec::default()).unwrap().max_abs > 1e-2);
        assert!(zero_curvature_residual(&wrong, c(0.5, 0.5), 0.1, 0.0, &StencilSpec::default()).unwrap() > 1e-2);
    }

    #[test]
    fn pde_convergence_order() {
        let cfg = fig4();
        let worst = |h: f64| {
            let st = StencilSpec::uniform(h, Order::Fourth).unwrap();
            [(-3.0, 0.2), (0.5, -0.3), (2.0, 0.1)]
                .iter()
                .map(|&(x, t)| pde_residual_at(&cfg, x, t, &st).unwrap().iter().map(|z| z.norm()).fold(0.0, f64::max))
                .fold(0.0, f64::max)
        };
        let ratio = worst(0.08) / worst(0.04);
        let slope = ratio.log2();
        assert!((slope - 4.0).abs() < 0.3, "slope {slope}");
    }
}
