use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::C64;
use crate::soliton::FieldSample;

/// Largest step accepted by [`StencilSpec`].
pub const MAX_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StencilError {
    #[error("{name} must be in (0, {MAX_STEP}], got {value}")]
    Step { name: &'static str, value: f64 },
    #[error("stencil order must be 2 or 4, got {0}")]
    Order(u8),
}

/// Accuracy order of the central differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Order {
    Second,
    #[default]
    Fourth,
}

impl Order {
    pub fn value(self) -> u8 {
        match self {
            Order::Second => 2,
            Order::Fourth => 4,
        }
    }

    /// Widest offset any of the three derivative stencils touches.
    pub fn reach(self) -> usize {
        match self {
            Order::Second => 2,
            Order::Fourth => 3,
        }
    }

    /// (offset, weight) pairs for the `deriv`-th derivative, before dividing
    /// by h^deriv.
    pub fn weights(self, deriv: u8) -> &'static [(i32, f64)] {
        match (self, deriv) {
            (Order::Second, 1) => &[(-1, -0.5), (1, 0.5)],
            (Order::Second, 2) => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
            (Order::Second, 3) => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
            (Order::Fourth, 1) => &[
                (-2, 1.0 / 12.0),
                (-1, -8.0 / 12.0),
                (1, 8.0 / 12.0),
                (2, -1.0 / 12.0),
            ],
            (Order::Fourth, 2) => &[
                (-2, -1.0 / 12.0),
                (-1, 16.0 / 12.0),
                (0, -30.0 / 12.0),
                (1, 16.0 / 12.0),
                (2, -1.0 / 12.0),
            ],
            (Order::Fourth, 3) => &[
                (-3, 1.0 / 8.0),
                (-2, -1.0),
                (-1, 13.0 / 8.0),
                (1, -13.0 / 8.0),
                (2, 1.0),
                (3, -1.0 / 8.0),
            ],
            _ => panic!("no stencil for derivative {deriv}"),
        }
    }
}

impl TryFrom<u8> for Order {
    type Error = StencilError;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            2 => Ok(Order::Second),
            4 => Ok(Order::Fourth),
            other => Err(StencilError::Order(other)),
        }
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o.value()
    }
}

/// Central-difference steps and order. The default (h = 10⁻³, order 4)
/// keeps truncation near h⁴ ≈ 10⁻¹² while roundoff in the third derivative
/// stays near 10⁻¹⁶/h³ = 10⁻⁷.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStencil", into = "RawStencil")]
pub struct StencilSpec {
    hx: f64,
    ht: f64,
    order: Order,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStencil {
    hx: f64,
    ht: f64,
    #[serde(default)]
    order: Order,
}

impl TryFrom<RawStencil> for StencilSpec {
    type Error = StencilError;

    fn try_from(r: RawStencil) -> Result<Self, Self::Error> {
        StencilSpec::new(r.hx, r.ht, r.order)
    }
}

impl From<StencilSpec> for RawStencil {
    fn from(s: StencilSpec) -> Self {
        RawStencil { hx: s.hx, ht: s.ht, order: s.order }
    }
}

impl Default for StencilSpec {
    fn default() -> Self {
        Self { hx: 1e-3, ht: 1e-3, order: Order::Fourth }
    }
}

fn check_step(name: &'static str, value: f64) -> Result<(), StencilError> {
    if value > 0.0 && value <= MAX_STEP {
        Ok(())
    } else {
        Err(StencilError::Step { name, value })
    }
}

impl StencilSpec {
    pub fn new(hx: f64, ht: f64, order: Order) -> Result<Self, StencilError> {
        check_step("hx", hx)?;
        check_step("ht", ht)?;
        Ok(Self { hx, ht, order })
    }

    /// Same step in x and t.
    pub fn uniform(h: f64, order: Order) -> Result<Self, StencilError> {
        Self::new(h, h, order)
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn ht(&self) -> f64 {
        self.ht
    }

    pub fn order(&self) -> Order {
        self.order
    }
}

/// Samples at integer offsets −reach..=reach around a centre point, with
/// derivative evaluation by the stencil weights.
pub(crate) struct Line<T> {
    reach: usize,
    values: Vec<T>,
}

impl<T: Copy> Line<T> {
    pub fn sample<E>(reach: usize, mut f: impl FnMut(i32) -> Result<T, E>) -> Result<Self, E> {
        let r = reach as i32;
        let values = (-r..=r).map(&mut f).collect::<Result<Vec<_>, E>>()?;
        Ok(Self { reach, values })
    }

    pub fn at(&self, offset: i32) -> T {
        self.values[(offset + self.reach as i32) as usize]
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Line<U> {
        Line {
            reach: self.reach,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Line<FieldSample> {
    pub fn derivative(&self, order: Order, deriv: u8, h: f64) -> FieldSample {
        let mut acc = [C64::new(0.0, 0.0); 3];
        for &(k, w) in order.weights(deriv) {
            for (a, z) in acc.iter_mut().zip(self.at(k).components()) {
                *a += z * w;
            }
        }
        let scale = h.powi(deriv as i32);
        FieldSample::from_array(acc.map(|z| z / scale))
    }
}

impl Line<f64> {
    pub fn derivative(&self, order: Order, deriv: u8, h: f64) -> f64 {
        let s: f64 = order.weights(deriv).iter().map(|&(k, w)| w * self.at(k)).sum();
        s / h.powi(deriv as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_bounds() {
        assert!(StencilSpec::new(0.0, 1e-3, Order::Fourth).is_err());
        assert!(StencilSpec::new(1e-3, 0.2, Order::Fourth).is_err());
        assert!(StencilSpec::new(f64::NAN, 1e-3, Order::Second).is_err());
        assert!(StencilSpec::new(0.1, 0.1, Order::Second).is_ok());
        assert_eq!(StencilSpec::default().order(), Order::Fourth);
    }

    #[test]
    fn weights_are_exact_on_polynomials() {
        // the order-p stencil for the d-th derivative is exact on degree < p + d
        for order in [Order::Second, Order::Fourth] {
            for d in 1..=3u8 {
                let deg = order.value() + d - 1;
                let line = Line::sample::<()>(order.reach(), |k| Ok((k as f64 + 0.3).powi(deg as i32))).unwrap();
                let exact: f64 = (0..d).map(|i| (deg - i) as f64).product::<f64>() * 0.3f64.powi((deg - d) as i32);
                assert!((line.derivative(order, d, 1.0) - exact).abs() < 1e-10, "{order:?} d={d}");
            }
        }
    }

    #[test]
    fn order_serializes_as_integer() {
        let s = serde_json::to_string(&StencilSpec::default()).unwrap();
        assert_eq!(s, r#"{"hx":0.001,"ht":0.001,"order":4}"#);
        assert!(serde_json::from_str::<StencilSpec>(r#"{"hx":0.001,"ht":0.001,"order":3}"#).is_err());
        assert!(serde_json::from_str::<StencilSpec>(r#"{"hx":1.0,"ht":0.001}"#).is_err());
    }
}
