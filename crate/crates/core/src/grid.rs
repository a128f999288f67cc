use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs x_min < x_max (got {0} .. {1})")]
    XRange(f64, f64),
    #[error("grid needs t_min <= t_max (got {0} .. {1})")]
    TRange(f64, f64),
    #[error("grid needs nx >= 2 and nt >= 1 (got nx = {nx}, nt = {nt})")]
    Counts { nx: usize, nt: usize },
    #[error("grid with nt = 1 needs t_min = t_max")]
    SingleTime,
    #[error("grid bounds must be finite")]
    NonFinite,
}

/// Uniform rectangular (x, t) grid. With `nt = 1` the single time is `t_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_min: f64, t_max: f64, nt: usize) -> Result<Self, GridError> {
        let g = Self { x_min, x_max, nx, t_min, t_max, nt };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if ![self.x_min, self.x_max, self.t_min, self.t_max].iter().all(|v| v.is_finite()) {
            return Err(GridError::NonFinite);
        }
        if self.x_min >= self.x_max {
            return Err(GridError::XRange(self.x_min, self.x_max));
        }
        if self.t_min > self.t_max {
            return Err(GridError::TRange(self.t_min, self.t_max));
        }
        if self.nx < 2 || self.nt < 1 {
            return Err(GridError::Counts { nx: self.nx, nt: self.nt });
        }
        if self.nt == 1 && self.t_min != self.t_max {
            return Err(GridError::SingleTime);
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        if self.nt == 1 {
            self.t_min
        } else {
            self.t_min + (self.t_max - self.t_min) * k as f64 / (self.nt - 1) as f64
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in t-major order (all x for the first t, then the next t).
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.nt)
            .flat_map(|k| (0..self.nx).map(move |i| (self.x(i), self.t(k))))
            .collect()
    }

    /// A coarser grid with the same extents and at most `nx` × `nt` points.
    pub fn capped(&self, nx: usize, nt: usize) -> Self {
        Self {
            nx: self.nx.min(nx.max(2)),
            nt: if self.nt == 1 { 1 } else { self.nt.min(nt.max(2)) },
            ..*self
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "x in [{}, {}] ({} pts) x t in [{}, {}] ({} pts)",
            self.x_min, self.x_max, self.nx, self.t_min, self.t_max, self.nt
        )
    }
}
