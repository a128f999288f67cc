use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::scattering::{sweep_real_axis, SampledPotential, SweepRow};

use super::config::RunConfig;
use super::export::write_text;
use super::IoError;

pub const SWEEP_HEADER: &str = "lambda,abs_omega77,max_abs_omega_k7,det_deviation";

/// `a:b:n`, n equally spaced points from a to b inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl LambdaRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|k| self.start + (self.end - self.start) * k as f64 / (self.count - 1) as f64)
            .collect()
    }
}

impl FromStr for LambdaRange {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IoError::LambdaRange(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        let start: f64 = a.trim().parse().map_err(|_| bad())?;
        let end: f64 = b.trim().parse().map_err(|_| bad())?;
        let count: usize = n.trim().parse().map_err(|_| bad())?;
        if !start.is_finite() || !end.is_finite() || start > end || count == 0 {
            return Err(bad());
        }
        Ok(Self { start, end, count })
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r.lambda, r.abs_omega77, r.max_abs_omega_k7, r.det_deviation
        )
        .expect("writing to a String");
    }
    out
}

/// Sweeps real λ at the configured scattering time and domain and writes
/// |Ω₇₇|, max |Ωₖ₇| and |det Ψ − 1| per λ.
pub fn run_scatter(cfg: &RunConfig, range: LambdaRange, out: &Path) -> Result<Vec<SweepRow>, IoError> {
    let s = cfg.scattering();
    let pot = SampledPotential::new(cfg.spectrum(), s.t, s.domain(), s.n_steps)?;
    let rows = sweep_real_axis(&pot, &range.values())?;
    write_text(out, &sweep_csv(&rows))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges() {
        let r: LambdaRange = "-1:1:5".parse().unwrap();
        assert_eq!(r.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!("0.3:0.3:1".parse::<LambdaRange>().unwrap().values(), vec![0.3]);
        for bad in ["1:0:3", "0:1", "0:1:0", "a:1:2", "0:1:2:3", "0:inf:2"] {
            assert!(bad.parse::<LambdaRange>().is_err(), "{bad}");
        }
    }
}
