use serde::Serialize;
use thiserror::Error;

use crate::algebra::C64;
use crate::lax::{gauge_transform_and_cnls_residual, pde_residual_tccss, zero_curvature_residual};
use crate::parallel::try_map_ordered;
use crate::report::ResidualReport;
use crate::rhp::check_symmetries;
use crate::scattering::{locate_zero_sampled, sweep_real_axis, SampledPotential};
use crate::soliton::{SpectrumConfig, VectorSeed};

use super::config::{Check, RunConfig};

pub const PDE_THRESHOLD: f64 = 1e-4;
pub const CNLS_THRESHOLD: f64 = 1e-4;
pub const ZERO_CURVATURE_THRESHOLD: f64 = 1e-6;
pub const RH_SYMMETRY_THRESHOLD: f64 = 1e-10;
pub const SCATTERING_ZERO_THRESHOLD: f64 = 1e-5;
pub const REFLECTION_THRESHOLD: f64 = 1e-6;
pub const DET_THRESHOLD: f64 = 1e-8;

/// Spectral parameters for the zero-curvature check.
pub const ZC_LAMBDAS: [(f64, f64); 3] = [(0.3, 0.0), (1.1, 0.4), (-2.0, 0.1)];
/// Real λ probed for reflection and det Ψ.
pub const REFLECTION_LAMBDAS: [f64; 3] = [0.3, 1.0, 2.0];
/// Off-axis samples for the RH identities (real samples are added on [−3, 3]).
pub const RH_COMPLEX_SAMPLES: [(f64, f64); 3] = [(1.0, 1.0), (0.5, 2.0), (-0.7, 0.3)];
pub const RH_REAL_SAMPLES: usize = 20;
/// Samples closer than this to a zero, its conjugate or mirror are dropped.
const POLE_CLEARANCE: f64 = 1e-3;

/// Sub-grid sizes for the pointwise checks.
const ZC_GRID: (usize, usize) = (9, 5);
const RH_GRID: (usize, usize) = (5, 3);

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{check} check failed to run: {message}")]
pub struct VerifyError {
    pub check: &'static str,
    pub message: String,
}

fn fail(check: Check) -> impl Fn(String) -> VerifyError {
    move |message| VerifyError { check: check.name(), message }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub threshold: f64,
    pub passed: bool,
    pub report: ResidualReport,
}

impl CheckOutcome {
    fn new(check: &'static str, threshold: f64, report: ResidualReport) -> Self {
        let passed = report.max_abs.is_finite() && report.max_abs < threshold;
        Self { check, threshold, passed, report }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub outcomes: Vec<CheckOutcome>,
}

/// Runs every requested check in fixed order. Success iff each report's
/// max_abs is below its threshold.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport, VerifyError> {
    let mut outcomes = Vec::new();
    for &check in cfg.checks() {
        match check {
            Check::Pde => {
                let r = pde_residual_tccss(cfg.spectrum(), cfg.grid(), cfg.stencil()).map_err(|e| fail(check)(e.to_string()))?;
                outcomes.push(CheckOutcome::new("pde", PDE_THRESHOLD, r));
            }
            Check::Cnls => {
                let r = gauge_transform_and_cnls_residual(cfg.spectrum(), cfg.grid(), cfg.stencil())
                    .map_err(|e| fail(check)(e.to_string()))?;
                outcomes.push(CheckOutcome::new("cnls", CNLS_THRESHOLD, r));
            }
            Check::ZeroCurvature => outcomes.push(zero_curvature_check(cfg)?),
            Check::RhSymmetry => outcomes.push(rh_check(cfg)?),
            Check::Scattering => outcomes.extend(scattering_check(cfg)?),
        }
    }
    Ok(VerifyReport {
        passed: outcomes.iter().all(|o| o.passed),
        outcomes,
    })
}

fn zero_curvature_check(cfg: &RunConfig) -> Result<CheckOutcome, VerifyError> {
    let sub = cfg.grid().capped(ZC_GRID.0, ZC_GRID.1);
    let lambdas: Vec<C64> = ZC_LAMBDAS.iter().map(|&(r, i)| C64::new(r, i)).collect();
    let jobs: Vec<(f64, f64, C64)> = sub
        .points()
        .into_iter()
        .flat_map(|(x, t)| lambdas.iter().map(move |&l| (x, t, l)))
        .collect();
    let values = try_map_ordered(&jobs, |&(x, t, l)| zero_curvature_residual(cfg.spectrum(), l, x, t, cfg.stencil()))
        .map_err(|e| fail(Check::ZeroCurvature)(e.to_string()))?;
    let report = ResidualReport::from_values("zero_curvature", sub.describe(), &values)
        .note(format!(
            "lambda in [{}] at every point",
            lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
        ));
    Ok(CheckOutcome::new("zero_curvature", ZERO_CURVATURE_THRESHOLD, report))
}

/// λ samples for the RH identities that stay clear of every pole.
pub fn rh_samples(spec: &SpectrumConfig) -> Vec<C64> {
    let zeros = spec.expanded_zeros();
    let real = (0..RH_REAL_SAMPLES).map(|k| C64::new(-3.0 + 6.0 * k as f64 / (RH_REAL_SAMPLES - 1) as f64, 0.0));
    let complex = RH_COMPLEX_SAMPLES.iter().map(|&(r, i)| C64::new(r, i));
    real.chain(complex)
        .filter(|l| {
            zeros.iter().all(|z| {
                [*z, z.conj(), -*z, -z.conj()]
                    .iter()
                    .all(|p| (l - p).norm() > POLE_CLEARANCE)
            })
        })
        .collect()
}

fn rh_check(cfg: &RunConfig) -> Result<CheckOutcome, VerifyError> {
    let sub = cfg.grid().capped(RH_GRID.0, RH_GRID.1);
    let samples = rh_samples(cfg.spectrum());
    let per_point = try_map_ordered(&sub.points(), |&(x, t)| check_symmetries(cfg.spectrum(), x, t, &samples))
        .map_err(|e| fail(Check::RhSymmetry)(e.to_string()))?;
    let values: Vec<f64> = per_point.iter().map(|r| r.max()).collect();
    let worst = per_point
        .iter()
        .max_by(|a, b| a.max().total_cmp(&b.max()))
        .expect("grid has at least one point");
    let report = ResidualReport::from_values("rh_symmetry", sub.describe(), &values)
        .note(format!("{} lambda samples (20 real on [-3, 3] plus off-axis)", samples.len()))
        .with_notes(worst.to_report("worst point", "").notes);
    Ok(CheckOutcome::new("rh_symmetry", RH_SYMMETRY_THRESHOLD, report))
}

fn is_degenerate(seed: &VectorSeed) -> bool {
    seed.full()[..6].iter().all(|z| *z == C64::new(0.0, 0.0))
}

/// Initial guess for the secant search: below λⱼ by a quarter of its
/// distance to the nearest other zero or to the real axis.
pub fn search_seed(zeros: &[C64], j: usize) -> C64 {
    let z = zeros[j];
    let d = zeros
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, w)| (z - w).norm())
        .fold(z.im, f64::min);
    z - C64::new(0.0, 0.25 * d)
}

fn scattering_check(cfg: &RunConfig) -> Result<Vec<CheckOutcome>, VerifyError> {
    let err = fail(Check::Scattering);
    let s = cfg.scattering();
    let grid_note = format!("t = {}, x in [{}, {}], {} RK4 steps", s.t, s.x_min, s.x_max, s.n_steps);
    let pot = SampledPotential::new(cfg.spectrum(), s.t, s.domain(), s.n_steps).map_err(|e| err(e.to_string()))?;

    let spec = cfg.spectrum();
    let zeros = spec.expanded_zeros();
    let n = spec.len();
    let mut errors = Vec::new();
    let mut notes = Vec::new();
    for (j, &z) in zeros.iter().enumerate() {
        if is_degenerate(&spec.seeds()[j % n]) {
            notes.push(format!("zero {j} ({z}): all-zero seed carries no eigenvalue, skipped"));
            continue;
        }
        let found = locate_zero_sampled(&pot, search_seed(&zeros, j)).map_err(|e| err(e.to_string()))?;
        errors.push((found - z).norm());
        notes.push(format!("zero {j}: constructed {z}, recovered {found}"));
    }
    let zero_report = ResidualReport::from_values("scattering_zeros", grid_note.clone(), &errors).with_notes(notes);

    let rows = sweep_real_axis(&pot, &REFLECTION_LAMBDAS).map_err(|e| err(e.to_string()))?;
    let refl: Vec<f64> = rows.iter().map(|r| r.max_abs_omega_k7).collect();
    let dets: Vec<f64> = rows.iter().map(|r| r.det_deviation).collect();
    let lam_note = format!("real lambda in {REFLECTION_LAMBDAS:?}");
    Ok(vec![
        CheckOutcome::new("scattering_zeros", SCATTERING_ZERO_THRESHOLD, zero_report),
        CheckOutcome::new(
            "scattering_reflection",
            REFLECTION_THRESHOLD,
            ResidualReport::from_values("scattering_reflection", grid_note.clone(), &refl).note(lam_note.clone()),
        ),
        CheckOutcome::new(
            "scattering_det",
            DET_THRESHOLD,
            ResidualReport::from_values("scattering_det", grid_note, &dets).note(lam_note),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_seed_spectrum_passes_everything() {
        let spec = SpectrumConfig::type_two(vec![c(0.0, 1.0)], vec![[c(0.0, 0.0); 3]]).unwrap();
        let grid = GridSpec::new(-2.0, 2.0, 5, 0.0, 0.5, 2).unwrap();
        let cfg = RunConfig::new(spec, grid).unwrap().with_checks(Check::ALL);
        let r = run_verify(&cfg).unwrap();
        assert!(r.passed);
        assert!(r.outcomes.iter().all(|o| o.report.max_abs < 1e-15), "{r:#?}");
        assert_eq!(r.outcomes.len(), 7);
    }

    #[test]
    fn figure_three_passes_with_margins() {
        let spec =
            SpectrumConfig::type_two(vec![c(0.0, 1.0)], vec![[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]]).unwrap();
        let grid = GridSpec::new(-5.0, 5.0, 41, -0.5, 0.5, 11).unwrap();
        let cfg = RunConfig::new(spec, grid)
            .unwrap()
            .with_checks([Check::Pde, Check::ZeroCurvature, Check::RhSymmetry, Check::Scattering]);
        let r = run_verify(&cfg).unwrap();
        assert!(r.passed, "{r:#?}");
        let get = |name: &str| r.outcomes.iter().find(|o| o.check == name).unwrap().report.max_abs;
        assert!(get("pde") < 1e-5);
        assert!(get("zero_curvature") < 1e-6);
        assert!(get("rh_symmetry") < 1e-10);
        assert!(get("scattering_zeros") < 1e-5);
    }

    #[test]
    fn search_seeds_stay_between_zeros() {
        let z = [c(0.0, 0.3), c(0.0, 0.5)];
        assert!((search_seed(&z, 0) - c(0.0, 0.25)).norm() < 1e-15);
        assert!((search_seed(&z, 1) - c(0.0, 0.45)).norm() < 1e-15);
    }

    #[test]
    fn samples_avoid_poles() {
        let spec = SpectrumConfig::type_one(vec![c(1.0, 1.0)], vec![[c(1.0, 0.0); 6]]).unwrap();
        let s = rh_samples(&spec);
        assert!(!s.contains(&c(1.0, 1.0)));
        assert_eq!(s.len(), RH_REAL_SAMPLES + RH_COMPLEX_SAMPLES.len() - 1);
    }
}
