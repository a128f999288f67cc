//! Direct scattering for a sampled potential.
//!
//! Integrates Ψ_x = iλ[σ₃, Ψ] + QΨ with classical RK4 on a fixed grid and
//! reads off Ω = e^{−iλσ₃x_max} Ψ₋(x_max) e^{iλσ₃x_max}. For λ ∈ ℂ⁺ only the
//! seventh column of Ψ₋ stays bounded, and only Ω₇₇ is meaningful there.
//! Zeros of Ω₇₇ in ℂ⁺ are the discrete eigenvalues.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{ComplexMatrix, C64};
use crate::lax::FieldEvaluator;
use crate::parallel::try_map_ordered;
use crate::report::ResidualReport;
use crate::soliton::SolitonError;
use crate::structure::{DIM, SIGMA3_DIAG};

/// Field modulus allowed at the integration endpoints.
pub const DECAY_TOL: f64 = 1e-10;
pub const MIN_STEPS: usize = 100;
pub const DEFAULT_DOMAIN: Domain = Domain { x_min: -40.0, x_max: 40.0 };
pub const DEFAULT_STEPS: usize = 16000;

/// Secant stopping rules and iteration cap.
pub const ZERO_TOL: f64 = 1e-8;
pub const STEP_TOL: f64 = 1e-10;
pub const MAX_ITER: usize = 50;
/// A tiny secant step only counts as convergence if |Ω₇₇| is below this.
pub const STALL_TOL: f64 = 1e-6;
/// Below this |Ωₖ₇(t₀)| the off-diagonal evolution check is vacuous.
pub const VACUOUS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error("field evaluation failed at x = {x}: {source}")]
    Field {
        x: f64,
        #[source]
        source: SolitonError,
    },
    #[error("potential has not decayed at x = {x}: max |u| = {modulus:e} (need < {DECAY_TOL:e}); enlarge the domain")]
    DomainTooSmall { x: f64, modulus: f64 },
    #[error("domain needs x_min < x_max, got [{0}, {1}]")]
    BadDomain(f64, f64),
    #[error("need at least {MIN_STEPS} steps, got {0}")]
    TooFewSteps(usize),
    #[error("λ = {0} lies in the lower half-plane; only Im λ ≥ 0 is supported")]
    UnsupportedHalfPlane(C64),
    #[error("zero search from {seed} failed: {reason} ({} iterates)", trace.len())]
    SearchFailed {
        seed: C64,
        reason: String,
        trace: Vec<SearchStep>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
}

impl Default for Domain {
    fn default() -> Self {
        DEFAULT_DOMAIN
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Ψ₊ → 𝕀 as x → +∞; integrated from x_max down to x_min.
    Plus,
    /// Ψ₋ → 𝕀 as x → −∞; integrated from x_min up to x_max.
    Minus,
}

type Mat7 = [[C64; DIM]; DIM];
type Col7 = [C64; DIM];

const ZERO: C64 = C64::new(0.0, 0.0);

fn identity7() -> Mat7 {
    let mut m = [[ZERO; DIM]; DIM];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

/// The field at the RK4 nodes x_min + k·h/2, k = 0..=2n, at a fixed time.
/// Independent of λ, so one sampling serves a whole λ search or sweep.
#[derive(Debug, Clone)]
pub struct SampledPotential {
    domain: Domain,
    n_steps: usize,
    t: f64,
    nodes: Vec<[C64; 3]>,
}

impl SampledPotential {
    pub fn new<F: FieldEvaluator + ?Sized>(
        f: &F,
        t: f64,
        domain: Domain,
        n_steps: usize,
    ) -> Result<Self, ScatteringError> {
        if !(domain.x_min < domain.x_max) || !domain.x_min.is_finite() || !domain.x_max.is_finite() {
            return Err(ScatteringError::BadDomain(domain.x_min, domain.x_max));
        }
        if n_steps < MIN_STEPS {
            return Err(ScatteringError::TooFewSteps(n_steps));
        }
        let half = (domain.x_max - domain.x_min) / (2 * n_steps) as f64;
        let xs: Vec<f64> = (0..=2 * n_steps).map(|k| domain.x_min + k as f64 * half).collect();
        let nodes = try_map_ordered(&xs, |&x| {
            f.sample(x, t)
                .map(|s| s.components())
                .map_err(|source| ScatteringError::Field { x, source })
        })?;
        for (x, u) in [(domain.x_min, nodes[0]), (domain.x_max, nodes[2 * n_steps])] {
            let modulus = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !(modulus < DECAY_TOL) {
                return Err(ScatteringError::DomainTooSmall { x, modulus });
            }
        }
        Ok(Self { domain, n_steps, t, nodes })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn step(&self) -> f64 {
        (self.domain.x_max - self.domain.x_min) / self.n_steps as f64
    }

    fn x(&self, i: usize) -> f64 {
        self.domain.x_min + i as f64 * self.step()
    }

    /// Σ h·‖Q‖_F over the grid (trapezoid), a Grönwall-type growth exponent.
    pub fn q_mass(&self) -> f64 {
        let h = self.step() / 2.0;
        let norm = |u: &[C64; 3]| 2.0 * u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n = self.nodes.len();
        self.nodes
            .iter()
            .enumerate()
            .map(|(k, u)| if k == 0 || k == n - 1 { 0.5 * norm(u) } else { norm(u) })
            .sum::<f64>()
            * h
    }
}

/// Ψ_x = iλ[σ₃, Ψ] + QΨ for the full matrix; Q has nonzeros only in row and
/// column 7.
fn rhs_full(lambda: C64, u: &[C64; 3], psi: &Mat7) -> Mat7 {
    let il = C64::i() * lambda;
    let mut q_col = [ZERO; DIM - 1];
    let mut q_row = [ZERO; DIM - 1];
    for m in 0..3 {
        q_col[2 * m] = u[m];
        q_col[2 * m + 1] = u[m].conj();
        q_row[2 * m] = -u[m].conj();
        q_row[2 * m + 1] = -u[m];
    }
    let mut out = [[ZERO; DIM]; DIM];
    for b in 0..DIM {
        let mut last = ZERO;
        for c in 0..DIM - 1 {
            last += q_row[c] * psi[c][b];
        }
        out[DIM - 1][b] = last + il * (SIGMA3_DIAG[DIM - 1] - SIGMA3_DIAG[b]) * psi[DIM - 1][b];
        for a in 0..DIM - 1 {
            out[a][b] = q_col[a] * psi[DIM - 1][b] + il * (SIGMA3_DIAG[a] - SIGMA3_DIAG[b]) * psi[a][b];
        }
    }
    out
}

/// Same equation restricted to the seventh column.
fn rhs_col7(lambda: C64, u: &[C64; 3], psi: &Col7) -> Col7 {
    let two_il = 2.0 * C64::i() * lambda;
    let mut out = [ZERO; DIM];
    let mut last = ZERO;
    for m in 0..3 {
        out[2 * m] = u[m] * psi[DIM - 1] + two_il * psi[2 * m];
        out[2 * m + 1] = u[m].conj() * psi[DIM - 1] + two_il * psi[2 * m + 1];
        last -= u[m].conj() * psi[2 * m] + u[m] * psi[2 * m + 1];
    }
    out[DIM - 1] = last;
    out
}

trait State: Copy {
    fn axpy(&self, h: f64, k: &Self) -> Self;
    fn rk4_combine(&self, h: f64, k: [&Self; 4]) -> Self;
}

impl State for Col7 {
    fn axpy(&self, h: f64, k: &Self) -> Self {
        std::array::from_fn(|i| self[i] + k[i] * h)
    }

    fn rk4_combine(&self, h: f64, [k1, k2, k3, k4]: [&Self; 4]) -> Self {
        std::array::from_fn(|i| self[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
    }
}

impl State for Mat7 {
    fn axpy(&self, h: f64, k: &Self) -> Self {
        std::array::from_fn(|i| self[i].axpy(h, &k[i]))
    }

    fn rk4_combine(&self, h: f64, [k1, k2, k3, k4]: [&Self; 4]) -> Self {
        std::array::from_fn(|i| self[i].rk4_combine(h, [&k1[i], &k2[i], &k3[i], &k4[i]]))
    }
}

/// One classical RK4 step between nodes 2i and 2i ± 2 (sign from `h`).
fn rk4<S: State>(rhs: impl Fn(&[C64; 3], &S) -> S, nodes: [&[C64; 3]; 3], h: f64, y: &S) -> S {
    let k1 = rhs(nodes[0], y);
    let k2 = rhs(nodes[1], &y.axpy(h / 2.0, &k1));
    let k3 = rhs(nodes[1], &y.axpy(h / 2.0, &k2));
    let k4 = rhs(nodes[2], &y.axpy(h, &k3));
    y.rk4_combine(h, [&k1, &k2, &k3, &k4])
}

fn march<S: State>(pot: &SampledPotential, side: Side, y0: S, rhs: impl Fn(&[C64; 3], &S) -> S, mut visit: impl FnMut(usize, &S)) -> S {
    let n = pot.n_steps;
    let h = pot.step();
    let mut y = y0;
    match side {
        Side::Minus => {
            visit(0, &y);
            for i in 0..n {
                let nd = [&pot.nodes[2 * i], &pot.nodes[2 * i + 1], &pot.nodes[2 * i + 2]];
                y = rk4(&rhs, nd, h, &y);
                visit(i + 1, &y);
            }
        }
        Side::Plus => {
            visit(n, &y);
            for i in (0..n).rev() {
                let nd = [&pot.nodes[2 * i + 2], &pot.nodes[2 * i + 1], &pot.nodes[2 * i]];
                y = rk4(&rhs, nd, -h, &y);
                visit(i, &y);
            }
        }
    }
    y
}

fn det7(m: &Mat7) -> C64 {
    to_matrix(m).map_or(C64::new(f64::NAN, f64::NAN), |m| crate::algebra::det(&m).unwrap_or(ZERO))
}

fn to_matrix(m: &Mat7) -> Option<ComplexMatrix> {
    ComplexMatrix::new(DIM, DIM, m.iter().flatten().copied().collect()).ok()
}

/// Ψ± sampled at every grid point, x ascending.
#[derive(Debug, Clone)]
pub struct JostSolution {
    pub lambda: C64,
    pub domain: Domain,
    pub side: Side,
    xs: Vec<f64>,
    values: Vec<Mat7>,
}

impl JostSolution {
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Ψ at grid index i, or `None` if it has overflowed.
    pub fn value(&self, i: usize) -> Option<ComplexMatrix> {
        to_matrix(&self.values[i])
    }

    /// Value at the far end of the integration (x_max for Ψ₋, x_min for Ψ₊).
    pub fn end_value(&self) -> Option<ComplexMatrix> {
        match self.side {
            Side::Minus => self.value(self.len() - 1),
            Side::Plus => self.value(0),
        }
    }

    /// max over the path of |det Ψ − 1|.
    pub fn max_det_deviation(&self) -> f64 {
        self.values.iter().map(|m| (det7(m) - 1.0).norm()).fold(0.0, f64::max)
    }

    /// max over the path of ‖Ψ†Ψ − 𝕀‖_max (zero for real λ).
    pub fn max_unitarity_deviation(&self) -> f64 {
        self.values
            .iter()
            .filter_map(to_matrix)
            .map(|m| (&(&m.adjoint() * &m) - &ComplexMatrix::identity(DIM)).max_abs())
            .fold(0.0, f64::max)
    }

    /// Largest column 2-norm along the path.
    pub fn max_column_norm(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|m| (0..DIM).map(move |b| (0..DIM).map(|a| m[a][b].norm_sqr()).sum::<f64>().sqrt()))
            .fold(0.0, f64::max)
    }
}

/// Integrates the full 7×7 Jost matrix from the side's endpoint.
pub fn integrate_jost<F: FieldEvaluator + ?Sized>(
    f: &F,
    t: f64,
    lambda: C64,
    domain: Domain,
    n_steps: usize,
    side: Side,
) -> Result<JostSolution, ScatteringError> {
    let pot = SampledPotential::new(f, t, domain, n_steps)?;
    Ok(integrate_sampled(&pot, lambda, side))
}

pub fn integrate_sampled(pot: &SampledPotential, lambda: C64, side: Side) -> JostSolution {
    let n = pot.n_steps;
    let mut values = vec![[[ZERO; DIM]; DIM]; n + 1];
    march(pot, side, identity7(), |u, y| rhs_full(lambda, u, y), |i, y| values[i] = *y);
    JostSolution {
        lambda,
        domain: pot.domain,
        side,
        xs: (0..=n).map(|i| pot.x(i)).collect(),
        values,
    }
}

/// Seventh column of Ψ₋ at x_max.
fn psi_minus_col7(pot: &SampledPotential, lambda: C64) -> Col7 {
    let mut e7 = [ZERO; DIM];
    e7[DIM - 1] = C64::new(1.0, 0.0);
    march(pot, Side::Minus, e7, |u, y| rhs_col7(lambda, u, y), |_, _| {})
}

/// Ω₇₇(λ) for Im λ ≥ 0 from the seventh column of Ψ₋ alone.
pub fn omega77_sampled(pot: &SampledPotential, lambda: C64) -> Result<C64, ScatteringError> {
    if lambda.im < 0.0 {
        return Err(ScatteringError::UnsupportedHalfPlane(lambda));
    }
    Ok(psi_minus_col7(pot, lambda)[DIM - 1])
}

pub fn omega77<F: FieldEvaluator + ?Sized>(
    f: &F,
    t: f64,
    lambda: C64,
    domain: Domain,
    n_steps: usize,
) -> Result<C64, ScatteringError> {
    if lambda.im < 0.0 {
        return Err(ScatteringError::UnsupportedHalfPlane(lambda));
    }
    omega77_sampled(&SampledPotential::new(f, t, domain, n_steps)?, lambda)
}

/// Ω together with integration diagnostics.
#[derive(Debug, Clone)]
pub struct ScatteringMatrix {
    pub lambda: C64,
    /// `None` where entries overflowed (possible off the real axis).
    pub omega: Option<ComplexMatrix>,
    /// Off the real axis only Ω₇₇ is meaningful; every other entry is flagged.
    pub only_omega77: bool,
    pub omega77: C64,
    pub max_det_deviation: f64,
    pub unitarity_deviation: Option<f64>,
}

impl ScatteringMatrix {
    /// max_k |Ωₖ₇|, k = 1..6: reflection-type entries, zero for solitons.
    pub fn max_reflection(&self) -> Option<f64> {
        if self.only_omega77 {
            return None;
        }
        let om = self.omega.as_ref()?;
        Some((0..DIM - 1).map(|k| om[(k, DIM - 1)].norm()).fold(0.0, f64::max))
    }
}

pub fn scattering_matrix<F: FieldEvaluator + ?Sized>(
    f: &F,
    t: f64,
    lambda: C64,
    domain: Domain,
    n_steps: usize,
) -> Result<ScatteringMatrix, ScatteringError> {
    let pot = SampledPotential::new(f, t, domain, n_steps)?;
    scattering_matrix_sampled(&pot, lambda)
}

pub fn scattering_matrix_sampled(pot: &SampledPotential, lambda: C64) -> Result<ScatteringMatrix, ScatteringError> {
    if lambda.im < 0.0 {
        return Err(ScatteringError::UnsupportedHalfPlane(lambda));
    }
    let jost = integrate_sampled(pot, lambda, Side::Minus);
    let end = jost.values[jost.len() - 1];
    let x = pot.domain.x_max;
    // Ψ₊(x_max) = 𝕀, so Ω is Ψ₋(x_max) conjugated by e^{iλσ₃x_max}
    let phase = |s: f64| (C64::i() * lambda * s * x).exp();
    let conjugated: Mat7 = std::array::from_fn(|a| {
        std::array::from_fn(|b| phase(-SIGMA3_DIAG[a]) * end[a][b] * phase(SIGMA3_DIAG[b]))
    });
    let real = lambda.im == 0.0;
    Ok(ScatteringMatrix {
        lambda,
        omega: to_matrix(&conjugated),
        only_omega77: !real,
        omega77: end[DIM - 1][DIM - 1],
        max_det_deviation: jost.max_det_deviation(),
        unitarity_deviation: real.then(|| jost.max_unitarity_deviation()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchStep {
    pub lambda: C64,
    pub omega77_abs: f64,
}

/// Secant iteration on Ω₇₇ from `seed` ∈ ℂ⁺.
pub fn locate_spectral_zero<F: FieldEvaluator + ?Sized>(
    f: &F,
    t: f64,
    seed: C64,
    domain: Domain,
    n_steps: usize,
) -> Result<C64, ScatteringError> {
    let pot = SampledPotential::new(f, t, domain, n_steps)?;
    locate_zero_sampled(&pot, seed)
}

pub fn locate_zero_sampled(pot: &SampledPotential, seed: C64) -> Result<C64, ScatteringError> {
    if seed.im <= 0.0 {
        return Err(ScatteringError::UnsupportedHalfPlane(seed));
    }
    let mut trace = Vec::new();
    let fail = |reason: &str, trace: Vec<SearchStep>| ScatteringError::SearchFailed {
        seed,
        reason: reason.to_string(),
        trace,
    };
    let eval = |l: C64, trace: &mut Vec<SearchStep>| {
        let w = psi_minus_col7(pot, l)[DIM - 1];
        trace.push(SearchStep { lambda: l, omega77_abs: w.norm() });
        w
    };

    let mut a = seed;
    let mut fa = eval(a, &mut trace);
    if fa.norm() < ZERO_TOL {
        return Ok(a);
    }
    let mut b = seed + C64::new(0.0, 1e-3 * seed.norm().max(0.1));
    let mut fb = eval(b, &mut trace);
    for _ in 0..MAX_ITER {
        if fb.norm() < ZERO_TOL {
            return Ok(b);
        }
        let denom = fb - fa;
        let step = -fb * (b - a) / denom;
        if !step.is_finite() {
            return Err(fail("secant slope vanished", trace));
        }
        let next = b + step;
        if next.im <= 0.0 || !next.is_finite() {
            return Err(fail("iterate left the upper half-plane", trace));
        }
        (a, fa) = (b, fb);
        b = next;
        fb = eval(b, &mut trace);
        if step.norm() < STEP_TOL {
            if fb.norm() < STALL_TOL {
                return Ok(b);
            }
            return Err(fail("secant stalled away from a zero", trace));
        }
    }
    if fb.norm() < ZERO_TOL {
        return Ok(b);
    }
    Err(fail("iteration limit reached", trace))
}

/// Compares Ω(λ; t₁) with Ω(λ; t₀) under Ωₖ₇ ↦ e^{8iλ³(t₁−t₀)}Ωₖ₇ and
/// Ω₇₇ ↦ Ω₇₇, for real λ.
pub fn scattering_evolution_check<F: FieldEvaluator + ?Sized>(
    f: &F,
    lambda: f64,
    t0: f64,
    t1: f64,
    domain: Domain,
    n_steps: usize,
) -> Result<ResidualReport, ScatteringError> {
    let l = C64::new(lambda, 0.0);
    let om = |t: f64| -> Result<ComplexMatrix, ScatteringError> {
        let pot = SampledPotential::new(f, t, domain, n_steps)?;
        let s = scattering_matrix_sampled(&pot, l)?;
        Ok(s.omega.expect("real λ keeps Ψ₋ bounded"))
    };
    let (a, b) = (om(t0)?, om(t1)?);
    let rot = (C64::i() * 8.0 * lambda.powi(3) * (t1 - t0)).exp();
    let mut values: Vec<f64> = (0..DIM - 1)
        .map(|k| (b[(k, DIM - 1)] - rot * a[(k, DIM - 1)]).norm())
        .collect();
    values.push((b[(DIM - 1, DIM - 1)] - a[(DIM - 1, DIM - 1)]).norm());
    let diag = values[DIM - 1];
    let mut report = ResidualReport::from_values(
        "scattering_evolution",
        format!("λ = {lambda}, t ∈ {{{t0}, {t1}}}, x ∈ [{}, {}], {n_steps} steps", domain.x_min, domain.x_max),
        &values,
    )
    .note(format!("omega77 invariance residual {diag:e}"));
    let largest = (0..DIM - 1).map(|k| a[(k, DIM - 1)].norm()).fold(0.0, f64::max);
    if largest < VACUOUS_TOL {
        report = report.note(format!("vacuous: off-diagonal entries below {VACUOUS_TOL:e} (max {largest:e})"));
    }
    Ok(report)
}

/// One row of a real-axis sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub abs_omega77: f64,
    pub max_abs_omega_k7: f64,
    pub det_deviation: f64,
}

/// Ω on each real λ, in input order.
pub fn sweep_real_axis(pot: &SampledPotential, lambdas: &[f64]) -> Result<Vec<SweepRow>, ScatteringError> {
    try_map_ordered(lambdas, |&l| {
        let s = scattering_matrix_sampled(pot, C64::new(l, 0.0))?;
        Ok(SweepRow {
            lambda: l,
            abs_omega77: s.omega77.norm(),
            max_abs_omega_k7: s.max_reflection().unwrap_or(f64::NAN),
            det_deviation: s.max_det_deviation,
        })
    })
}
