use crate::algebra::{dot, ComplexMatrix, C64};
use crate::structure::{apply_sigma, DIM};

use super::spectrum::{Family, SpectrumConfig};
use super::theta;

/// Whether each kernel vector is divided by its largest component modulus.
///
/// The Gram matrix mixes e^{+2Re θ} and e^{−2Re θ}; without the common scale
/// those terms overflow once |Re θ| reaches a few hundred. Scaling vⱼ and v̂ⱼ
/// by the same positive factor sⱼ turns M into S·M̃·S and every residue sum
/// Σ vₖ v̂ⱼ (M⁻¹)ₖⱼ is unchanged, so the factors never need compensating.
/// Using the largest component (rather than e^{|Re θ|}) also keeps M̃ well
/// scaled when some seeds vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stabilization {
    #[default]
    On,
    Off,
}

/// Kernel vectors vⱼ (columns) and v̂ⱼ (rows) at a fixed (x, t), one per zero
/// of the expanded spectrum.
#[derive(Debug, Clone)]
pub struct KernelVectorSet {
    zeros: Vec<C64>,
    columns: Vec<[C64; DIM]>,
    rows: Vec<[C64; DIM]>,
    log_scales: Vec<f64>,
}

impl KernelVectorSet {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Expanded zeros λⱼ aligned with the vectors.
    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn columns(&self) -> &[[C64; DIM]] {
        &self.columns
    }

    pub fn rows(&self) -> &[[C64; DIM]] {
        &self.rows
    }

    /// ln sⱼ: the stored vectors equal the true ones divided by sⱼ.
    pub fn log_scales(&self) -> &[f64] {
        &self.log_scales
    }

    /// The unscaled vector vⱼ (may overflow far from the soliton core).
    pub fn unscaled_column(&self, j: usize) -> [C64; DIM] {
        let s = self.log_scales[j].exp();
        self.columns[j].map(|z| z * s)
    }
}

/// θ-weighted seed with θ = θ₀ + δθ: components 1–6 times e^{θ−shift},
/// component 7 times e^{−θ−shift}. The two parts are exponentiated
/// separately so a large θ₀ shared by nearby points rounds the same way
/// for all of them.
fn exp_sigma3(theta: (C64, C64), seed: &[C64; DIM], shift: f64) -> [C64; DIM] {
    let (base, local) = theta;
    let up = (base - shift).exp() * local.exp();
    let down = (-base - shift).exp() * (-local).exp();
    let mut out = *seed;
    for z in &mut out[..DIM - 1] {
        *z *= up;
    }
    out[DIM - 1] *= down;
    out
}

/// ln of the largest |component| of e^{θσ₃}v₀ (the seventh seed entry is 1).
fn log_max_component(re_theta: f64, seed: &[C64; DIM]) -> f64 {
    let top = seed[..DIM - 1].iter().map(|z| z.norm()).fold(0.0, f64::max);
    if top > 0.0 {
        (re_theta + top.ln()).max(-re_theta)
    } else {
        -re_theta
    }
}

fn conj_pair((a, b): (C64, C64)) -> (C64, C64) {
    (a.conj(), b.conj())
}

fn conj7(v: &[C64; DIM]) -> [C64; DIM] {
    v.map(|z| z.conj())
}

/// Builds vⱼ = e^{θⱼσ₃} v_{j,0} (and the σ-mirrored partners for TypeI) with
/// v̂ⱼ = vⱼ†.
pub fn build_vectors(cfg: &SpectrumConfig, x: f64, t: f64) -> KernelVectorSet {
    build_vectors_with(cfg, x, t, Stabilization::On)
}

pub fn build_vectors_with(cfg: &SpectrumConfig, x: f64, t: f64, mode: Stabilization) -> KernelVectorSet {
    build_vectors_offset(cfg, (x, t), (0.0, 0.0), mode)
}

/// Vectors at (x₀ + dx, t₀ + dt), with θ split as θ(x₀, t₀) + θ(dx, dt).
pub fn build_vectors_offset(
    cfg: &SpectrumConfig,
    (x0, t0): (f64, f64),
    (dx, dt): (f64, f64),
    mode: Stabilization,
) -> KernelVectorSet {
    let n = cfg.len();
    let thetas: Vec<(C64, C64)> = cfg.zeros().iter().map(|&l| (theta(l, x0, t0), theta(l, dx, dt))).collect();
    let seeds: Vec<[C64; DIM]> = cfg.seeds().iter().map(|s| s.full()).collect();
    let shifts: Vec<f64> = thetas
        .iter()
        .zip(&seeds)
        .map(|((b, l), seed)| match mode {
            Stabilization::On => log_max_component(b.re + l.re, seed),
            Stabilization::Off => 0.0,
        })
        .collect();

    let mut columns = Vec::with_capacity(2 * n);
    let mut rows = Vec::with_capacity(2 * n);
    let mut log_scales = Vec::with_capacity(2 * n);

    for j in 0..n {
        columns.push(exp_sigma3(thetas[j], &seeds[j], shifts[j]));
        log_scales.push(shifts[j]);
        // v̂ⱼ = v_{j,0}† e^{θ̄ⱼσ₃}
        rows.push(exp_sigma3(conj_pair(thetas[j]), &conj7(&seeds[j]), shifts[j]));
    }
    if cfg.family() == Family::TypeI {
        for j in 0..n {
            // v_{N+j} = σ e^{θ̄ⱼσ₃} v̄_{j,0}; θ(−λ̄) = θ̄(λ).
            let v = apply_sigma(&exp_sigma3(conj_pair(thetas[j]), &conj7(&seeds[j]), shifts[j]));
            rows.push(conj7(&v));
            columns.push(v);
            log_scales.push(shifts[j]);
        }
    }
    KernelVectorSet {
        zeros: cfg.expanded_zeros(),
        columns,
        rows,
        log_scales,
    }
}

/// Gram-type matrix M_{kj} = v̂ₖ·vⱼ / (λⱼ − λ̄ₖ).
pub fn build_m(vecs: &KernelVectorSet) -> ComplexMatrix {
    let z = vecs.zeros();
    ComplexMatrix::from_fn(vecs.len(), vecs.len(), |k, j| {
        dot(&vecs.rows[k], &vecs.columns[j]) / (z[j] - z[k].conj())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::spectrum::SpectrumConfig;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn fig3() -> SpectrumConfig {
        SpectrumConfig::type_two(vec![c(0.0, 1.0)], vec![[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]]).unwrap()
    }

    fn approx7(a: &[C64; DIM], b: &[C64; DIM], tol: f64) -> bool {
        a.iter().zip(b).all(|(p, q)| (p - q).norm() <= tol)
    }

    #[test]
    fn type_two_vectors_at_origin() {
        let v = build_vectors_with(&fig3(), 0.0, 0.0, Stabilization::Off);
        let want = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 1.0].map(|r| c(r, 0.0));
        assert_eq!(v.len(), 1);
        assert!(approx7(&v.columns()[0], &want, 0.0));
        assert!(approx7(&v.rows()[0], &want, 0.0));
        // stabilized copy is divided by the largest component
        let s = build_vectors(&fig3(), 0.0, 0.0);
        assert!((s.log_scales()[0] - 3.0f64.ln()).abs() < 1e-15);
        assert!(approx7(&s.unscaled_column(0), &want, 1e-15));
    }

    #[test]
    fn type_two_vectors_scale_with_theta() {
        // θ = −1 at (x, t) = (1, 0)
        let v = build_vectors_with(&fig3(), 1.0, 0.0, Stabilization::Off);
        let e = std::f64::consts::E;
        let want = [1.0 / e, 1.0 / e, 2.0 / e, 2.0 / e, 3.0 / e, 3.0 / e, e].map(|r| c(r, 0.0));
        assert!(approx7(&v.columns()[0], &want, 1e-15));
        // stabilized copy differs by exactly the stored scale
        let s = build_vectors(&fig3(), 1.0, 0.0);
        assert!((s.log_scales()[0] - 1.0).abs() < 1e-15);
        assert!(approx7(&s.unscaled_column(0), &want, 1e-14));
    }

    #[test]
    fn type_one_mirror_of_uniform_seed() {
        let cfg = SpectrumConfig::type_one(vec![c(0.5, 0.5)], vec![[c(1.0, 0.0); 6]]).unwrap();
        let v = build_vectors(&cfg, 0.0, 0.0);
        assert_eq!(v.len(), 2);
        assert!(approx7(&v.columns()[1], &[c(1.0, 0.0); 7], 0.0));
        assert_eq!(v.zeros()[1], c(-0.5, 0.5));
    }

    #[test]
    fn rows_are_adjoints_of_columns() {
        let cfg = SpectrumConfig::type_one(
            vec![c(0.5, 0.5), c(0.4, 0.6)],
            vec![
                [c(1.0, 0.2), c(0.3, -1.0), c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 1.0), c(0.5, 0.5)],
                [c(0.1, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            ],
        )
        .unwrap();
        let v = build_vectors(&cfg, 0.7, -0.3);
        for (col, row) in v.columns().iter().zip(v.rows()) {
            assert!(approx7(&conj7(col), row, 1e-15));
        }
    }

    #[test]
    fn gram_entry_for_one_soliton() {
        let m = build_m(&build_vectors_with(&fig3(), 0.0, 0.0, Stabilization::Off));
        assert!((m[(0, 0)] - c(0.0, -14.5)).norm() < 1e-14);
    }

    #[test]
    fn gram_entry_zero_potential_limit() {
        let eta = 0.7;
        let cfg = SpectrumConfig::type_two(vec![c(0.0, eta)], vec![[c(0.0, 0.0); 3]]).unwrap();
        let (x, t) = (0.4, 0.2);
        let th = theta(c(0.0, eta), x, t);
        let m = build_m(&build_vectors_with(&cfg, x, t, Stabilization::Off));
        let want = (-2.0 * th).exp() / c(0.0, 2.0 * eta);
        assert!((m[(0, 0)] - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn type_one_cross_denominator_is_twice_lambda() {
        let l = c(0.5, 0.5);
        let cfg = SpectrumConfig::type_one(vec![l], vec![[c(1.0, 0.0); 6]]).unwrap();
        let v = build_vectors(&cfg, 0.0, 0.0);
        let m = build_m(&v);
        let num = dot(&v.rows()[1], &v.columns()[0]);
        assert!((m[(1, 0)] - num / (2.0 * l)).norm() < 1e-15);
    }

    #[test]
    fn gram_matrix_is_skew_hermitian() {
        let cfg = SpectrumConfig::type_one(
            vec![c(0.5, 0.5), c(0.4, 0.6)],
            vec![
                [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
                [c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            ],
        )
        .unwrap();
        let v = build_vectors(&cfg, -0.8, 0.25);
        let m = build_m(&v);
        assert!((&m + &m.adjoint()).max_abs() < 1e-14 * m.max_abs());
        // (v̂ₖvⱼ)‾ = v̂ⱼvₖ
        for k in 0..v.len() {
            for j in 0..v.len() {
                let a = dot(&v.rows()[k], &v.columns()[j]).conj();
                let b = dot(&v.rows()[j], &v.columns()[k]);
                assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
