//! Reflectionless Riemann–Hilbert solutions.
//!
//! With jump G = 𝕀 the sectionally meromorphic pair is rational in λ:
//!
//! ```text
//! P₁(λ) = 𝕀 − Σₖⱼ vₖ v̂ⱼ (M⁻¹)ₖⱼ / (λ − λ̄ⱼ)
//! P₂(λ) = 𝕀 + Σₖⱼ vₖ v̂ⱼ (M⁻¹)ₖⱼ / (λ − λₖ)
//! ```
//!
//! where vₖ v̂ⱼ is the column-times-row outer product. This module evaluates
//! both, reconstructs the potential from the 1/λ coefficient and measures
//! the symmetry identities the pair must satisfy.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{det, vec_norm, AlgebraError, ComplexMatrix, C64};
use crate::report::ResidualReport;
use crate::soliton::{Dressing, Family, SolitonError, SpectrumConfig};
use crate::structure::{sigma, sigma3, DIM};

/// Distance to a pole below which evaluation is refused.
pub const POLE_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RhpError {
    #[error(transparent)]
    Soliton(#[from] SolitonError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{factor} evaluated within {POLE_GUARD:e} of the pole belonging to zero {index}")]
    Pole { factor: &'static str, index: usize },
}

/// P₁ and P₂ for a fixed spectrum and (x, t). Holds the residue matrices so
/// each evaluation is a sum of N (or 2N) scaled 7×7 matrices.
#[derive(Debug, Clone)]
pub struct RhSolutionPair {
    zeros: Vec<C64>,
    /// Aⱼ = (Σₖ vₖ (M⁻¹)ₖⱼ) ⊗ v̂ⱼ, residue of −P₁ at λ̄ⱼ.
    p1_residues: Vec<ComplexMatrix>,
    /// Bₖ = vₖ ⊗ (Σⱼ (M⁻¹)ₖⱼ v̂ⱼ), residue of P₂ at λₖ.
    p2_residues: Vec<ComplexMatrix>,
    dressing: Dressing,
}

pub fn build_rh_pair(cfg: &SpectrumConfig, x: f64, t: f64) -> Result<RhSolutionPair, RhpError> {
    let dressing = Dressing::new(cfg, x, t)?;
    let vecs = dressing.vectors();
    let m_inv = dressing.m_inv();
    let n = vecs.len();

    let p1_residues = dressing
        .weighted_columns()
        .iter()
        .zip(vecs.rows())
        .map(|(w, row)| ComplexMatrix::outer(w, row))
        .collect();
    let p2_residues = (0..n)
        .map(|k| {
            let mut row = [C64::new(0.0, 0.0); DIM];
            for (j, vh) in vecs.rows().iter().enumerate() {
                for (a, &b) in row.iter_mut().zip(vh) {
                    *a += m_inv[(k, j)] * b;
                }
            }
            ComplexMatrix::outer(&vecs.columns()[k], &row)
        })
        .collect();

    Ok(RhSolutionPair {
        zeros: vecs.zeros().to_vec(),
        p1_residues,
        p2_residues,
        dressing,
    })
}

impl RhSolutionPair {
    /// Expanded zeros λⱼ; P₁ has poles at λ̄ⱼ and P₂ at λⱼ.
    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn dressing(&self) -> &Dressing {
        &self.dressing
    }

    pub fn p1(&self, lambda: C64) -> Result<ComplexMatrix, RhpError> {
        let mut out = ComplexMatrix::identity(DIM);
        for (j, (res, z)) in self.p1_residues.iter().zip(&self.zeros).enumerate() {
            let d = lambda - z.conj();
            if d.norm() < POLE_GUARD {
                return Err(RhpError::Pole { factor: "P1", index: j });
            }
            out = &out - &res.scale(d.inv());
        }
        Ok(out)
    }

    pub fn p2(&self, lambda: C64) -> Result<ComplexMatrix, RhpError> {
        let mut out = ComplexMatrix::identity(DIM);
        for (k, (res, z)) in self.p2_residues.iter().zip(&self.zeros).enumerate() {
            let d = lambda - z;
            if d.norm() < POLE_GUARD {
                return Err(RhpError::Pole { factor: "P2", index: k });
            }
            out = &out + &res.scale(d.inv());
        }
        Ok(out)
    }

    /// Coefficient of 1/λ in the large-λ expansion of P₁.
    pub fn p1_first_moment(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(DIM, DIM);
        for r in &self.p1_residues {
            out = &out - r;
        }
        out
    }

    /// Q = i[P₁⁽¹⁾, σ₃]
    pub fn potential(&self) -> ComplexMatrix {
        self.p1_first_moment().commutator(&sigma3()).scale(C64::i())
    }
}

/// Full 7×7 potential matrix recovered from the λ → ∞ expansion of P₁.
pub fn reconstruct_potential(cfg: &SpectrumConfig, x: f64, t: f64) -> Result<ComplexMatrix, RhpError> {
    Ok(build_rh_pair(cfg, x, t)?.potential())
}

/// Max-norm residuals of the symmetry identities at one (x, t).
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryResiduals {
    /// ‖P₁†(λ̄) − P₂(λ)‖ over all samples.
    pub adjoint: f64,
    /// ‖σ P̄₁(−λ̄) σ − P₁(λ)‖ over all samples; TypeI only.
    pub sigma: Option<f64>,
    /// ‖P₂(λ)P₁(λ) − 𝕀‖ over the real samples; `None` if there were none.
    pub jump: Option<f64>,
    /// ‖P₁(λⱼ)vⱼ‖/‖vⱼ‖ per zero.
    pub kernel_right: Vec<f64>,
    /// ‖v̂ⱼP₂(λ̄ⱼ)‖/‖v̂ⱼ‖ per zero.
    pub kernel_left: Vec<f64>,
    /// |det P₁(λⱼ)| per zero.
    pub det_at_zeros: Vec<f64>,
}

impl SymmetryResiduals {
    /// Largest residual across all identities.
    pub fn max(&self) -> f64 {
        [self.adjoint, self.sigma.unwrap_or(0.0), self.jump.unwrap_or(0.0)]
            .into_iter()
            .chain(self.kernel_right.iter().copied())
            .chain(self.kernel_left.iter().copied())
            .chain(self.det_at_zeros.iter().copied())
            .fold(0.0, f64::max)
    }

    pub fn to_report(&self, name: &str, grid: &str) -> ResidualReport {
        let mut values = vec![self.adjoint];
        let mut notes = vec![format!("adjoint P1^dag(conj l) = P2(l): {:.3e}", self.adjoint)];
        if let Some(s) = self.sigma {
            values.push(s);
            notes.push(format!("sigma conj(P1(-conj l)) sigma = P1(l): {s:.3e}"));
        }
        if let Some(j) = self.jump {
            values.push(j);
            notes.push(format!("P2 P1 = I on real axis: {j:.3e}"));
        }
        values.extend(&self.kernel_right);
        values.extend(&self.kernel_left);
        values.extend(&self.det_at_zeros);
        notes.push(format!(
            "kernel max: {:.3e}, det max: {:.3e}",
            self.kernel_right
                .iter()
                .chain(&self.kernel_left)
                .copied()
                .fold(0.0, f64::max),
            self.det_at_zeros.iter().copied().fold(0.0, f64::max)
        ));
        ResidualReport::from_values(name, grid, &values).with_notes(notes)
    }
}

/// Measures every symmetry identity of the reflectionless pair. Real samples
/// additionally test the trivial jump P₂P₁ = 𝕀.
pub fn check_symmetries(
    cfg: &SpectrumConfig,
    x: f64,
    t: f64,
    lambda_samples: &[C64],
) -> Result<SymmetryResiduals, RhpError> {
    let pair = build_rh_pair(cfg, x, t)?;
    let id = ComplexMatrix::identity(DIM);
    let sig = sigma();

    let mut adjoint: f64 = 0.0;
    let mut sigma_res: f64 = 0.0;
    let mut jump: Option<f64> = None;
    for &l in lambda_samples {
        let p1_conj = pair.p1(l.conj())?;
        let p2 = pair.p2(l)?;
        adjoint = adjoint.max((&p1_conj.adjoint() - &p2).max_abs());

        if cfg.family() == Family::TypeI {
            let p1 = pair.p1(l)?;
            let mirrored = &(&sig * &pair.p1(-l.conj())?.conj()) * &sig;
            sigma_res = sigma_res.max((&mirrored - &p1).max_abs());
        }
        if l.im == 0.0 {
            let p1 = pair.p1(l)?;
            let r = (&(&p2 * &p1) - &id).max_abs();
            jump = Some(jump.unwrap_or(0.0).max(r));
        }
    }

    let vecs = pair.dressing().vectors();
    let mut kernel_right = Vec::new();
    let mut kernel_left = Vec::new();
    let mut det_at_zeros = Vec::new();
    for (j, &z) in pair.zeros().iter().enumerate() {
        let v = vecs.columns()[j];
        let p1 = pair.p1(z)?;
        kernel_right.push(vec_norm(&p1.mul_vec(&v)?) / vec_norm(&v));

        let vh = vecs.rows()[j];
        let p2 = pair.p2(z.conj())?;
        let left: Vec<C64> = (0..DIM)
            .map(|c| (0..DIM).map(|r| vh[r] * p2[(r, c)]).sum())
            .collect();
        kernel_left.push(vec_norm(&left) / vec_norm(&vh));

        det_at_zeros.push(det(&p1)?.norm());
    }

    Ok(SymmetryResiduals {
        adjoint,
        sigma: (cfg.family() == Family::TypeI).then_some(sigma_res),
        jump,
        kernel_right,
        kernel_left,
        det_at_zeros,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn fig3() -> SpectrumConfig {
        SpectrumConfig::type_two(vec![c(0.0, 1.0)], vec![[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]]).unwrap()
    }

    #[test]
    fn zero_seeds_give_identity() {
        let cfg = fig3().with_zero_seeds();
        let pair = build_rh_pair(&cfg, 0.3, 0.1).unwrap();
        // only the (7,7) entry of the residue survives, and it is what makes
        // det P₁ vanish at λ₁; off-diagonal blocks are exactly zero
        for l in [c(2.0, 0.5), c(-1.0, 0.0), c(0.0, 3.0)] {
            let p1 = pair.p1(l).unwrap();
            for r in 0..DIM {
                for k in 0..DIM {
                    if r != k {
                        assert_eq!(p1[(r, k)], c(0.0, 0.0));
                    } else if r < 6 {
                        assert_eq!(p1[(r, k)], c(1.0, 0.0));
                    }
                }
            }
            let blaschke = (l - c(0.0, 1.0)) / (l - c(0.0, -1.0));
            assert!((p1[(6, 6)] - blaschke).norm() < 1e-15);
            assert!((pair.p2(l).unwrap()[(6, 6)] - blaschke.inv()).norm() < 1e-14);
        }
        assert_eq!(pair.potential().max_abs(), 0.0);
    }

    #[test]
    fn p1_entry_at_two_i() {
        // (P₁)₁₇ at λ = 2i: −(v₁)₁(v̂₁)₇(M⁻¹)₁₁/(2i − (−i)) = −(2i/29)/(3i)
        let pair = build_rh_pair(&fig3(), 0.0, 0.0).unwrap();
        let p1 = pair.p1(c(0.0, 2.0)).unwrap();
        assert!((p1[(0, 6)] - c(-2.0 / 87.0, 0.0)).norm() < 1e-15);
        assert!(p1.is_finite());
    }

    #[test]
    fn normalization_at_infinity() {
        let pair = build_rh_pair(&fig3(), 0.4, -0.2).unwrap();
        let l = c(1e6, 0.0);
        let residue_sum = pair.p1_first_moment().max_abs();
        let dev = (&pair.p1(l).unwrap() - &ComplexMatrix::identity(DIM)).max_abs();
        assert!(dev <= 1e-5 * residue_sum);
        let dev2 = (&pair.p2(l).unwrap() - &ComplexMatrix::identity(DIM)).max_abs();
        assert!(dev2 <= 1e-5 * residue_sum);
    }

    #[test]
    fn pole_guard() {
        let pair = build_rh_pair(&fig3(), 0.0, 0.0).unwrap();
        assert_eq!(pair.p1(c(0.0, -1.0)).unwrap_err(), RhpError::Pole { factor: "P1", index: 0 });
        assert_eq!(
            pair.p2(c(0.0, 1.0 + 1e-9)).unwrap_err(),
            RhpError::Pole { factor: "P2", index: 0 }
        );
    }

    #[test]
    fn potential_for_one_soliton() {
        let q = reconstruct_potential(&fig3(), 0.0, 0.0).unwrap();
        assert!((q[(0, 6)] - c(-4.0 / 29.0, 0.0)).norm() < 1e-15);
        assert!((q[(6, 0)] - c(4.0 / 29.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_seed_symmetry_residuals_vanish() {
        let cfg = fig3().with_zero_seeds();
        let r = check_symmetries(&cfg, 0.2, 0.0, &[c(0.5, 0.0), c(1.0, 1.0)]).unwrap();
        assert!(r.adjoint < 1e-15);
        assert!(r.jump.unwrap() < 1e-15);
        assert!(r.max() < 1e-15);
    }
}
