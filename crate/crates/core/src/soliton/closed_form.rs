//! Explicit formulas for the one-soliton, the TypeI breather and the TypeII
//! two-soliton. These are written out term by term and do not call into the
//! kernel-vector/Gram-matrix route, so they serve as independent oracles for
//! [`eval_fields`](super::eval_fields).
//!
//! Corrections relative to the commonly printed forms, all fixed by
//! agreement with the generic construction:
//! - one-soliton argument is −2η₁x + 8η₁³t + ln√(2S), not 2η₁x − 8η₁³t + ln√S;
//! - breather denominator uses η₁² sin²Y₁;
//! - the two-soliton T₂₂ coefficient uses the second seed, 2(|α₂|²+|γ₂|²+|ρ₂|²).

use crate::algebra::C64;

use super::{theta, FieldSample, SolitonError};

fn seed_norm_sq(a: C64, g: C64, r: C64) -> f64 {
    a.norm_sqr() + g.norm_sqr() + r.norm_sqr()
}

fn sech(x: f64) -> f64 {
    // cosh overflows to inf for |x| > ~710 and 1/inf = 0
    1.0 / x.cosh()
}

/// TypeII one-soliton with λ₁ = iη₁:
/// uₘ = −(√2 cₘ η₁/√S) sech(−2η₁x + 8η₁³t + ln√(2S)).
pub fn one_soliton_closed_form(
    alpha1: C64,
    gamma1: C64,
    rho1: C64,
    eta1: f64,
    x: f64,
    t: f64,
) -> Result<FieldSample, SolitonError> {
    if eta1 == 0.0 || !eta1.is_finite() {
        return Err(SolitonError::InvalidParameter(format!("eta1 must be nonzero, got {eta1}")));
    }
    let s = seed_norm_sq(alpha1, gamma1, rho1);
    if s == 0.0 {
        return Err(SolitonError::DegenerateSeed);
    }
    let arg = -2.0 * eta1 * x + 8.0 * eta1.powi(3) * t + (2.0 * s).sqrt().ln();
    let amp = -(2.0f64.sqrt()) * eta1 / s.sqrt() * sech(arg);
    Ok(FieldSample::new(alpha1 * amp, gamma1 * amp, rho1 * amp))
}

/// TypeI N = 1 breather with λ₁ = ξ₁ + iη₁ and seed
/// (α₁, ᾱ₁, γ₁, γ̄₁, ρ₁, ρ̄₁).
pub fn breather_closed_form(
    alpha1: C64,
    gamma1: C64,
    rho1: C64,
    xi1: f64,
    eta1: f64,
    x: f64,
    t: f64,
) -> Result<FieldSample, SolitonError> {
    if xi1 == 0.0 || !xi1.is_finite() {
        return Err(SolitonError::InvalidParameter(format!("xi1 must be nonzero, got {xi1}")));
    }
    if eta1.is_nan() || eta1 <= 0.0 {
        return Err(SolitonError::InvalidParameter(format!("eta1 must be positive, got {eta1}")));
    }
    let s = seed_norm_sq(alpha1, gamma1, rho1);
    if s == 0.0 {
        return Err(SolitonError::DegenerateSeed);
    }
    let big_x = -2.0 * eta1 * (x + 4.0 * (3.0 * xi1 * xi1 - eta1 * eta1) * t) + (2.0 * s).sqrt().ln();
    let big_y = 2.0 * xi1 * (x + 4.0 * (xi1 * xi1 - 3.0 * eta1 * eta1) * t);

    // numerator and denominator both divided by cosh²X
    let sech_x = sech(big_x);
    let (sy, cy) = big_y.sin_cos();
    let num = xi1 * cy * sech_x + eta1 * big_x.tanh() * sy * sech_x;
    let den = xi1 * xi1 + eta1 * eta1 * sy * sy * sech_x * sech_x;
    let profile = -2.0 * 2.0f64.sqrt() * xi1 * eta1 / s.sqrt() * num / den;
    Ok(FieldSample::new(alpha1 * profile, gamma1 * profile, rho1 * profile))
}

/// TypeII two-soliton from the explicit 2×2 matrix T with entries
///
/// ```text
/// T_kj = (Δ_kj e^{θ̄ₖ+θⱼ} + e^{−θ̄ₖ−θⱼ}) / (λⱼ − λ̄ₖ),
/// Δ_kj = ᾱₖαⱼ + αₖᾱⱼ + γ̄ₖγⱼ + γₖγ̄ⱼ + ρ̄ₖρⱼ + ρₖρ̄ⱼ,
/// ```
///
/// inverted by the adjugate formula.
pub fn two_soliton_closed_form(
    seeds: [[C64; 3]; 2],
    lambdas: [C64; 2],
    x: f64,
    t: f64,
) -> Result<FieldSample, SolitonError> {
    for (i, l) in lambdas.iter().enumerate() {
        if l.re != 0.0 || l.im <= 0.0 {
            return Err(SolitonError::InvalidParameter(format!(
                "zero {i} must be pure imaginary in the upper half-plane, got {l}"
            )));
        }
    }
    if lambdas[0] == lambdas[1] {
        return Err(SolitonError::InvalidParameter("coincident zeros".into()));
    }
    let th = [theta(lambdas[0], x, t), theta(lambdas[1], x, t)];
    let delta = |k: usize, j: usize| -> C64 {
        let [ak, gk, rk] = seeds[k];
        let [aj, gj, rj] = seeds[j];
        ak.conj() * aj + ak * aj.conj() + gk.conj() * gj + gk * gj.conj() + rk.conj() * rj + rk * rj.conj()
    };
    let entry = |k: usize, j: usize| -> C64 {
        (delta(k, j) * (th[k].conj() + th[j]).exp() + (-th[k].conj() - th[j]).exp())
            / (lambdas[j] - lambdas[k].conj())
    };
    let (t11, t12, t21, t22) = (entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1));
    let det = t11 * t22 - t12 * t21;
    let inv = [[t22 / det, -t12 / det], [-t21 / det, t11 / det]];

    let u = [0, 1, 2].map(|m| {
        let mut s = C64::new(0.0, 0.0);
        for k in 0..2 {
            for j in 0..2 {
                s += seeds[k][m] * (th[k] - th[j].conj()).exp() * inv[k][j];
            }
        }
        2.0 * C64::i() * s
    });
    Ok(FieldSample::from_array(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn one_soliton_at_origin() {
        let u = one_soliton_closed_form(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), 1.0, 0.0, 0.0).unwrap();
        assert!((u.u1 - c(-4.0 / 29.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn one_soliton_peak_amplitude() {
        let expected = 2.0f64.sqrt() / 14.0f64.sqrt();
        // golden-section search for the peak of |u₁| at t = 0
        let f = |x: f64| {
            one_soliton_closed_form(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), 1.0, x, 0.0)
                .unwrap()
                .u1
                .norm()
        };
        let (mut a, mut b) = (-5.0, 5.0);
        let g = (5.0f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let (c1, c2) = (b - g * (b - a), a + g * (b - a));
            if f(c1) > f(c2) {
                b = c2;
            } else {
                a = c1;
            }
        }
        assert!((f(0.5 * (a + b)) - expected).abs() < 1e-12);
        assert!((expected - 0.377964).abs() < 1e-6);
    }

    #[test]
    fn one_soliton_decouples_zero_component() {
        for (x, t) in [(0.0, 0.0), (1.0, 0.3), (-2.0, -0.1)] {
            let u = one_soliton_closed_form(c(0.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), 1.0, x, t).unwrap();
            assert_eq!(u.u1, c(0.0, 0.0));
            assert!(u.u2.norm() > 0.0 && u.u3.norm() > 0.0);
        }
    }

    #[test]
    fn one_soliton_errors() {
        let z = c(0.0, 0.0);
        assert_eq!(one_soliton_closed_form(z, z, z, 1.0, 0.0, 0.0), Err(SolitonError::DegenerateSeed));
        assert!(matches!(
            one_soliton_closed_form(c(1.0, 0.0), z, z, 0.0, 0.0, 0.0),
            Err(SolitonError::InvalidParameter(_))
        ));
    }

    #[test]
    fn breather_decays_in_x() {
        let a = c(0.0, 1.0 / 3.0f64.sqrt());
        let g = c(0.0, 2.0f64.sqrt() / 3.0f64.sqrt());
        for x in [-60.0, 60.0, -800.0, 800.0] {
            let u = breather_closed_form(a, g, g, 0.5, 0.5, x, 0.0).unwrap();
            assert!(u.is_finite());
            assert!(u.intensity().sqrt() < 1e-10);
        }
    }

    #[test]
    fn breather_rejects_bad_parameters() {
        let a = c(1.0, 0.0);
        assert!(breather_closed_form(a, a, a, 0.0, 0.5, 0.0, 0.0).is_err());
        assert!(breather_closed_form(a, a, a, 0.5, -0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn two_soliton_rejects_coincident_zeros() {
        let s = [c(1.0, 0.0); 3];
        assert!(two_soliton_closed_form([s, s], [c(0.0, 0.5), c(0.0, 0.5)], 0.0, 0.0).is_err());
        assert!(two_soliton_closed_form([s, s], [c(0.1, 0.5), c(0.0, 0.3)], 0.0, 0.0).is_err());
    }
}
