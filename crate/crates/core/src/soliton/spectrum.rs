use thiserror::Error;

use crate::algebra::C64;

/// Relative separation below which two zeros are considered coincident.
const COINCIDENCE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Zeros come in pairs (λⱼ, −λ̄ⱼ); only the base zeros are stored.
    TypeI,
    /// Simple pure-imaginary zeros.
    TypeII,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::TypeI => "type1",
            Family::TypeII => "type2",
        }
    }
}

/// Free parameters of a constant kernel-vector seed. The seventh component
/// of the full seed is always 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VectorSeed {
    /// (α, β, γ, μ, ρ, δ)
    TypeI([C64; 6]),
    /// (α, γ, ρ); expands to (α, ᾱ, γ, γ̄, ρ, ρ̄, 1).
    TypeII([C64; 3]),
}

impl VectorSeed {
    pub fn family(&self) -> Family {
        match self {
            VectorSeed::TypeI(_) => Family::TypeI,
            VectorSeed::TypeII(_) => Family::TypeII,
        }
    }

    pub fn zero(family: Family) -> Self {
        let z = C64::new(0.0, 0.0);
        match family {
            Family::TypeI => VectorSeed::TypeI([z; 6]),
            Family::TypeII => VectorSeed::TypeII([z; 3]),
        }
    }

    /// The full seven-component seed vector.
    pub fn full(&self) -> [C64; 7] {
        let one = C64::new(1.0, 0.0);
        match *self {
            VectorSeed::TypeI([a, b, g, m, r, d]) => [a, b, g, m, r, d, one],
            VectorSeed::TypeII([a, g, r]) => [a, a.conj(), g, g.conj(), r, r.conj(), one],
        }
    }

    /// Components that multiply u₁, u₂, u₃ in the base vector: (α, γ, ρ).
    pub fn polarization(&self) -> [C64; 3] {
        match *self {
            VectorSeed::TypeI([a, _, g, _, r, _]) => [a, g, r],
            VectorSeed::TypeII(p) => p,
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            VectorSeed::TypeI(v) => v.iter().all(|z| z.is_finite()),
            VectorSeed::TypeII(v) => v.iter().all(|z| z.is_finite()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("spectrum must contain at least one zero")]
    Empty,
    #[error("{zeros} zeros but {seeds} seeds")]
    SeedCountMismatch { zeros: usize, seeds: usize },
    #[error("seed {index} does not match the spectrum family")]
    SeedFamilyMismatch { index: usize },
    #[error("zero {index} or its seed has a non-finite component")]
    NonFinite { index: usize },
    #[error("zero {index} ({re}{im:+}i): zero not in upper half-plane")]
    NotUpperHalfPlane { index: usize, re: f64, im: f64 },
    #[error("zero {index} ({re}{im:+}i): TypeII zero must be pure imaginary")]
    NotPureImaginary { index: usize, re: f64, im: f64 },
    #[error("zero {index} ({re}{im:+}i): TypeI base zero must not be pure imaginary")]
    PureImaginaryBase { index: usize, re: f64, im: f64 },
    #[error("zeros {first} and {second} coincide (after mirroring)")]
    Coincident { first: usize, second: usize },
}

/// Scattering data of a reflectionless potential: discrete zeros in ℂ⁺ and
/// their kernel-vector seeds. Always valid once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumConfig {
    family: Family,
    zeros: Vec<C64>,
    seeds: Vec<VectorSeed>,
}

impl SpectrumConfig {
    pub fn new(family: Family, zeros: Vec<C64>, seeds: Vec<VectorSeed>) -> Result<Self, SpectrumError> {
        if zeros.is_empty() {
            return Err(SpectrumError::Empty);
        }
        if zeros.len() != seeds.len() {
            return Err(SpectrumError::SeedCountMismatch {
                zeros: zeros.len(),
                seeds: seeds.len(),
            });
        }
        for (index, (z, s)) in zeros.iter().zip(&seeds).enumerate() {
            if s.family() != family {
                return Err(SpectrumError::SeedFamilyMismatch { index });
            }
            if !z.is_finite() || !s.is_finite() {
                return Err(SpectrumError::NonFinite { index });
            }
            let (re, im) = (z.re, z.im);
            if im <= 0.0 {
                return Err(SpectrumError::NotUpperHalfPlane { index, re, im });
            }
            match family {
                Family::TypeII if re != 0.0 => {
                    return Err(SpectrumError::NotPureImaginary { index, re, im });
                }
                Family::TypeI if re == 0.0 => {
                    return Err(SpectrumError::PureImaginaryBase { index, re, im });
                }
                _ => {}
            }
        }
        let cfg = Self { family, zeros, seeds };
        let all = cfg.expanded_zeros();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let scale = all[i].norm().max(all[j].norm()).max(1.0);
                if (all[i] - all[j]).norm() <= COINCIDENCE_RTOL * scale {
                    return Err(SpectrumError::Coincident { first: i, second: j });
                }
            }
        }
        Ok(cfg)
    }

    pub fn type_one(zeros: Vec<C64>, seeds: Vec<[C64; 6]>) -> Result<Self, SpectrumError> {
        Self::new(
            Family::TypeI,
            zeros,
            seeds.into_iter().map(VectorSeed::TypeI).collect(),
        )
    }

    pub fn type_two(zeros: Vec<C64>, seeds: Vec<[C64; 3]>) -> Result<Self, SpectrumError> {
        Self::new(
            Family::TypeII,
            zeros,
            seeds.into_iter().map(VectorSeed::TypeII).collect(),
        )
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Base zeros as supplied (never includes the TypeI mirrors).
    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn seeds(&self) -> &[VectorSeed] {
        &self.seeds
    }

    /// Number of base zeros N.
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// All zeros of det P₁: λ₁..λ_N, then −λ̄₁..−λ̄_N for TypeI.
    pub fn expanded_zeros(&self) -> Vec<C64> {
        match self.family {
            Family::TypeII => self.zeros.clone(),
            Family::TypeI => self
                .zeros
                .iter()
                .copied()
                .chain(self.zeros.iter().map(|z| -z.conj()))
                .collect(),
        }
    }

    /// Same zeros with every free seed parameter set to zero.
    pub fn with_zero_seeds(&self) -> Self {
        Self {
            family: self.family,
            zeros: self.zeros.clone(),
            seeds: vec![VectorSeed::zero(self.family); self.zeros.len()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_lower_half_plane() {
        let err = SpectrumConfig::type_one(vec![c(0.5, -0.5)], vec![[c(1.0, 0.0); 6]]).unwrap_err();
        assert!(err.to_string().contains("zero not in upper half-plane"));
        let err = SpectrumConfig::type_two(vec![c(0.0, 0.0)], vec![[c(1.0, 0.0); 3]]).unwrap_err();
        assert!(matches!(err, SpectrumError::NotUpperHalfPlane { index: 0, .. }));
    }

    #[test]
    fn rejects_pure_imaginary_type_one_base() {
        let err = SpectrumConfig::type_one(vec![c(0.0, 0.3)], vec![[c(1.0, 0.0); 6]]).unwrap_err();
        assert!(err.to_string().contains("TypeI base zero must not be pure imaginary"));
    }

    #[test]
    fn rejects_type_two_with_real_part() {
        let err = SpectrumConfig::type_two(vec![c(0.1, 0.3)], vec![[c(1.0, 0.0); 3]]).unwrap_err();
        assert!(matches!(err, SpectrumError::NotPureImaginary { index: 0, .. }));
    }

    #[test]
    fn rejects_coincident_zeros_including_mirrors() {
        let s = [c(1.0, 0.0); 3];
        let err = SpectrumConfig::type_two(vec![c(0.0, 0.5), c(0.0, 0.5)], vec![s, s]).unwrap_err();
        assert_eq!(err, SpectrumError::Coincident { first: 0, second: 1 });
        // λ₂ = −λ̄₁ collides with the mirror of λ₁
        let s6 = [c(1.0, 0.0); 6];
        let err = SpectrumConfig::type_one(vec![c(0.5, 0.5), c(-0.5, 0.5)], vec![s6, s6]).unwrap_err();
        assert!(matches!(err, SpectrumError::Coincident { .. }));
    }

    #[test]
    fn rejects_shape_errors() {
        assert_eq!(SpectrumConfig::type_two(vec![], vec![]).unwrap_err(), SpectrumError::Empty);
        assert!(matches!(
            SpectrumConfig::type_two(vec![c(0.0, 1.0)], vec![]),
            Err(SpectrumError::SeedCountMismatch { zeros: 1, seeds: 0 })
        ));
        assert!(matches!(
            SpectrumConfig::new(Family::TypeI, vec![c(0.5, 1.0)], vec![VectorSeed::zero(Family::TypeII)]),
            Err(SpectrumError::SeedFamilyMismatch { index: 0 })
        ));
    }

    #[test]
    fn type_one_mirrors_are_generated() {
        let cfg = SpectrumConfig::type_one(vec![c(0.5, 0.5)], vec![[c(1.0, 0.0); 6]]).unwrap();
        assert_eq!(cfg.zeros().len(), 1);
        assert_eq!(cfg.expanded_zeros(), vec![c(0.5, 0.5), c(-0.5, 0.5)]);
    }

    #[test]
    fn type_two_full_seed_is_conjugate_paired() {
        let s = VectorSeed::TypeII([c(1.0, 2.0), c(0.0, 3.0), c(-1.0, 0.5)]);
        let f = s.full();
        assert_eq!(f[1], c(1.0, -2.0));
        assert_eq!(f[3], c(0.0, -3.0));
        assert_eq!(f[5], c(-1.0, -0.5));
        assert_eq!(f[6], c(1.0, 0.0));
    }
}
