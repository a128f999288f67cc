//! Fixed 7×7 matrices of the spectral problem: the signature matrix σ₃ and
//! the conjugation involution σ that swaps components (1,2), (3,4), (5,6).

use crate::algebra::{ComplexMatrix, C64};

/// Dimension of the spectral problem.
pub const DIM: usize = 7;

/// Diagonal of σ₃.
pub const SIGMA3_DIAG: [f64; DIM] = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0];

/// Index pairs exchanged by σ (0-based).
pub const SIGMA_PAIRS: [(usize, usize); 3] = [(0, 1), (2, 3), (4, 5)];

/// Rows of the potential matrix that carry u₁, u₂, u₃ in the seventh column.
pub const FIELD_ROWS: [usize; 3] = [0, 2, 4];

pub fn sigma3() -> ComplexMatrix {
    ComplexMatrix::diagonal(&SIGMA3_DIAG.map(|d| C64::new(d, 0.0)))
}

pub fn sigma() -> ComplexMatrix {
    let one = C64::new(1.0, 0.0);
    let mut s = ComplexMatrix::zeros(DIM, DIM);
    for (a, b) in SIGMA_PAIRS {
        s[(a, b)] = one;
        s[(b, a)] = one;
    }
    s[(6, 6)] = one;
    s
}

/// σ·v for a 7-vector.
pub fn apply_sigma(v: &[C64; DIM]) -> [C64; DIM] {
    let mut out = *v;
    for (a, b) in SIGMA_PAIRS {
        out.swap(a, b);
    }
    out
}
