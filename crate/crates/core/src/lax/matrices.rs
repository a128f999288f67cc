use crate::algebra::{ComplexMatrix, C64};
use crate::soliton::FieldSample;
use crate::structure::{sigma3, DIM};

/// Q with seventh column (u₁, ū₁, u₂, ū₂, u₃, ū₃, 0)ᵀ and seventh row
/// (−ū₁, −u₁, −ū₂, −u₂, −ū₃, −u₃, 0).
pub fn build_q(s: &FieldSample) -> ComplexMatrix {
    let mut q = ComplexMatrix::zeros(DIM, DIM);
    for (m, u) in s.components().into_iter().enumerate() {
        let (a, b) = (2 * m, 2 * m + 1);
        q[(a, DIM - 1)] = u;
        q[(b, DIM - 1)] = u.conj();
        q[(DIM - 1, a)] = -u.conj();
        q[(DIM - 1, b)] = -u;
    }
    q
}

/// U = iλσ₃ + Q
pub fn build_u(lambda: C64, q: &ComplexMatrix) -> ComplexMatrix {
    &sigma3().scale(C64::i() * lambda) + q
}

/// V = 4iλ³σ₃ + 4λ²Q + 2iλ(Q² + Q_x)σ₃ + Q_xQ − QQ_x − Q_xx + 2Q³
pub fn build_v(lambda: C64, q: &ComplexMatrix, qx: &ComplexMatrix, qxx: &ComplexMatrix) -> ComplexMatrix {
    let i = C64::i();
    let s3 = sigma3();
    let q2 = q * q;
    let q3 = &q2 * q;
    let mut v = s3.scale(4.0 * i * lambda.powu(3));
    v = &v + &q.scale(4.0 * lambda * lambda);
    v = &v + &(&(&q2 + qx) * &s3).scale(2.0 * i * lambda);
    v = &v + &(qx * q);
    v = &v - &(q * qx);
    v = &v - qxx;
    &v + &q3.scale(C64::new(2.0, 0.0))
}

/// ∂ₓV assembled by the product rule from Q and its first three x-derivatives.
pub fn build_v_x(
    lambda: C64,
    q: &ComplexMatrix,
    qx: &ComplexMatrix,
    qxx: &ComplexMatrix,
    qxxx: &ComplexMatrix,
) -> ComplexMatrix {
    let i = C64::i();
    let s3 = sigma3();
    let d_q2 = &(qx * q) + &(q * qx);
    let d_q3 = &(&(&(qx * q) * q) + &(&(q * qx) * q)) + &(&(q * q) * qx);
    let mut v = qx.scale(4.0 * lambda * lambda);
    v = &v + &(&(&d_q2 + qxx) * &s3).scale(2.0 * i * lambda);
    v = &v + &(qxx * q);
    v = &v - &(q * qxx);
    v = &v - qxxx;
    &v + &d_q3.scale(C64::new(2.0, 0.0))
}
