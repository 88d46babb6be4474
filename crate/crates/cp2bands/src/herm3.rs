//! Dedicated eigensolvers for 3x3 complex Hermitian matrices.
//!
//! The hot paths of the curvature integrals need eigenvalues only, so the
//! closed-form (trigonometric) solution of the characteristic cubic is the
//! default. Frames (orthonormal eigenvector bases) come from the iterative
//! solver, which also serves as the high-precision reference the closed form
//! is tested against.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;

pub type CMat3 = Matrix3<Complex64>;

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// Uses the closed form, except near a degeneracy where the trigonometric
/// roots lose half the mantissa; there it falls back to the iterative solver.
/// Contract: error below 1e-13 * scale against the iterative reference on
/// generic Hermitian inputs (locked by a test).
pub fn eigvals(m: &CMat3) -> [f64; 3] {
    let v = eigvals_closed(m);
    let scale = v[0].abs().max(v[2].abs()).max(1e-300);
    if (v[1] - v[0]).min(v[2] - v[1]) < 1e-5 * scale {
        return eigh(m).0;
    }
    v
}

/// The raw trigonometric solution of the characteristic cubic, ascending.
pub fn eigvals_closed(m: &CMat3) -> [f64; 3] {
    let third = 1.0 / 3.0;
    let shift = (m[(0, 0)].re + m[(1, 1)].re + m[(2, 2)].re) * third;

    // Traceless part b = m - shift*I; p^2 = tr(b^2)/6, all real for Hermitian m.
    let d0 = m[(0, 0)].re - shift;
    let d1 = m[(1, 1)].re - shift;
    let d2 = m[(2, 2)].re - shift;
    let off = m[(0, 1)].norm_sqr() + m[(0, 2)].norm_sqr() + m[(1, 2)].norm_sqr();
    let p2 = (d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off) / 6.0;

    if p2 <= 0.0 {
        return [shift; 3];
    }
    let p = p2.sqrt();

    // det(b), expanded so the result is exactly real.
    let det_b = d0 * (d1 * d2 - m[(1, 2)].norm_sqr()) - d1 * m[(0, 2)].norm_sqr()
        - d2 * m[(0, 1)].norm_sqr()
        + 2.0 * (m[(0, 1)] * m[(1, 2)] * m[(0, 2)].conj()).re;

    let r = (det_b / (2.0 * p2 * p)).clamp(-1.0, 1.0);
    let theta = r.acos() * third;

    // cos(theta) is the largest root, cos(theta + 2pi/3) the smallest.
    let e_hi = shift + 2.0 * p * theta.cos();
    let e_lo = shift + 2.0 * p * (theta + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let e_mid = 3.0 * shift - e_hi - e_lo;
    [e_lo, e_mid, e_hi]
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvector columns,
/// from the iterative Hermitian solver.
pub fn eigh(m: &CMat3) -> ([f64; 3], CMat3) {
    let se = SymmetricEigen::new(*m);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals = [
        se.eigenvalues[order[0]],
        se.eigenvalues[order[1]],
        se.eigenvalues[order[2]],
    ];
    let mut vecs = CMat3::zeros();
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    (vals, vecs)
}
