use super::PlaneWaveBasis;
use crate::error::{Error, Result};
use crate::potential::FourierPotential;
use crate::scalar::Real;
use nalgebra::{DMatrix, Vector2};
use num_complex::Complex;

/// `H[i, j] = |k + κ̃m_i|² δ_ij + λ Ŵ_{m_i − m_j}`.
///
/// The strictly lower triangle is filled from `Ŵ`, the upper triangle is its
/// conjugate transpose, and the diagonal is real, so the result is exactly
/// Hermitian.
pub fn assemble<T: Real>(
    basis: &PlaneWaveBasis<T>,
    k: &Vector2<T>,
    lambda: T,
    w: &FourierPotential<T>,
) -> Result<DMatrix<Complex<T>>> {
    if !w.is_empty() && !w.lattice().same_lattice(basis.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    let n = basis.len();
    super::spectrum::check_dimension(n)?;
    let mut h = DMatrix::<Complex<T>>::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex::from(basis.momentum(k, i).norm_squared());
    }
    if lambda == T::zero() {
        return Ok(h);
    }
    let modes: Vec<_> = w.iter().collect();
    for (i, &mi) in basis.indices().iter().enumerate() {
        for &(q, c) in &modes {
            match basis.position(mi - q) {
                Some(j) if j < i => {
                    let v = c * lambda;
                    h[(i, j)] = v;
                    h[(j, i)] = v.conj();
                }
                Some(j) if j == i => h[(i, i)].re += lambda * c.re,
                _ => {}
            }
        }
    }
    Ok(h)
}
