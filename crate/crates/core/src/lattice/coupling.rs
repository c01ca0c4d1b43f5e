use super::angle::{rotation_matrix, CommensurationData, LatticeKind};
use super::basis::{kappa, superlattice_basis};
use super::symmetry::{symmetry_data, KPoint};
use crate::error::{Error, Result};
use crate::int::{IMat2, IVec2};
use crate::scalar::Real;
use nalgebra::Matrix2;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Exact value of `N²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NSquared {
    Integer(i64),
    /// `n / (16π²)`, for superlattices of kind `N·Λ*`.
    OverSixteenPiSquared(i64),
}

impl NSquared {
    pub fn value<T: Real>(self) -> T {
        match self {
            NSquared::Integer(n) => T::int(n),
            NSquared::OverSixteenPiSquared(n) => T::int(n) / (T::lit(16.0) * T::pi() * T::pi()),
        }
    }
}

/// Integer matrices sending single-layer reciprocal indices of the two twisted
/// layers to superlattice reciprocal indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CouplingMatrices {
    pub plus: IMat2,
    pub minus: IMat2,
    pub n_squared: NSquared,
}

impl CouplingMatrices {
    /// Matrix for layer `+1` or `−1`.
    pub fn layer(&self, sign: i32) -> IMat2 {
        if sign >= 0 {
            self.plus
        } else {
            self.minus
        }
    }

    /// `m ∈ plus·ℤ² ∪ minus·ℤ²`, decided exactly.
    pub fn in_support_lattice(&self, m: IVec2) -> bool {
        self.plus.contains(m) || self.minus.contains(m)
    }
}

fn closed_form(data: &CommensurationData, b: i64) -> Result<IMat2> {
    let a = data.a();
    let two_eps = 1i64 << data.epsilon();
    let (rows, den) = match data.superlattice_kind() {
        LatticeKind::Direct => ([[a - b, 2 * b], [-2 * b, a + b]], two_eps),
        LatticeKind::Dual => ([[2 * a, -a + 3 * b], [-a - 3 * b, 2 * a]], 3 * two_eps),
    };
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            if rows[i][j] % den != 0 {
                return Err(Error::NonIntegralCoupling { a, b: data.b() });
            }
            out[i][j] = rows[i][j] / den;
        }
    }
    Ok(IMat2::new(out))
}

pub fn coupling_matrices(data: &CommensurationData) -> Result<CouplingMatrices> {
    let plus = closed_form(data, data.b())?;
    let minus = closed_form(data, -data.b())?;
    let q = data.norm_sq() >> (2 * data.epsilon());
    let n_squared = match data.superlattice_kind() {
        LatticeKind::Direct => NSquared::Integer(q),
        LatticeKind::Dual => NSquared::OverSixteenPiSquared(q),
    };
    Ok(CouplingMatrices { plus, minus, n_squared })
}

/// Floating-point evaluation of `(superlattice dual)⁻¹ · R_{±θ} · κ`.
pub fn coupling_matrix_float<T: Real>(data: &CommensurationData, sign: i32) -> Matrix2<T> {
    let mut r = rotation_matrix::<T>(data);
    if sign < 0 {
        r = r.transpose();
    }
    let dual = *superlattice_basis::<T>(data).dual_matrix();
    dual.try_inverse().expect("independent generators") * r * kappa::<T>()
}

/// Integer vectors `(v₊, v₋)` with `plus·v₊ + minus·v₋ = ρ₋₁` at the `K` corner.
pub fn bezout_shift_decomposition(data: &CommensurationData) -> (IVec2, IVec2) {
    let (a, b) = (data.a(), data.b());
    let scale = 1i64 << data.epsilon();
    let g = a.extended_gcd(&b);
    let (pt, qt) = (g.x, g.y);
    let q = qt + a * (pt + qt);
    let p = pt - b * (pt + qt);
    match data.superlattice_kind() {
        LatticeKind::Direct => {
            let h = 3i64.extended_gcd(&a);
            let (m, n) = (h.x, h.y);
            let plus = IVec2::new(-scale * (p + q * (4 * m - 1)) / 2, scale * (n * q * b - m * q));
            let minus = IVec2::new(scale * (q * (4 * m - 1) - p) / 2, scale * (m * q + n * q * b));
            (plus, minus)
        }
        LatticeKind::Dual => {
            let plus = IVec2::new(scale * (q - p) / 2, -scale * p);
            let minus = IVec2::new(-scale * (p + q) / 2, -scale * p);
            (plus, minus)
        }
    }
}

/// `plus·v₊ + minus·v₋ − ρ₋₁`, zero when the decomposition is valid.
pub fn bezout_residual(data: &CommensurationData, cm: &CouplingMatrices, v: (IVec2, IVec2)) -> IVec2 {
    let rho = symmetry_data(data.superlattice_kind(), KPoint::K).rho_minus();
    cm.plus.apply(v.0) + cm.minus.apply(v.1) - rho
}
