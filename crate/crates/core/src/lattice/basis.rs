use super::angle::{CommensurationData, LatticeKind};
use crate::int::IVec2;
use crate::scalar::Real;
use nalgebra::{Matrix2, Vector2};

/// A scaled triangular lattice together with its reciprocal lattice.
///
/// `kind = Direct` with scale `s` has generators `s·ν` and reciprocal
/// generators `κ/s`; `kind = Dual` has generators `s·κ` and reciprocal
/// generators `ν/s`. Here `ν` has unit-length columns `(√3/2, ±1/2)` and
/// `κ = (4π/√3)·[[1/2, 1/2], [√3/2, −√3/2]]`, so `κᵀν = 2π·I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoneycombBasis<T: Real> {
    basis: Matrix2<T>,
    dual: Matrix2<T>,
    kind: LatticeKind,
    scale: T,
}

pub(crate) fn nu<T: Real>() -> Matrix2<T> {
    let h = T::lit(3.0).sqrt() / T::lit(2.0);
    let half = T::lit(0.5);
    Matrix2::new(h, h, half, -half)
}

pub(crate) fn kappa<T: Real>() -> Matrix2<T> {
    let c = T::lit(4.0) * T::pi() / T::lit(3.0).sqrt();
    let h = T::lit(3.0).sqrt() / T::lit(2.0);
    let half = T::lit(0.5);
    Matrix2::new(half, half, h, -h) * c
}

impl<T: Real> HoneycombBasis<T> {
    pub fn unit(kind: LatticeKind) -> Self {
        Self::scaled(kind, T::one())
    }

    pub fn scaled(kind: LatticeKind, scale: T) -> Self {
        let (basis, dual) = match kind {
            LatticeKind::Direct => (nu::<T>() * scale, kappa::<T>() / scale),
            LatticeKind::Dual => (kappa::<T>() * scale, nu::<T>() / scale),
        };
        HoneycombBasis { basis, dual, kind, scale }
    }

    pub fn basis_matrix(&self) -> &Matrix2<T> {
        &self.basis
    }

    pub fn dual_matrix(&self) -> &Matrix2<T> {
        &self.dual
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// The reciprocal lattice, viewed as a lattice in its own right.
    pub fn dual_of(&self) -> Self {
        let kind = match self.kind {
            LatticeKind::Direct => LatticeKind::Dual,
            LatticeKind::Dual => LatticeKind::Direct,
        };
        Self::scaled(kind, T::one() / self.scale)
    }

    pub fn point(&self, u: IVec2) -> Vector2<T> {
        self.basis * Vector2::new(T::int(u.x), T::int(u.y))
    }

    pub fn dual_point(&self, m: IVec2) -> Vector2<T> {
        self.dual * Vector2::new(T::int(m.x), T::int(m.y))
    }

    pub fn cell_area(&self) -> T {
        self.basis.determinant().abs()
    }

    pub fn dual_cell_area(&self) -> T {
        self.dual.determinant().abs()
    }

    /// Length of the shortest nonzero reciprocal vector.
    pub fn shortest_dual(&self) -> T {
        self.dual.column(0).norm()
    }

    pub fn shortest_vector(&self) -> T {
        self.basis.column(0).norm()
    }

    /// Same kind and scale up to relative tolerance `T::MATCH_TOL`.
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.kind == other.kind
            && (self.scale - other.scale).abs() <= T::lit(T::MATCH_TOL) * self.scale.abs().max(T::one())
    }
}

/// Superlattice `R_θΛ ∩ R_{-θ}Λ` of a commensurate angle.
pub fn superlattice_basis<T: Real>(data: &CommensurationData) -> HoneycombBasis<T> {
    HoneycombBasis::scaled(data.superlattice_kind(), data.n())
}

/// The clockwise rotation by 2π/3 that acts on plane-wave indices through `B`.
pub fn rotation_120<T: Real>() -> Matrix2<T> {
    let c = T::lit(-0.5);
    let s = T::lit(3.0).sqrt() / T::lit(2.0);
    Matrix2::new(c, s, -s, c)
}

/// The two inequivalent corners `(K, K')` of the Brillouin zone, `K' = −K`.
pub fn high_symmetry_points<T: Real>(basis: &HoneycombBasis<T>) -> (Vector2<T>, Vector2<T>) {
    let third = T::one() / T::lit(3.0);
    let coords = match basis.kind {
        LatticeKind::Direct => Vector2::new(third, -third),
        LatticeKind::Dual => Vector2::new(third, third),
    };
    let k = basis.dual * coords;
    (k, -k)
}

/// Integer vectors `m` with `|center + dual·m| ≤ radius`, in lexicographic order.
pub fn indices_within<T: Real>(dual: &Matrix2<T>, center: &Vector2<T>, radius: T) -> Vec<IVec2> {
    let inv = dual.try_inverse().expect("lattice generators are independent");
    let c = -(inv * center);
    let span = |row: usize| (inv[(row, 0)].powi(2) + inv[(row, 1)].powi(2)).sqrt() * radius;
    let range = |row: usize| {
        let lo = (c[row] - span(row)).floor().to_f64().unwrap_or(0.0) as i64 - 1;
        let hi = (c[row] + span(row)).ceil().to_f64().unwrap_or(0.0) as i64 + 1;
        lo..=hi
    };
    let r2 = radius * radius;
    let mut out = Vec::new();
    for x in range(0) {
        for y in range(1) {
            let q = center + dual * Vector2::new(T::int(x), T::int(y));
            if q.norm_squared() <= r2 {
                out.push(IVec2::new(x, y));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::angle::{classify_angle, enumerate_angles};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn duality_residual(b: &HoneycombBasis<f64>) -> f64 {
        (b.dual_matrix().transpose() * b.basis_matrix() - Matrix2::identity() * (2.0 * PI)).amax()
    }

    #[test]
    fn unit_direct_lattice_is_exact() {
        let b = HoneycombBasis::<f64>::unit(LatticeKind::Direct);
        let h = 3f64.sqrt() / 2.0;
        assert_eq!(*b.basis_matrix(), Matrix2::new(h, h, 0.5, -0.5));
        assert!(duality_residual(&b) < 1e-12);
        assert_abs_diff_eq!(b.shortest_vector(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn duality_for_all_superlattices() {
        for d in enumerate_angles(10) {
            let b = superlattice_basis::<f64>(&d);
            assert!(duality_residual(&b) < 1e-12 * b.scale().max(1.0));
            let back = b.dual_of().dual_of();
            assert_abs_diff_eq!(*back.basis_matrix(), *b.basis_matrix(), epsilon = 1e-12);
            assert_abs_diff_eq!(*back.dual_matrix(), *b.dual_matrix(), epsilon = 1e-12);
        }
    }

    #[test]
    fn superlattice_of_reference_pairs() {
        let b = superlattice_basis::<f64>(&classify_angle(2, 1).unwrap());
        assert_abs_diff_eq!(*b.basis_matrix(), nu::<f64>() * 7f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(*b.dual_matrix(), kappa::<f64>() / 7f64.sqrt(), epsilon = 1e-14);

        let b = superlattice_basis::<f64>(&classify_angle(3, 1).unwrap());
        assert_eq!(b.kind(), LatticeKind::Dual);
        assert_abs_diff_eq!(b.shortest_vector(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn corners_of_unit_lattices() {
        let (k, kp) = high_symmetry_points(&HoneycombBasis::<f64>::unit(LatticeKind::Direct));
        assert_abs_diff_eq!(k, Vector2::new(0.0, 4.0 * PI / 3.0), epsilon = 1e-14);
        assert_abs_diff_eq!(kp, -k, epsilon = 0.0);

        let (k, _) = high_symmetry_points(&HoneycombBasis::<f64>::unit(LatticeKind::Dual));
        assert_abs_diff_eq!(k, Vector2::new(1.0 / 3f64.sqrt(), 0.0), epsilon = 1e-15);
    }

    #[test]
    fn corners_are_fixed_modulo_reciprocal_lattice() {
        let r = rotation_120::<f64>();
        for d in enumerate_angles(10) {
            let b = superlattice_basis::<f64>(&d);
            let (k, _) = high_symmetry_points(&b);
            let m = b.dual_matrix().try_inverse().unwrap() * ((r - Matrix2::identity()) * k);
            assert!((m - m.map(f64::round)).amax() < 1e-10);
        }
    }

    #[test]
    fn index_enumeration_matches_scan() {
        let b = HoneycombBasis::<f64>::unit(LatticeKind::Direct);
        let (k, _) = high_symmetry_points(&b);
        let r = 3.0 * b.shortest_dual();
        let got = indices_within(b.dual_matrix(), &k, r);
        let mut scan = Vec::new();
        for x in -20..=20 {
            for y in -20..=20 {
                let m = IVec2::new(x, y);
                if (k + b.dual_point(m)).norm() <= r {
                    scan.push(m);
                }
            }
        }
        assert_eq!(got, scan);
    }
}
