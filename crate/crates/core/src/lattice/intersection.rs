use super::angle::{rotation_matrix, CommensurationData, LatticeKind};
use super::basis::{indices_within, superlattice_basis, HoneycombBasis};
use crate::error::{Error, Result};
use crate::scalar::Real;
use nalgebra::Vector2;

/// Largest admissible search radius, in units of the shortest superlattice vector.
pub const RADIUS_GUARD: f64 = 5.0;

/// Points of `R_θΛ ∩ R_{-θ}Λ` within `radius`, found by rotating `Λ` and
/// rounding each image back onto the oppositely rotated lattice.
pub fn brute_force_intersection<T: Real>(data: &CommensurationData, radius: T) -> Result<Vec<Vector2<T>>> {
    let limit = T::lit(RADIUS_GUARD) * superlattice_basis::<T>(data).shortest_vector();
    if radius > limit {
        return Err(Error::RadiusGuard { radius: radius.as_f64(), limit: limit.as_f64() });
    }
    let unit = HoneycombBasis::<T>::unit(LatticeKind::Direct);
    let nu = *unit.basis_matrix();
    let nu_inv = nu.try_inverse().expect("independent generators");
    let r = rotation_matrix::<T>(data);
    let tol = T::lit(T::MATCH_TOL);
    // |R_θ ν u| = |ν u|, so the candidates are the unit-lattice points in the disk
    let mut out: Vec<Vector2<T>> = indices_within(&nu, &Vector2::zeros(), radius)
        .into_iter()
        .filter_map(|u| {
            let x = r * unit.point(u);
            let w = nu_inv * (r * x);
            let snapped = w.map(|c| c.round());
            ((nu * (w - snapped)).norm() < tol).then_some(x)
        })
        .collect();
    sort_points(&mut out);
    Ok(out)
}

/// All points of `lattice` within `radius`.
pub fn lattice_points_in_disk<T: Real>(lattice: &HoneycombBasis<T>, radius: T) -> Vec<Vector2<T>> {
    let mut out: Vec<_> = indices_within(lattice.basis_matrix(), &Vector2::zeros(), radius)
        .into_iter()
        .map(|u| lattice.point(u))
        .collect();
    sort_points(&mut out);
    out
}

fn sort_points<T: Real>(pts: &mut [Vector2<T>]) {
    pts.sort_by(|p, q| {
        p.norm_squared()
            .partial_cmp(&q.norm_squared())
            .unwrap()
            .then(p.y.atan2(p.x).partial_cmp(&q.y.atan2(q.x)).unwrap())
    });
}

/// Set equality of two point clouds inside a disk of radius `radius`, matching
/// to `tol`. Points within `tol` of the boundary may appear in either set alone.
pub fn same_points_in_disk<T: Real>(lhs: &[Vector2<T>], rhs: &[Vector2<T>], radius: T, tol: T) -> bool {
    let inner = |p: &&Vector2<T>| p.norm() < radius - tol;
    let covered = |a: &[Vector2<T>], b: &[Vector2<T>]| {
        a.iter().filter(inner).all(|p| b.iter().any(|q| (p - q).norm() < tol))
    };
    covered(lhs, rhs) && covered(rhs, lhs)
}
