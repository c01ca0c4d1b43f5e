use crate::error::{Error, Result};
use crate::int::IVec2;
use crate::lattice::{indices_within, HoneycombBasis, SymmetryData};
use crate::scalar::Real;
use nalgebra::{Matrix2, Vector2};
use std::collections::HashMap;

/// Finite set of plane waves `e^{i⟨k + κ̃m, x⟩}` used to truncate a Bloch problem.
#[derive(Debug, Clone)]
pub struct PlaneWaveBasis<T: Real> {
    indices: Vec<IVec2>,
    position: HashMap<IVec2, usize>,
    k_anchor: Vector2<T>,
    lattice: HoneycombBasis<T>,
    cutoff: T,
    sym: Option<SymmetryData>,
    rotation_perm: Option<Vec<usize>>,
}

impl<T: Real> PlaneWaveBasis<T> {
    fn from_indices(
        indices: Vec<IVec2>,
        k_anchor: Vector2<T>,
        lattice: HoneycombBasis<T>,
        cutoff: T,
        sym: Option<SymmetryData>,
    ) -> Self {
        let position = indices.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut out = PlaneWaveBasis { indices, position, k_anchor, lattice, cutoff, sym, rotation_perm: None };
        if let Some(s) = sym {
            let perm = out.indices.iter().map(|&m| out.position[&s.rotate(m)]).collect();
            out.rotation_perm = Some(perm);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[IVec2] {
        &self.indices
    }

    pub fn position(&self, m: IVec2) -> Option<usize> {
        self.position.get(&m).copied()
    }

    pub fn k_anchor(&self) -> &Vector2<T> {
        &self.k_anchor
    }

    pub fn dual(&self) -> &Matrix2<T> {
        self.lattice.dual_matrix()
    }

    pub fn lattice(&self) -> &HoneycombBasis<T> {
        &self.lattice
    }

    pub fn cutoff(&self) -> T {
        self.cutoff
    }

    pub fn symmetry(&self) -> Option<&SymmetryData> {
        self.sym.as_ref()
    }

    /// `perm[i]` is the position of `B m_i + ρ₁`.
    pub fn rotation_perm(&self) -> Option<&[usize]> {
        self.rotation_perm.as_deref()
    }

    /// `k + κ̃ m_i`.
    pub fn momentum(&self, k: &Vector2<T>, i: usize) -> Vector2<T> {
        k + self.lattice.dual_point(self.indices[i])
    }

    /// Same plane waves listed in the order `order[0], order[1], …`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let indices = order.iter().map(|&i| self.indices[i]).collect();
        Self::from_indices(indices, self.k_anchor, self.lattice, self.cutoff, self.sym)
    }
}

fn sort_by_momentum<T: Real>(indices: &mut [IVec2], lattice: &HoneycombBasis<T>, k: &Vector2<T>) {
    let norm = |m: &IVec2| (k + lattice.dual_point(*m)).norm_squared();
    indices.sort_by(|p, q| norm(p).partial_cmp(&norm(q)).unwrap().then(p.cmp(q)));
}

/// Plane waves with `|K* + κ̃m| ≤ shell_cutoff`, closed under the rotation orbit.
pub fn build_basis<T: Real>(
    sym: &SymmetryData,
    lattice: &HoneycombBasis<T>,
    k_star: &Vector2<T>,
    shell_cutoff: T,
) -> Result<PlaneWaveBasis<T>> {
    if !(shell_cutoff > k_star.norm()) {
        return Err(Error::InvalidArgument(format!(
            "basis cutoff {} does not exceed |K*| = {}",
            shell_cutoff.as_f64(),
            k_star.norm().as_f64()
        )));
    }
    check_size_estimate(lattice, shell_cutoff)?;
    let mut set: Vec<IVec2> = indices_within(lattice.dual_matrix(), k_star, shell_cutoff)
        .into_iter()
        .flat_map(|m| sym.orbit(m))
        .collect();
    set.sort();
    set.dedup();
    sort_by_momentum(&mut set, lattice, k_star);
    Ok(PlaneWaveBasis::from_indices(set, *k_star, *lattice, shell_cutoff, Some(*sym)))
}

/// Plane waves with `|k + κ̃m| ≤ cutoff`, without any symmetry bookkeeping.
pub fn plain_basis<T: Real>(lattice: &HoneycombBasis<T>, k: &Vector2<T>, cutoff: T) -> Result<PlaneWaveBasis<T>> {
    check_size_estimate(lattice, cutoff)?;
    let mut set = indices_within(lattice.dual_matrix(), k, cutoff);
    sort_by_momentum(&mut set, lattice, k);
    Ok(PlaneWaveBasis::from_indices(set, *k, *lattice, cutoff, None))
}

/// Refuses radii whose disc holds far more lattice points than the eigensolver
/// accepts, before enumerating them.
fn check_size_estimate<T: Real>(lattice: &HoneycombBasis<T>, cutoff: T) -> Result<()> {
    let cell = lattice.dual_matrix().determinant().abs();
    let estimate = (T::pi() * cutoff * cutoff / cell).as_f64();
    let limit = super::MAX_DIMENSION;
    if estimate > 2.0 * limit as f64 {
        Err(Error::DimensionGuard { dim: estimate.min(usize::MAX as f64) as usize, limit })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{classify_angle, superlattice_basis, symmetry_data, KPoint, LatticeKind};

    #[test]
    fn smallest_basis_is_origin_orbit() {
        let lat = HoneycombBasis::<f64>::unit(LatticeKind::Direct);
        let sym = symmetry_data(LatticeKind::Direct, KPoint::K);
        let k = sym.anchor(&lat);
        let b = build_basis(&sym, &lat, &k, k.norm() * 1.001).unwrap();
        let mut got = b.indices().to_vec();
        got.sort();
        let mut want = sym.orbit(IVec2::ZERO).to_vec();
        want.sort();
        assert_eq!(got, want);
        assert_eq!(want[1], IVec2::ZERO);
        assert!(want.contains(&(sym.b().apply(sym.rho_plus()) + sym.rho_plus())));
        let p = b.rotation_perm().unwrap();
        assert!((0..3).all(|i| p[i] != i && p[p[p[i]]] == i));
    }

    #[test]
    fn permutation_has_order_three_and_preserves_length() {
        let d = classify_angle(2, 1).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        for kp in [KPoint::K, KPoint::KPrime] {
            let sym = symmetry_data(lat.kind(), kp);
            let k = sym.anchor(&lat);
            let b = build_basis(&sym, &lat, &k, 8.0 * lat.shortest_dual()).unwrap();
            let p = b.rotation_perm().unwrap();
            for i in 0..b.len() {
                assert_eq!(p[p[p[i]]], i);
                let d = (b.momentum(&k, i).norm() - b.momentum(&k, p[i]).norm()).abs();
                assert!(d < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_cutoff_inside_corner() {
        let lat = HoneycombBasis::<f64>::unit(LatticeKind::Dual);
        let sym = symmetry_data(LatticeKind::Dual, KPoint::K);
        let k = sym.anchor(&lat);
        assert!(build_basis(&sym, &lat, &k, 0.5 * k.norm()).is_err());
    }
}
