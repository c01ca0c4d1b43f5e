use super::angle::LatticeKind;
use super::basis::{indices_within, HoneycombBasis};
use crate::int::{IMat2, IVec2};
use crate::scalar::Real;
use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KPoint {
    K,
    KPrime,
}

/// Affine action `m ↦ B m + ρ₁` of the 2π/3 rotation on plane-wave indices
/// anchored at a zone corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetryData {
    b: IMat2,
    rho_plus: IVec2,
    rho_minus: IVec2,
    kind: LatticeKind,
    k_point: KPoint,
}

pub fn symmetry_data(kind: LatticeKind, k_point: KPoint) -> SymmetryData {
    let (b, rho_plus, rho_minus) = match kind {
        LatticeKind::Direct => (IMat2::new([[0, -1], [1, -1]]), IVec2::new(0, 1), IVec2::new(-1, 0)),
        LatticeKind::Dual => (IMat2::new([[-1, -1], [1, 0]]), IVec2::new(-1, 0), IVec2::new(0, -1)),
    };
    let (rho_plus, rho_minus) = match k_point {
        KPoint::K => (rho_plus, rho_minus),
        KPoint::KPrime => (-rho_plus, -rho_minus),
    };
    SymmetryData { b, rho_plus, rho_minus, kind, k_point }
}

impl SymmetryData {
    pub fn b(&self) -> IMat2 {
        self.b
    }

    pub fn rho_plus(&self) -> IVec2 {
        self.rho_plus
    }

    pub fn rho_minus(&self) -> IVec2 {
        self.rho_minus
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn k_point(&self) -> KPoint {
        self.k_point
    }

    /// `ρ_ℓ` for `ℓ ∈ {−1, 0, 1}` (indices taken modulo 3).
    pub fn rho(&self, l: i32) -> IVec2 {
        match l.rem_euclid(3) {
            0 => IVec2::ZERO,
            1 => self.rho_plus,
            _ => self.rho_minus,
        }
    }

    /// `B^ℓ` with `ℓ` taken modulo 3.
    pub fn b_pow(&self, l: i32) -> IMat2 {
        self.b.pow(l.rem_euclid(3) as u32)
    }

    /// `B^ℓ m + ρ_ℓ`.
    pub fn act(&self, l: i32, m: IVec2) -> IVec2 {
        self.b_pow(l).apply(m) + self.rho(l)
    }

    pub fn rotate(&self, m: IVec2) -> IVec2 {
        self.act(1, m)
    }

    /// `[m, Bm + ρ₁, B²m + ρ₋₁]`.
    pub fn orbit(&self, m: IVec2) -> [IVec2; 3] {
        [m, self.act(1, m), self.act(-1, m)]
    }

    /// Canonical member of the orbit: `0` for the orbit through the origin,
    /// otherwise the lexicographically smallest member.
    pub fn canonical(&self, m: IVec2) -> IVec2 {
        let orbit = self.orbit(m);
        if orbit.contains(&IVec2::ZERO) {
            IVec2::ZERO
        } else {
            orbit.into_iter().min().unwrap()
        }
    }

    /// Corner `K` or `K'` of the given lattice matching this data.
    pub fn anchor<T: Real>(&self, lattice: &HoneycombBasis<T>) -> Vector2<T> {
        let (k, kp) = super::basis::high_symmetry_points(lattice);
        match self.k_point {
            KPoint::K => k,
            KPoint::KPrime => kp,
        }
    }
}

/// One representative per rotation orbit of indices within a cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSet<T: Real> {
    pub representatives: Vec<IVec2>,
    pub cutoff_radius: T,
}

impl<T: Real> OrbitSet<T> {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Partitions `{m : |K + κ̃m| ≤ cutoff}` into rotation orbits, sorted by
/// `|K + κ̃m|` and then lexicographically.
pub fn orbit_representatives<T: Real>(
    sym: &SymmetryData,
    basis: &HoneycombBasis<T>,
    k: &Vector2<T>,
    cutoff: T,
) -> OrbitSet<T> {
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for m in indices_within(basis.dual_matrix(), k, cutoff) {
        if seen.contains(&m) {
            continue;
        }
        seen.extend(sym.orbit(m));
        reps.push(sym.canonical(m));
    }
    let norm = |m: &IVec2| (k + basis.dual_point(*m)).norm_squared();
    reps.sort_by(|p, q| norm(p).partial_cmp(&norm(q)).unwrap().then(p.cmp(q)));
    OrbitSet { representatives: reps, cutoff_radius: cutoff }
}
