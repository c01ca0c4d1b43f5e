use super::FourierPotential;
use crate::int::IVec2;
use crate::lattice::{symmetry_data, KPoint};
use crate::scalar::{cabs, Real};
use serde::Serialize;

/// Violations of the honeycomb properties, by mode.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HoneycombReport {
    pub reality: Vec<IVec2>,
    pub evenness: Vec<IVec2>,
    pub rotation: Vec<IVec2>,
}

impl HoneycombReport {
    pub fn passes(&self) -> bool {
        self.reality.is_empty() && self.evenness.is_empty() && self.rotation.is_empty()
    }

    pub fn first_violation(&self) -> Option<IVec2> {
        self.reality.iter().chain(&self.evenness).chain(&self.rotation).next().copied()
    }
}

/// Checks `Û_{−m} = conj Û_m`, `Û_m ∈ ℝ` and `Û_{Bm} = Û_m` to `1e−12`.
pub fn validate_honeycomb<T: Real>(pot: &FourierPotential<T>) -> HoneycombReport {
    let tol = T::lit(T::ORTHO_TOL);
    let b = symmetry_data(pot.lattice().kind(), KPoint::K).b();
    let mut report = HoneycombReport::default();
    for (m, c) in pot.iter() {
        if cabs(pot.get(-m) - c.conj()) > tol {
            report.reality.push(m);
        }
        if c.im.abs() > tol {
            report.evenness.push(m);
        }
        if cabs(pot.get(b.apply(m)) - c) > tol {
            report.rotation.push(m);
        }
    }
    report
}
