use super::{validate_honeycomb, FourierPotential};
use crate::error::{Error, Result};
use crate::int::IVec2;
use crate::lattice::{symmetry_data, HoneycombBasis, KPoint, LatticeKind};
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// `V(x) = ±Σ_m a_m Σ_ℓ cos⟨κB^ℓm, x⟩` on the unit lattice.
///
/// Each listed `m` contributes `±a_m/2` at every index `±B^ℓm`; contributions
/// landing on the same index add.
pub fn build_cosine_family<T: Real>(orbit_coeffs: &[(IVec2, T)], sign: Sign) -> Result<FourierPotential<T>> {
    let b = symmetry_data(LatticeKind::Direct, KPoint::K).b();
    let mut classes = HashSet::new();
    let mut pot = FourierPotential::zero(HoneycombBasis::unit(LatticeKind::Direct));
    for &(m, a) in orbit_coeffs {
        if !(a > T::zero()) {
            return Err(Error::InvalidPotential(format!("coefficient for {m} must be positive")));
        }
        let orbit = [m, b.apply(m), b.pow(2).apply(m)];
        if !classes.insert(*orbit.iter().min().unwrap()) {
            return Err(Error::InvalidPotential(format!("{m} repeats an earlier rotation class")));
        }
        let half = Complex::from(sign.value::<T>() * a / T::lit(2.0));
        for q in orbit {
            pot.add(q, half);
            pot.add(-q, half);
        }
    }
    let ok = validate_honeycomb(&pot).passes();
    pot.set_honeycomb(ok);
    Ok(pot)
}

/// Single rotation class through `(1, 0)` with unit amplitude.
pub fn reference_potential<T: Real>() -> FourierPotential<T> {
    build_cosine_family(&[(IVec2::new(1, 0), T::one())], Sign::Plus).expect("valid family")
}
