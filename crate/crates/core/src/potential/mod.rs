//! Sparse Fourier-space potentials and their twisted bilayer versions.

pub(crate) mod conditions;
mod cosine;
mod io;
mod twist;
mod validate;

pub use conditions::{
    choose_s_with_zero_pattern, fw_condition, second_order_sum, support_check, SecondOrderSum, SupportReport,
};
pub use cosine::{build_cosine_family, reference_potential, Sign};
pub use io::{ModeRecord, OrbitRecord, PotentialFile, TwistedDump};
pub use twist::{twist, Combiner, Stacking, TwistSpec};
pub use validate::{validate_honeycomb, HoneycombReport};

use crate::int::IVec2;
use crate::lattice::HoneycombBasis;
use crate::scalar::{cabs, Real};
use nalgebra::Vector2;
use num_complex::Complex;
use std::collections::BTreeMap;

/// A trigonometric polynomial `U(x) = Σ_m Û_m e^{i⟨κ̃m, x⟩}` on a lattice.
///
/// Coefficients are keyed by reciprocal-lattice index and kept in
/// lexicographic order. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPotential<T: Real> {
    lattice: HoneycombBasis<T>,
    coefficients: BTreeMap<IVec2, Complex<T>>,
    honeycomb: bool,
    decay_note: Option<T>,
}

impl<T: Real> FourierPotential<T> {
    pub fn zero(lattice: HoneycombBasis<T>) -> Self {
        FourierPotential { lattice, coefficients: BTreeMap::new(), honeycomb: false, decay_note: None }
    }

    pub fn from_coefficients(lattice: HoneycombBasis<T>, coefficients: impl IntoIterator<Item = (IVec2, Complex<T>)>) -> Self {
        let mut out = Self::zero(lattice);
        for (m, c) in coefficients {
            out.add(m, c);
        }
        out
    }

    pub fn lattice(&self) -> &HoneycombBasis<T> {
        &self.lattice
    }

    pub fn get(&self, m: IVec2) -> Complex<T> {
        self.coefficients.get(&m).copied().unwrap_or_else(Complex::default)
    }

    /// Accumulates `c` into the coefficient at `m`.
    pub fn add(&mut self, m: IVec2, c: Complex<T>) {
        let slot = self.coefficients.entry(m).or_default();
        *slot += c;
        if slot.re == T::zero() && slot.im == T::zero() {
            self.coefficients.remove(&m);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (IVec2, Complex<T>)> + '_ {
        self.coefficients.iter().map(|(m, c)| (*m, *c))
    }

    pub fn modes(&self) -> impl Iterator<Item = IVec2> + '_ {
        self.coefficients.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `|Û_m| ≤ T::ZERO_TOL`.
    pub fn is_negligible(&self, m: IVec2) -> bool {
        cabs(self.get(m)) <= T::lit(T::ZERO_TOL)
    }

    pub fn is_honeycomb(&self) -> bool {
        self.honeycomb
    }

    pub(crate) fn set_honeycomb(&mut self, flag: bool) {
        self.honeycomb = flag;
    }

    pub fn decay_note(&self) -> Option<T> {
        self.decay_note
    }

    pub fn with_decay_note(mut self, rate: T) -> Self {
        self.decay_note = Some(rate);
        self
    }

    /// `Σ |Û_m|`, an upper bound for `‖U‖_∞`.
    pub fn l1_norm(&self) -> T {
        self.coefficients.values().fold(T::zero(), |acc, c| acc + cabs(*c))
    }

    /// `Σ |Û_m|·|κ̃m|`, an upper bound for `‖∇U‖_∞`.
    pub fn gradient_l1_norm(&self) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, (m, c)| acc + cabs(*c) * self.lattice.dual_point(*m).norm())
    }

    pub fn scaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        for c in out.coefficients.values_mut() {
            *c *= factor;
        }
        out.coefficients.retain(|_, c| c.re != T::zero() || c.im != T::zero());
        out
    }

    pub fn evaluate(&self, x: &Vector2<T>) -> Complex<T> {
        self.coefficients.iter().fold(Complex::default(), |acc, (m, c)| {
            let phase = self.lattice.dual_point(*m).dot(x);
            acc + *c * Complex::new(phase.cos(), phase.sin())
        })
    }
}
