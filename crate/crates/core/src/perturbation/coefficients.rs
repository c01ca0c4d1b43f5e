use crate::bloch::Sector;
use crate::error::Result;
use crate::int::IVec2;
use crate::lattice::{orbit_representatives, HoneycombBasis, OrbitSet, SymmetryData};
use crate::potential::conditions::{check_denominators, ivec};
use crate::potential::{choose_s_with_zero_pattern, second_order_sum, FourierPotential};
use crate::scalar::{cabs, Real};
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex;
use serde::Serialize;
use std::collections::BTreeMap;

/// `(ψ_m^σ, W ψ_0^σ) = Σ_j σ^{−j} Ŵ_{m − (B^j·0 + ρ_j)}`, with
/// `ψ_m^σ = 3^{−1/2} Σ_ℓ σ^{−ℓ} e_{B^ℓ m + ρ_ℓ}`.
pub fn matrix_element<T: Real>(w: &FourierPotential<T>, sym: &SymmetryData, m: IVec2, sector: Sector) -> Complex<T> {
    let s = sector.value::<T>().conj();
    let mut phase = Complex::from(T::one());
    let mut acc = Complex::default();
    for j in 0..3 {
        acc += phase * w.get(m - sym.act(j, IVec2::ZERO));
        phase *= s;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct FirstOrder<T: Real> {
    pub by_sector: BTreeMap<Sector, T>,
    /// All three sectors share the value `Ŵ₀`.
    pub sector_independent: bool,
}

impl<T: Real> FirstOrder<T> {
    pub fn value(&self, sector: Sector) -> T {
        self.by_sector[&sector]
    }
}

/// `E⁽¹⁾_σ = (ψ_0^σ, W ψ_0^σ)`.
///
/// Equals `Ŵ₀` in every sector exactly when the coefficients at `−ρ₁` and
/// `−ρ₋₁` vanish; otherwise the per-sector values differ and the flag is cleared.
pub fn first_order<T: Real>(w: &FourierPotential<T>, sym: &SymmetryData) -> FirstOrder<T> {
    let by_sector: BTreeMap<Sector, T> =
        Sector::ALL.iter().map(|&s| (s, matrix_element(w, sym, IVec2::ZERO, s).re)).collect();
    let tol = T::lit(T::ZERO_TOL);
    let sector_independent = cabs(w.get(-sym.rho_plus())) <= tol && cabs(w.get(-sym.rho_minus())) <= tol;
    FirstOrder { by_sector, sector_independent }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct SecondOrder<T: Real> {
    pub by_sector: BTreeMap<Sector, T>,
    /// `E⁽²⁾_τ − E⁽²⁾_1`.
    pub split: T,
    /// No orbit contributes to the split.
    pub inconclusive: bool,
}

/// `E⁽²⁾_σ = Σ_{m ∈ S∖{0}} |(ψ_m^σ, W ψ_0^σ)|² / (|K*|² − |K*(m)|²)`.
pub fn second_order<T: Real>(
    w: &FourierPotential<T>,
    sym: &SymmetryData,
    s: &OrbitSet<T>,
    k: &Vector2<T>,
    dual: &Matrix2<T>,
) -> Result<SecondOrder<T>> {
    check_denominators(sym, s, k, dual)?;
    let e0 = k.norm_squared();
    let mut by_sector: BTreeMap<Sector, T> = Sector::ALL.iter().map(|&s| (s, T::zero())).collect();
    let mut inconclusive = true;
    for &m in &s.representatives {
        if sym.orbit(m).contains(&IVec2::ZERO) {
            continue;
        }
        let den = e0 - (k + dual * ivec::<T>(m)).norm_squared();
        let sq: Vec<T> = Sector::ALL.iter().map(|&sec| matrix_element(w, sym, m, sec).norm_sqr()).collect();
        if ((sq[1] - sq[0]) / den).abs() > T::lit(T::ZERO_TOL) {
            inconclusive = false;
        }
        for (sec, v) in Sector::ALL.iter().zip(sq) {
            *by_sector.get_mut(sec).unwrap() += v / den;
        }
    }
    let split = by_sector[&Sector::Tau] - by_sector[&Sector::One];
    Ok(SecondOrder { by_sector, split, inconclusive })
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct PerturbationReport<T: Real> {
    pub E0: T,
    pub E1: T,
    pub E1_by_sector: BTreeMap<Sector, T>,
    pub E1_sector_independent: bool,
    pub E2_by_sector: BTreeMap<Sector, T>,
    /// `E⁽²⁾_τ − E⁽²⁾_1` from the sector matrix elements.
    pub predicted_split: T,
    /// `−3 Σ Ŵ_m Ŵ_{m−ρ₋₁}/(|K*|² − |K*(m)|²)` over the zero-pattern
    /// representatives, when such representatives exist.
    pub split_from_sum: Option<T>,
    pub inconclusive_flag: bool,
    pub orbit_count: usize,
}

/// Coefficients of `E_σ(λ)` at `K*` with the orbit sum truncated at `cutoff`.
pub fn perturbation_report<T: Real>(
    w: &FourierPotential<T>,
    sym: &SymmetryData,
    lattice: &HoneycombBasis<T>,
    cutoff: T,
) -> Result<PerturbationReport<T>> {
    let k = sym.anchor(lattice);
    let dual = lattice.dual_matrix();
    let s = orbit_representatives(sym, lattice, &k, cutoff);
    let first = first_order(w, sym);
    let second = second_order(w, sym, &s, &k, dual)?;
    let split_from_sum = match choose_s_with_zero_pattern(w, sym, &s) {
        Ok(zs) => Some(-T::lit(3.0) * second_order_sum(w, sym, &zs, &k, dual)?.total.re),
        Err(_) => None,
    };
    Ok(PerturbationReport {
        E0: k.norm_squared(),
        E1: first.value(Sector::One),
        E1_by_sector: first.by_sector,
        E1_sector_independent: first.sector_independent,
        E2_by_sector: second.by_sector,
        predicted_split: second.split,
        split_from_sum,
        inconclusive_flag: second.inconclusive,
        orbit_count: s.len(),
    })
}

impl<T: Real> PerturbationReport<T> {
    /// `E0 + λE1_σ + λ²E2_σ`.
    pub fn model(&self, sector: Sector, lambda: T) -> T {
        self.E0 + lambda * self.E1_by_sector[&sector] + lambda * lambda * self.E2_by_sector[&sector]
    }
}
