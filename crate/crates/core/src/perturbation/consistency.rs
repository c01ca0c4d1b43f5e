use super::coefficients::{perturbation_report, PerturbationReport};
use crate::bloch::{assemble, eigensolve, sector_decompose, PlaneWaveBasis, Sector, SectorLabel, DEFAULT_DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::potential::FourierPotential;
use crate::scalar::Real;
use nalgebra::DMatrix;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Remainder below which a point counts as exactly modelled.
const EXACT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct SectorFit<T: Real> {
    /// Fitted exponent of `|E_σ(λ) − model|` against `λ`; absent when every
    /// remainder is below 1e−12.
    pub exponent: Option<T>,
    /// `E_σ(λ) − (E0 + λE1_σ + λ²E2_σ)` per λ, `None` where tracking failed.
    pub residuals: Vec<Option<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct ConsistencyReport<T: Real> {
    pub lambdas: Vec<T>,
    pub coefficients: PerturbationReport<T>,
    pub sectors: BTreeMap<Sector, SectorFit<T>>,
    /// `(E_τ(λ) − E_1(λ))/λ²` per λ.
    pub numerical_split: Vec<Option<T>>,
    /// Per-λ tracking failures.
    pub errors: Vec<Option<String>>,
}

/// `E0 + v†(H − E0)v`; the shift cancels the large diagonal before summing.
fn shifted_rayleigh<T: Real>(h: &DMatrix<Complex<T>>, v: &nalgebra::DVector<Complex<T>>, e0: T) -> T {
    let mut shifted = h.clone();
    for i in 0..h.nrows() {
        shifted[(i, i)].re -= e0;
    }
    e0 + v.dotc(&(shifted * v)).re
}

/// Sector energies continuing `E0`, one per sector.
fn sector_energies<T: Real>(
    basis: &PlaneWaveBasis<T>,
    w: &FourierPotential<T>,
    lambda: T,
    e0: T,
) -> Result<BTreeMap<Sector, T>> {
    let h = assemble(basis, basis.k_anchor(), lambda, w)?;
    let spec = sector_decompose(&eigensolve(&h)?, basis, T::lit(DEFAULT_DEGENERACY_TOL));
    let labels = spec.sector_labels.as_ref().expect("decomposed");
    Sector::ALL
        .iter()
        .map(|&s| {
            let i = (0..spec.len())
                .filter(|&i| labels[i] == SectorLabel::Pure(s))
                .min_by(|&a, &b| {
                    (spec.eigenvalues[a] - e0).abs().partial_cmp(&(spec.eigenvalues[b] - e0).abs()).unwrap()
                })
                .ok_or(Error::MixedSectors { energy: e0.as_f64() })?;
            Ok((s, shifted_rayleigh(&h, &spec.vector(i), e0)))
        })
        .collect()
}

fn log_slope<T: Real>(points: &[(T, T)]) -> T {
    let n = T::int(points.len() as i64);
    let (sx, sy) = points.iter().fold((T::zero(), T::zero()), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((T::zero(), T::zero()), |(a, b), &(x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    num / den
}

/// Compares the spectrum at `K*` with the quadratic model for small `λ`.
///
/// Needs at least four distinct couplings in `(0, 0.1]`. The orbit sums use
/// exactly the plane waves of `basis`, so the remainder measures only the
/// neglected higher orders.
pub fn consistency_check<T: Real>(
    basis: &PlaneWaveBasis<T>,
    w: &FourierPotential<T>,
    lambdas: &[T],
) -> Result<ConsistencyReport<T>> {
    let mut distinct = lambdas.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < 4 || lambdas.iter().any(|&l| !(l > T::zero() && l <= T::lit(0.1))) {
        return Err(Error::InvalidArgument("need at least four distinct couplings in (0, 0.1]".into()));
    }
    let sym = *basis.symmetry().ok_or_else(|| Error::InvalidArgument("basis is not anchored at a zone corner".into()))?;
    let coefficients = perturbation_report(w, &sym, basis.lattice(), basis.cutoff())?;
    let e0 = coefficients.E0;
    let points: Vec<Result<BTreeMap<Sector, T>>> =
        lambdas.par_iter().map(|&l| sector_energies(basis, w, l, e0)).collect();

    let mut sectors = BTreeMap::new();
    for s in Sector::ALL {
        let residuals: Vec<Option<T>> = points
            .iter()
            .zip(lambdas)
            .map(|(p, &l)| p.as_ref().ok().map(|e| e[&s] - coefficients.model(s, l)))
            .collect();
        let usable: Vec<(T, T)> = residuals
            .iter()
            .zip(lambdas)
            .filter_map(|(r, &l)| r.map(|r| (l, r.abs())))
            .collect();
        let exponent = if usable.len() >= 2 && usable.iter().any(|&(_, r)| r > T::lit(EXACT)) {
            if usable.iter().all(|&(_, r)| r > T::zero()) {
                Some(log_slope(&usable))
            } else {
                None
            }
        } else {
            None
        };
        sectors.insert(s, SectorFit { exponent, residuals });
    }
    let numerical_split = points
        .iter()
        .zip(lambdas)
        .map(|(p, &l)| p.as_ref().ok().map(|e| (e[&Sector::Tau] - e[&Sector::One]) / (l * l)))
        .collect();
    let errors = points.iter().map(|p| p.as_ref().err().map(|e| e.to_string())).collect();
    Ok(ConsistencyReport { lambdas: lambdas.to_vec(), coefficients, sectors, numerical_split, errors })
}

/// `{1e−3, 2e−3, 4e−3, 8e−3}`.
pub fn default_lambdas<T: Real>() -> Vec<T> {
    (0..4).map(|j| T::lit(1e-3 * f64::from(1 << j))).collect()
}
