//! End-to-end runs shared by the command-line front end and its tests.

use crate::bloch::{build_basis, cone_fit, find_dirac, suggest_ring_radius, DiracReport, DEFAULT_DEGENERACY_TOL};
use crate::error::Result;
use crate::lattice::{orbit_representatives, superlattice_basis, symmetry_data, AngleRecord, CommensurationData, KPoint};
use crate::potential::{
    choose_s_with_zero_pattern, fw_condition, second_order_sum, twist, FourierPotential, Stacking, TwistSpec,
};
use crate::scalar::{cabs, Real};
use crate::IVec2;
use nalgebra::Vector2;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Which sufficient condition for a two-fold Dirac eigenvalue was met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "W(-rho_-1) != 0")]
    FirstOrder,
    #[serde(rename = "second-order sum != 0")]
    SecondOrderSum,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub fw_coefficient: Complex<f64>,
    pub zero_pattern: bool,
    /// First orbit without a vanishing `Ŵ_{m−ρ₁}`, when the selection failed.
    pub zero_pattern_failure: Option<[IVec2; 3]>,
    pub second_order_sum: Option<Complex<f64>>,
    pub second_order_terms: usize,
    pub sign_definite: bool,
    pub tail_bound: Option<f64>,
    pub holds: Condition,
}

/// Plane-wave truncation and cone sampling for one Dirac run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSettings {
    pub lambda: f64,
    /// Basis radius in units of the shortest superlattice dual vector.
    pub cutoff_shells: f64,
    /// Fixed ring radius; chosen from the spectral gap when absent.
    pub ring_radius: Option<f64>,
    pub n_angles: usize,
    pub k_point: KPoint,
}

impl Default for DiracSettings {
    fn default() -> Self {
        DiracSettings { lambda: 0.5, cutoff_shells: 8.0, ring_radius: None, n_angles: 16, k_point: KPoint::K }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracRun {
    pub angle: AngleRecord,
    pub stacking: Option<Stacking>,
    pub cutoff_shells: f64,
    pub conditions: ConditionReport,
    pub dirac: Option<DiracReport<f64>>,
    /// Why no Dirac cluster was reported; not a failure of the run.
    pub dirac_state: Option<String>,
    pub ring_radius: Option<f64>,
    pub cone_fit_error: Option<String>,
}

/// Sufficient-condition checks at `K*` with orbits inside `cutoff`.
pub fn check_conditions(w: &FourierPotential<f64>, data: &CommensurationData, k_point: KPoint, cutoff: f64) -> Result<ConditionReport> {
    let lat = superlattice_basis::<f64>(data);
    let sym = symmetry_data(lat.kind(), k_point);
    let k = sym.anchor(&lat);
    let fw = fw_condition(w, &sym);
    let orbits = orbit_representatives(&sym, &lat, &k, cutoff);
    let (zero_pattern, failure, sum) = match choose_s_with_zero_pattern(w, &sym, &orbits) {
        Ok(s) => (true, None, Some(second_order_sum(w, &sym, &s, &k, lat.dual_matrix())?)),
        Err(crate::Error::ZeroPatternFailure { orbit }) => (false, Some(orbit), None),
        Err(e) => return Err(e),
    };
    let tol = f64::ZERO_TOL;
    let holds = if cabs(fw) > tol {
        Condition::FirstOrder
    } else if sum.as_ref().is_some_and(|s| !s.inconclusive && cabs(s.total) > tol) {
        Condition::SecondOrderSum
    } else {
        Condition::Inconclusive
    };
    Ok(ConditionReport {
        fw_coefficient: fw,
        zero_pattern,
        zero_pattern_failure: failure,
        second_order_sum: sum.as_ref().map(|s| s.total),
        second_order_terms: sum.as_ref().map_or(0, |s| s.terms.len()),
        sign_definite: sum.as_ref().is_some_and(|s| s.sign_definite()),
        tail_bound: sum.as_ref().map(|s| s.tail_bound),
        holds,
    })
}

/// Conditions, Dirac detection and cone fit for an already twisted potential.
pub fn dirac_run(
    data: &CommensurationData,
    stacking: Option<Stacking>,
    w: &FourierPotential<f64>,
    settings: &DiracSettings,
) -> Result<DiracRun> {
    let lat = superlattice_basis::<f64>(data);
    let sym = symmetry_data(lat.kind(), settings.k_point);
    let k = sym.anchor(&lat);
    let cutoff = settings.cutoff_shells * lat.shortest_dual();
    let basis = build_basis(&sym, &lat, &k, cutoff)?;
    let conditions = check_conditions(w, data, settings.k_point, cutoff)?;
    let mut run = DiracRun {
        angle: data.record(),
        stacking,
        cutoff_shells: settings.cutoff_shells,
        conditions,
        dirac: None,
        dirac_state: None,
        ring_radius: None,
        cone_fit_error: None,
    };
    let mut report = match find_dirac(&basis, w, settings.lambda, DEFAULT_DEGENERACY_TOL) {
        Ok(r) => r,
        Err(e) if e.class() == crate::ErrorClass::Compute => {
            run.dirac_state = Some(e.to_string());
            return Ok(run);
        }
        Err(e) => return Err(e),
    };
    let radius = settings.ring_radius.unwrap_or_else(|| suggest_ring_radius(&report, &basis));
    run.ring_radius = Some(radius);
    let k_star = Vector2::new(report.K_star[0], report.K_star[1]);
    match cone_fit(&basis, w, settings.lambda, report.E0, &k_star, radius, settings.n_angles) {
        Ok((slope, residual)) => {
            report.cone_fit_slope = Some(slope);
            report.cone_fit_residual = Some(residual);
        }
        Err(e) if e.class() == crate::ErrorClass::Compute => run.cone_fit_error = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    run.dirac = Some(report);
    Ok(run)
}

/// Twists a unit-lattice honeycomb potential and runs [`dirac_run`].
pub fn twist_and_run(
    v: &FourierPotential<f64>,
    data: &CommensurationData,
    stacking: Stacking,
    settings: &DiracSettings,
) -> Result<DiracRun> {
    let w = twist(v, &TwistSpec::additive(*data, stacking))?;
    dirac_run(data, Some(stacking), &w, settings)
}
