use super::spectrum::{eigensolve, sector_decompose, BlochSpectrum, Sector, SectorLabel};
use super::{assemble, PlaneWaveBasis};
use crate::error::{Error, Result};
use crate::potential::FourierPotential;
use crate::scalar::{cabs, Real};
use nalgebra::{DMatrix, DVector, Vector2};
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How the second Dirac eigenvector was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Partner {
    /// Coefficient-wise conjugate of `Φ₁`, itself an eigenvector (even potentials).
    Conjugate,
    /// The `τ̄` eigenvector of the cluster (potentials without inversion symmetry).
    SectorVector,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DiracReport<T: Real> {
    pub E0: T,
    pub multiplicity: usize,
    pub v_d_formula: Complex<T>,
    pub v_d_magnitude: T,
    pub cone_fit_slope: Option<T>,
    pub cone_fit_residual: Option<T>,
    pub lambda: T,
    pub K_star: [T; 2],
    pub separation_from_sector1: Option<T>,
    pub partner: Partner,
    pub basis_size: usize,
    pub shell_cutoff: T,
}

/// Eigenvectors spanning the Dirac cluster together with the report.
#[derive(Debug, Clone)]
pub struct DiracState<T: Real> {
    pub report: DiracReport<T>,
    pub phi1: DVector<Complex<T>>,
    pub phi2: DVector<Complex<T>>,
}

/// `2 Σ_m conj(Φ₁[m]) (k + κ̃m)₁ Φ₂[m]`.
pub fn dirac_velocity<T: Real>(
    basis: &PlaneWaveBasis<T>,
    k: &Vector2<T>,
    phi1: &DVector<Complex<T>>,
    phi2: &DVector<Complex<T>>,
) -> Complex<T> {
    let mut acc = Complex::default();
    for i in 0..basis.len() {
        acc += phi1[i].conj() * phi2[i] * basis.momentum(k, i).x;
    }
    acc * T::lit(2.0)
}

fn is_eigenvector<T: Real>(h: &DMatrix<Complex<T>>, v: &DVector<Complex<T>>, e: T) -> bool {
    (h * v - v * Complex::from(e)).norm() <= T::lit(1e-8) * e.abs().max(T::one())
}

fn solve_at_anchor<T: Real>(
    basis: &PlaneWaveBasis<T>,
    w: &FourierPotential<T>,
    lambda: T,
    degeneracy_tol: T,
) -> Result<(DMatrix<Complex<T>>, BlochSpectrum<T>, Vec<std::ops::Range<usize>>)> {
    if basis.rotation_perm().is_none() {
        return Err(Error::InvalidArgument("basis is not anchored at a zone corner".into()));
    }
    let h = assemble(basis, basis.k_anchor(), lambda, w)?;
    let raw = eigensolve(&h)?;
    let clusters = raw.clusters(degeneracy_tol);
    Ok((h, sector_decompose(&raw, basis, degeneracy_tol), clusters))
}

/// Lowest cluster at `K*` carrying both `τ` and `τ̄`, with its Dirac velocity.
pub fn find_dirac_state<T: Real>(
    basis: &PlaneWaveBasis<T>,
    w: &FourierPotential<T>,
    lambda: T,
    degeneracy_tol: T,
) -> Result<DiracState<T>> {
    let (h, spec, clusters) = solve_at_anchor(basis, w, lambda, degeneracy_tol)?;
    let labels = spec.sector_labels.as_ref().expect("decomposed");
    let k = *basis.k_anchor();
    for range in clusters {
        let find = |s: Sector| range.clone().find(|&i| labels[i] == SectorLabel::Pure(s));
        let (Some(t), Some(tb)) = (find(Sector::Tau), find(Sector::TauBar)) else {
            continue;
        };
        if range.clone().any(|i| labels[i] == SectorLabel::Mixed) {
            return Err(Error::MixedSectors { energy: spec.eigenvalues[range.start].as_f64() });
        }
        let e0 = spec.eigenvalues[t];
        let phi1 = spec.vector(t);
        let conj = phi1.map(|z| z.conj());
        let (phi2, partner) = if is_eigenvector(&h, &conj, e0) {
            (conj, Partner::Conjugate)
        } else {
            (spec.vector(tb), Partner::SectorVector)
        };
        let v = dirac_velocity(basis, &k, &phi1, &phi2);
        let separation = (0..spec.len())
            .filter(|&i| labels[i] == SectorLabel::Pure(Sector::One))
            .map(|i| (spec.eigenvalues[i] - e0).abs())
            .min_by(|a, b| a.partial_cmp(b).unwrap());
        let report = DiracReport {
            E0: e0,
            multiplicity: range.len(),
            v_d_formula: v,
            v_d_magnitude: cabs(v),
            cone_fit_slope: None,
            cone_fit_residual: None,
            lambda,
            K_star: [k.x, k.y],
            separation_from_sector1: separation,
            partner,
            basis_size: basis.len(),
            shell_cutoff: basis.cutoff(),
        };
        return Ok(DiracState { report, phi1, phi2 });
    }
    Err(Error::NoTwoFoldCluster)
}

pub fn find_dirac<T: Real>(
    basis: &PlaneWaveBasis<T>,
    w: &FourierPotential<T>,
    lambda: T,
    degeneracy_tol: T,
) -> Result<DiracReport<T>> {
    find_dirac_state(basis, w, lambda, degeneracy_tol).map(|s| s.report)
}

/// Ring radius small against both the sector-1 gap and the zone size.
pub fn suggest_ring_radius<T: Real>(report: &DiracReport<T>, basis: &PlaneWaveBasis<T>) -> T {
    let cap = basis.lattice().shortest_dual() / T::lit(20.0);
    match report.separation_from_sector1 {
        Some(gap) if report.v_d_magnitude > T::zero() && gap > T::zero() => {
            (T::lit(0.01) * gap / report.v_d_magnitude).min(cap)
        }
        _ => cap,
    }
}

/// Least-squares slope of `|E± − E₀|` against `|k − K*|` on two rings.
///
/// Returns the slope and the largest relative deviation from the linear
/// model. The two bands nearest `E₀` are accepted only while every other
/// band stays outside twice the cone width and both eigenvectors keep more
/// than 0.9 of their weight in the `E₀` eigenspace at `K*`.
#[allow(non_snake_case)]
pub fn cone_fit<T: Real>(
    basis: &PlaneWaveBasis<T>,
    w: &FourierPotential<T>,
    lambda: T,
    E0: T,
    K_star: &Vector2<T>,
    ring_radius: T,
    n_angles: usize,
) -> Result<(T, T)> {
    if n_angles < 8 {
        return Err(Error::InvalidArgument(format!("n_angles = {n_angles} is below 8")));
    }
    if !(ring_radius > T::zero()) {
        return Err(Error::InvalidArgument("ring radius must be positive".into()));
    }
    let h0 = assemble(basis, K_star, lambda, w)?;
    let spec0 = eigensolve(&h0)?;
    let near0 = nearest_two(&spec0.eigenvalues, E0);
    let anchor = DMatrix::from_columns(&[spec0.vector(near0[0]), spec0.vector(near0[1])]);
    let guard = Error::BandTracking { radius: ring_radius.as_f64() };
    if (spec0.eigenvalues[near0[1]] - E0).abs() > T::lit(1e-8) * E0.abs().max(T::one()) {
        return Err(guard);
    }

    let mut samples = Vec::new();
    for r in [ring_radius, ring_radius / T::lit(2.0)] {
        for j in 0..n_angles {
            let phi = T::two_pi() * T::int(j as i64) / T::int(n_angles as i64);
            let k = K_star + Vector2::new(phi.cos(), phi.sin()) * r;
            let spec = eigensolve(&assemble(basis, &k, lambda, w)?)?;
            let idx = nearest_two(&spec.eigenvalues, E0);
            let d: Vec<T> = idx.iter().map(|&i| (spec.eigenvalues[i] - E0).abs()).collect();
            let width = d[0].max(d[1]);
            let third = spec
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(i, _)| !idx.contains(i))
                .map(|(_, &e)| (e - E0).abs())
                .fold(T::max_value().unwrap_or_else(T::one), |a, b| a.min(b));
            if third < T::lit(2.0) * width {
                return Err(guard);
            }
            for &i in &idx {
                let overlap = (anchor.adjoint() * spec.vector(i)).norm_squared();
                if overlap <= T::lit(0.9) {
                    return Err(guard);
                }
            }
            samples.extend(d.into_iter().map(|x| (r, x)));
        }
    }
    let num = samples.iter().fold(T::zero(), |acc, &(r, d)| acc + r * d);
    let den = samples.iter().fold(T::zero(), |acc, &(r, _)| acc + r * r);
    let slope = num / den;
    let residual = samples
        .iter()
        .map(|&(r, d)| ((d - slope * r) / (slope * r)).abs())
        .fold(T::zero(), |a, b| a.max(b));
    Ok((slope, residual))
}

fn nearest_two<T: Real>(values: &[T], e0: T) -> [usize; 2] {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| (values[a] - e0).abs().partial_cmp(&(values[b] - e0).abs()).unwrap().then(a.cmp(&b)));
    let mut two = [order[0], order[1]];
    two.sort();
    two
}

/// Outcome of Dirac detection at one coupling strength.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
#[allow(non_snake_case)]
pub struct ScanPoint<T: Real> {
    pub lambda: T,
    pub multiplicity: Option<usize>,
    pub E0: Option<T>,
    pub v_d_magnitude: Option<T>,
    pub error: Option<String>,
}

/// Dirac detection over a grid of `λ`; failures are recorded, not raised.
pub fn lambda_scan<T: Real>(
    basis: &PlaneWaveBasis<T>,
    w: &FourierPotential<T>,
    lambdas: &[T],
    degeneracy_tol: T,
) -> Vec<ScanPoint<T>> {
    lambdas
        .par_iter()
        .map(|&lambda| match find_dirac(basis, w, lambda, degeneracy_tol) {
            Ok(r) => ScanPoint {
                lambda,
                multiplicity: Some(r.multiplicity),
                E0: Some(r.E0),
                v_d_magnitude: Some(r.v_d_magnitude),
                error: None,
            },
            Err(e) => ScanPoint { lambda, multiplicity: None, E0: None, v_d_magnitude: None, error: Some(e.to_string()) },
        })
        .collect()
}
