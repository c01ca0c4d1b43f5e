use super::PlaneWaveBasis;
use crate::error::{Error, Result};
use crate::scalar::Real;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::diag::Diag;
use faer::{c64, Mat, Par};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Largest matrix the dense eigensolver accepts.
pub const MAX_DIMENSION: usize = 4096;

/// Default relative gap below which neighbouring eigenvalues form one cluster.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Eigenvalue of the 2π/3 rotation: `1`, `τ = e^{2πi/3}` or `τ̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "tau")]
    Tau,
    #[serde(rename = "tau_bar")]
    TauBar,
}

impl Sector {
    pub const ALL: [Sector; 3] = [Sector::One, Sector::Tau, Sector::TauBar];

    pub fn value<T: Real>(self) -> Complex<T> {
        let s = T::lit(3.0).sqrt() / T::lit(2.0);
        let h = T::lit(-0.5);
        match self {
            Sector::One => Complex::new(T::one(), T::zero()),
            Sector::Tau => Complex::new(h, s),
            Sector::TauBar => Complex::new(h, -s),
        }
    }

    /// `σ + σ⁻¹`, exactly.
    pub fn trace<T: Real>(self) -> T {
        match self {
            Sector::One => T::lit(2.0),
            _ => -T::one(),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorLabel {
    Pure(Sector),
    Mixed,
}

/// Ascending eigenvalues with orthonormal eigenvectors in the columns.
#[derive(Debug, Clone)]
pub struct BlochSpectrum<T: Real> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: DMatrix<Complex<T>>,
    pub sector_labels: Option<Vec<SectorLabel>>,
}

impl<T: Real> BlochSpectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, i: usize) -> DVector<Complex<T>> {
        self.eigenvectors.column(i).into_owned()
    }

    pub fn label(&self, i: usize) -> Option<SectorLabel> {
        self.sector_labels.as_ref().map(|l| l[i])
    }

    /// Ranges of consecutive eigenvalues whose gaps are below `tol·max(1, |E|)`.
    pub fn clusters(&self, tol: T) -> Vec<std::ops::Range<usize>> {
        self.clusters_with_floor(tol, T::zero())
    }

    fn clusters_with_floor(&self, tol: T, floor: T) -> Vec<std::ops::Range<usize>> {
        let e = &self.eigenvalues;
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=e.len() {
            if i == e.len() || e[i] - e[i - 1] > (tol * e[i - 1].abs().max(T::one())).max(floor) {
                out.push(start..i);
                start = i;
            }
        }
        out
    }
}

pub(super) fn check_dimension(n: usize) -> Result<()> {
    if n > MAX_DIMENSION {
        Err(Error::DimensionGuard { dim: n, limit: MAX_DIMENSION })
    } else {
        Ok(())
    }
}

fn to_faer<T: Real>(h: &DMatrix<Complex<T>>) -> Mat<c64> {
    Mat::from_fn(h.nrows(), h.ncols(), |r, c| {
        let z = h[(r, c)];
        c64::new(z.re.as_f64(), z.im.as_f64())
    })
}

/// Hermitian eigendecomposition from the lower triangle, ascending, computed
/// in double precision on the calling thread.
fn hermitian_eigen<T: Real>(h: &DMatrix<Complex<T>>, vectors: bool) -> Result<(Vec<T>, Option<DMatrix<Complex<T>>>)> {
    let n = h.nrows();
    let a = to_faer(h);
    let mut s = Diag::<c64>::zeros(n);
    let mut u = vectors.then(|| Mat::<c64>::zeros(n, n));
    let want = if vectors { ComputeEigenvectors::Yes } else { ComputeEigenvectors::No };
    let mut buf = MemBuffer::new(self_adjoint_evd_scratch::<c64>(n, want, Par::Seq, Default::default()));
    self_adjoint_evd(
        a.as_ref(),
        s.as_mut(),
        u.as_mut().map(|u| u.as_mut()),
        Par::Seq,
        MemStack::new(&mut buf),
        Default::default(),
    )
    .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let values = (0..n).map(|i| T::lit(s[i].re)).collect();
    let vectors = u.map(|u| DMatrix::from_fn(n, n, |r, c| Complex::new(T::lit(u[(r, c)].re), T::lit(u[(r, c)].im))));
    Ok((values, vectors))
}

/// Full Hermitian eigendecomposition with orthonormal eigenvectors.
pub fn eigensolve<T: Real>(h: &DMatrix<Complex<T>>) -> Result<BlochSpectrum<T>> {
    check_dimension(h.nrows())?;
    let (eigenvalues, vectors) = hermitian_eigen(h, true)?;
    Ok(BlochSpectrum { eigenvalues, eigenvectors: vectors.expect("requested"), sector_labels: None })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues<T: Real>(h: &DMatrix<Complex<T>>) -> Result<Vec<T>> {
    check_dimension(h.nrows())?;
    Ok(hermitian_eigen(h, false)?.0)
}

/// `(ℛv)[perm[i]] = v[i]`.
pub fn apply_rotation<T: Real>(basis: &PlaneWaveBasis<T>, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
    let perm = basis.rotation_perm().expect("basis anchored at a zone corner");
    let mut out = DVector::zeros(v.len());
    for (i, &p) in perm.iter().enumerate() {
        out[p] = v[i];
    }
    out
}

/// Projection onto the `σ` eigenspace of the rotation, `(1/3)Σ_ℓ σ^{−ℓ}ℛ^ℓ`.
pub fn project_sector<T: Real>(
    basis: &PlaneWaveBasis<T>,
    v: &DVector<Complex<T>>,
    sector: Sector,
) -> DVector<Complex<T>> {
    let s = sector.value::<T>().conj();
    let r1 = apply_rotation(basis, v);
    let r2 = apply_rotation(basis, &r1);
    (v + r1 * s + r2 * (s * s)) / Complex::from(T::lit(3.0))
}

fn rotation_defect<T: Real>(basis: &PlaneWaveBasis<T>, v: &DVector<Complex<T>>, sector: Sector) -> T {
    (apply_rotation(basis, v) - v * sector.value::<T>()).norm()
}

fn nearest_sector<T: Real>(basis: &PlaneWaveBasis<T>, v: &DVector<Complex<T>>) -> (Sector, T) {
    Sector::ALL
        .iter()
        .map(|&s| (s, rotation_defect(basis, v, s)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
}

fn small_eigen<T: Real>(h: &DMatrix<Complex<T>>) -> (Vec<T>, DMatrix<Complex<T>>) {
    let (values, vectors) = hermitian_eigen(h, true).expect("eigensolver converges on a small Hermitian matrix");
    (values, vectors.expect("requested"))
}

/// Rotates each eigenvalue cluster onto rotation eigenvectors and labels them.
///
/// Inside a cluster the eigenvectors are projected onto each sector; the
/// projected span is diagonalized against the cluster eigenvalues, so a
/// coarse `degeneracy_tol` does not mix levels of one sector. A cluster whose
/// sector spans do not add up to its size keeps its vectors and is labelled
/// mixed.
///
/// Eigenvectors of levels closer than `1e−9‖H‖` carry rounding admixtures
/// near the labelling tolerance, so such levels are always treated together
/// whatever `degeneracy_tol` says.
pub fn sector_decompose<T: Real>(
    spectrum: &BlochSpectrum<T>,
    basis: &PlaneWaveBasis<T>,
    degeneracy_tol: T,
) -> BlochSpectrum<T> {
    let n = basis.len();
    let mut values = spectrum.eigenvalues.clone();
    let mut vectors = spectrum.eigenvectors.clone();
    let mut labels = vec![SectorLabel::Mixed; spectrum.len()];
    let label_tol = T::lit(1e-6);
    let spread = spectrum.eigenvalues.iter().fold(T::one(), |a, &b| a.max(b.abs()));
    for range in spectrum.clusters_with_floor(degeneracy_tol, T::lit(1e-9) * spread) {
        let c = spectrum.eigenvectors.columns(range.start, range.len()).into_owned();
        let e: Vec<T> = spectrum.eigenvalues[range.clone()].to_vec();
        if range.len() == 1 {
            let v = c.column(0).into_owned();
            let (s, defect) = nearest_sector(basis, &v);
            labels[range.start] = if defect <= label_tol { SectorLabel::Pure(s) } else { SectorLabel::Mixed };
            continue;
        }
        let mut found: Vec<(T, DVector<Complex<T>>, Sector)> = Vec::new();
        for s in Sector::ALL {
            let projected = DMatrix::from_columns(
                &(0..range.len()).map(|j| project_sector(basis, &c.column(j).into_owned(), s)).collect::<Vec<_>>(),
            );
            // coordinates of the sector subspace in the cluster eigenbasis
            let coords = c.adjoint() * &projected;
            let (gram_values, gram_vectors) = small_eigen(&(projected.adjoint() * &projected));
            let mut keep = Vec::new();
            for j in 0..range.len() {
                if gram_values[j] > T::lit(0.5) {
                    let u = &coords * gram_vectors.column(j) / Complex::from(gram_values[j].sqrt());
                    keep.push(u);
                }
            }
            if keep.is_empty() {
                continue;
            }
            let u = DMatrix::from_columns(&keep);
            let diag = DMatrix::from_diagonal(&DVector::from_iterator(e.len(), e.iter().map(|&x| Complex::from(x))));
            let (local_values, local_vectors) = small_eigen(&(u.adjoint() * diag * &u));
            for j in 0..keep.len() {
                let alpha = &u * local_vectors.column(j);
                let v = &c * &alpha;
                let norm = v.norm();
                found.push((local_values[j], v / Complex::from(norm), s));
            }
        }
        if found.len() != range.len() {
            continue;
        }
        found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.2.cmp(&b.2)));
        for (offset, (value, v, s)) in found.into_iter().enumerate() {
            let i = range.start + offset;
            values[i] = value;
            let defect = rotation_defect(basis, &v, s);
            vectors.set_column(i, &v);
            labels[i] = if defect <= label_tol { SectorLabel::Pure(s) } else { SectorLabel::Mixed };
        }
    }
    debug_assert_eq!(vectors.nrows(), n);
    BlochSpectrum { eigenvalues: values, eigenvectors: vectors, sector_labels: Some(labels) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{assemble, build_basis};
    use crate::lattice::{classify_angle, superlattice_basis, symmetry_data, HoneycombBasis, KPoint, LatticeKind};
    use crate::potential::{reference_potential, twist, Stacking, TwistSpec};

    fn rotation_matrix_of(basis: &PlaneWaveBasis<f64>) -> DMatrix<Complex<f64>> {
        let n = basis.len();
        let mut p = DMatrix::zeros(n, n);
        for (i, &j) in basis.rotation_perm().unwrap().iter().enumerate() {
            p[(j, i)] = Complex::new(1.0, 0.0);
        }
        p
    }

    #[test]
    fn diagonal_and_pauli_inputs() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0f64, -1.0, 2.0])).map(Complex::from);
        assert_eq!(eigensolve(&h).unwrap().eigenvalues, vec![-1.0, 2.0, 3.0]);
        let x = DMatrix::from_row_slice(2, 2, &[0.0f64, 1.0, 1.0, 0.0]).map(Complex::from);
        let s = eigensolve(&x).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15 && (s.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn guard_rejects_oversized_matrix() {
        let h = DMatrix::<Complex<f64>>::zeros(MAX_DIMENSION + 1, 1);
        assert!(matches!(eigensolve(&h), Err(Error::DimensionGuard { .. })));
    }

    #[test]
    fn residuals_and_orthonormality_for_complex_input() {
        let d = classify_angle(2, 1).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let b = build_basis(&sym, &lat, &k, 5.0 * lat.shortest_dual()).unwrap();
        let w = twist(&reference_potential(), &TwistSpec::additive(d, Stacking::AB)).unwrap();
        let h = assemble(&b, &k, 0.7, &w).unwrap();
        let s = eigensolve(&h).unwrap();
        for i in 0..s.len() {
            let v = s.vector(i);
            let r = (&h * &v - &v * Complex::from(s.eigenvalues[i])).norm();
            assert!(r < 1e-9 * s.eigenvalues[i].abs().max(1.0), "{i} {r} {}", s.eigenvalues[i]);
        }
        let g = s.eigenvectors.adjoint() * &s.eigenvectors;
        assert!((g - DMatrix::identity(b.len(), b.len())).norm() < 1e-10);
        assert!(s.eigenvalues.windows(2).all(|p| p[0] <= p[1]));
        let p = rotation_matrix_of(&b);
        assert!((&h * &p - &p * &h).norm() < 1e-10);
    }

    #[test]
    fn free_triplet_has_one_vector_per_sector() {
        for kind in [LatticeKind::Direct, LatticeKind::Dual] {
            let lat = HoneycombBasis::<f64>::unit(kind);
            let sym = symmetry_data(kind, KPoint::K);
            let k = sym.anchor(&lat);
            let b = build_basis(&sym, &lat, &k, 3.0 * lat.shortest_dual()).unwrap();
            let h = assemble(&b, &k, 0.0, &crate::potential::FourierPotential::zero(lat)).unwrap();
            let s = sector_decompose(&eigensolve(&h).unwrap(), &b, DEFAULT_DEGENERACY_TOL);
            let e0 = k.norm_squared();
            let near: Vec<usize> = (0..s.len()).filter(|&i| (s.eigenvalues[i] - e0).abs() < 1e-10).collect();
            assert_eq!(near, vec![0, 1, 2]);
            let mut labels: Vec<_> = near.iter().map(|&i| s.label(i).unwrap()).collect();
            labels.sort_by_key(|l| match l {
                SectorLabel::Pure(s) => s.index(),
                SectorLabel::Mixed => 9,
            });
            assert_eq!(labels, Sector::ALL.map(SectorLabel::Pure).to_vec());
            for i in 0..s.len() {
                match s.label(i).unwrap() {
                    SectorLabel::Pure(sec) => {
                        let v = s.vector(i);
                        assert!((apply_rotation(&b, &v) - &v * sec.value::<f64>()).norm() < 1e-6);
                    }
                    SectorLabel::Mixed => panic!("free spectrum should label cleanly"),
                }
            }
        }
    }

    #[test]
    fn coarse_tolerance_still_separates_sectors() {
        let d = classify_angle(2, 1).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let b = build_basis(&sym, &lat, &k, 4.0 * lat.shortest_dual()).unwrap();
        let w = twist(&reference_potential(), &TwistSpec::additive(d, Stacking::AA)).unwrap();
        let h = assemble(&b, &k, 0.5, &w).unwrap();
        let s = sector_decompose(&eigensolve(&h).unwrap(), &b, 0.05);
        for i in 0..s.len() {
            let v = s.vector(i);
            let r = (&h * &v - &v * Complex::from(s.eigenvalues[i])).norm();
            assert!(r < 1e-8, "residual {r} at {i}");
        }
    }
}
