//! Plane-wave Bloch Hamiltonians `−Δ + λW`, their spectra, rotation sectors
//! and Dirac cones.

mod bands;
mod basis;
mod dirac;
mod hamiltonian;
mod spectrum;

pub use bands::{band_path, bands_csv, parse_bands_csv, symmetry_path, BandRow, PathPoint};
pub use basis::{build_basis, plain_basis, PlaneWaveBasis};
pub use dirac::{
    cone_fit, dirac_velocity, find_dirac, find_dirac_state, lambda_scan, suggest_ring_radius, DiracReport,
    DiracState, Partner, ScanPoint,
};
pub use hamiltonian::assemble;
pub use spectrum::{
    apply_rotation, eigensolve, eigenvalues, project_sector, sector_decompose, BlochSpectrum, Sector, SectorLabel,
    DEFAULT_DEGENERACY_TOL, MAX_DIMENSION,
};
