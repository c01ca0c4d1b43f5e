//! Commensurate twisted bilayer honeycomb potentials: lattice arithmetic,
//! Fourier-space potentials, plane-wave Bloch spectra, Dirac cone detection
//! and perturbative coefficients.

pub mod bloch;
pub mod error;
pub mod int;
pub mod lattice;
pub mod perturbation;
pub mod pipeline;
pub mod potential;
pub mod scalar;

pub use error::{Error, ErrorClass, Result};
pub use int::{IMat2, IVec2};
pub use scalar::Real;

pub type Basis = lattice::HoneycombBasis<f64>;
pub type Orbits = lattice::OrbitSet<f64>;
pub type Potential = potential::FourierPotential<f64>;
