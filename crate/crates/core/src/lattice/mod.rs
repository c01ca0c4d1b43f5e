//! Honeycomb lattices, commensurate angles and the integer data attached to them.

mod angle;
mod basis;
mod coupling;
mod intersection;
mod symmetry;

pub use angle::{
    classify_angle, enumerate_angles, reduce_angle, rotation_matrix, AlphaClass, AngleRecord, CommensurationData,
    LatticeKind,
};
pub use basis::{high_symmetry_points, indices_within, rotation_120, superlattice_basis, HoneycombBasis};
pub use coupling::{
    bezout_residual, bezout_shift_decomposition, coupling_matrices, coupling_matrix_float, CouplingMatrices, NSquared,
};
pub use intersection::{brute_force_intersection, lattice_points_in_disk, same_points_in_disk, RADIUS_GUARD};
pub use symmetry::{orbit_representatives, symmetry_data, KPoint, OrbitSet, SymmetryData};
