//! Low-order perturbation coefficients at `K*`, their numerical check, the
//! velocity bound and the flattening study over commensurate angles.

mod coefficients;
mod consistency;
mod scaling;
mod velocity;

pub use coefficients::{
    first_order, matrix_element, perturbation_report, second_order, FirstOrder, PerturbationReport, SecondOrder,
};
pub use consistency::{consistency_check, default_lambdas, ConsistencyReport, SectorFit};
pub use scaling::{
    scaling_csv, scaling_study, scaling_study_with, ScalingRow, ScalingTable, DEFAULT_SCALING_CUTOFF,
};
pub use velocity::{velocity_bound, VelocityBound};
