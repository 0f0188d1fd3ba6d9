//! The q-Laplacian `□ = -∂̄*∂̄`: sector matrices, the Green function and
//! solvers, Poisson kernels and spherical functions.

pub mod eigen;
pub mod green;
pub mod sector;

pub use eigen::{
    boundary_recover, c_function, eigenvalue, poisson_extend, poisson_kernel, radius_restrict,
    spherical_phi, SpectralParam,
};
pub use green::{
    bergman_project, dbar_solve, green_kernel, poisson_solve, poisson_solve_direct,
    holomorphic_overlap, reproduce_check, DEFAULT_GREEN_CUTOFF,
};
pub use sector::{box_apply, dbar_sector, weighted_residual, SectorOperator};
