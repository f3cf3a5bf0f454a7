//! Grid solution of a 1D particle in a potential and its reduction to the
//! two-level parameters `(Δ, ε, a)` of the lowest doublet.

mod potential;
mod reduction;
mod solver;

pub use potential::{Potential, PotentialSpec};
pub use reduction::{dipole_moment, reduce_to_two_level, ReductionOptions, ReductionResult, DEFAULT_MIN_VALIDITY};
pub use solver::{
    solve_schrodinger_1d, Eigenstate, Solution, SolverOptions, SolverWarning, Stencil, LEAKAGE_TOLERANCE,
    REFINEMENT_TOLERANCE,
};
