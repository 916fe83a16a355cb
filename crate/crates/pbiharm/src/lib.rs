//! Mixed finite-element solver for the one-dimensional p-biharmonic beam
//! problem with Navier boundary conditions.
//!
//! The fourth-order problem is split into two second-order Poisson problems
//! via the auxiliary variable `v = |u''|^{p-2} u''`: first solve
//! `Δv = f`, then `Δu = |v|^{q-2} v` with `q = p/(p-1)`. Both discrete
//! problems share the same stiffness matrix, so the whole pipeline is two
//! banded Cholesky solves with a single factorization and no nonlinear
//! iteration.
//!
//! The crate also ships manufactured exact-solution families and a
//! convergence harness that measures experimental orders of convergence
//! against them.

pub mod analysis;
pub mod assembly;
pub mod elements;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod manufactured;
pub mod mesh;
pub mod plot;
pub mod solver;
pub mod space;

pub use analysis::{
    eoc, h1_semi_error, l2_error, run_convergence, ConvergenceRow, ConvergenceTable, ErrorReport,
};
pub use assembly::{
    apply, assemble_load, assemble_m, assemble_nonlinear_rhs, assemble_stiffness, BandedSymMatrix,
    DenseVector,
};
pub use elements::{gauss_rule, make_basis, QuadratureRule, ReferenceBasis};
pub use error::Error;
pub use linalg::{factor, solve, CholeskyFactor, SolveResult};
pub use manufactured::{
    check_consistency, example1, example2, oracle_u_from_v, signed_power, ConsistencyReport,
    ExactPair, OracleU,
};
pub use mesh::Mesh1D;
pub use solver::{
    conjugate_exponent, solve_mixed, solve_mixed_with, stability_check, MixedSolution,
    ProblemConfig, StabilityReport,
};
pub use space::{build_space, interpolate, FemFunction, FemSpace};
