//! Numerical toolkit for one-dimensional quasilinear (p-Laplacian) eigenvalue
//! problems −(a(x)|u′|^{p−2}u′)′ = λ ρ(x)|u|^{p−2}u on (0, L) with Dirichlet
//! conditions and sign-changing weights ρ.
//!
//! The crate computes the two eigenvalue ladders λ_k^± by shooting with nodal
//! counting, evaluates a family of Lyapunov-type necessary conditions against
//! computed spectra, solves the p = 2 higher-order (beam) analogue, and runs
//! periodic homogenization sweeps λ_{ε,k} with limit classification.

pub mod coefficient;
pub mod error;
pub mod higher_order;
pub mod homog;
pub mod lyapunov;
pub mod pmath;
pub mod quad;
pub mod shooting;
pub mod transform;
pub mod weights;

pub use coefficient::{Coefficient, GridWeight};
pub use error::{Error, Result};
pub use higher_order::{assemble, smallest_positive_eigenvalue, verify_lyapi2, BeamProblem, DensePencil};
pub use homog::{
    comparison_shift_bound, divergence_lower_bound, limit_eigenvalue, sweep, test_function_upper_bound,
    LimitClass, SignChoice, SweepConfig, SweepResult, SweepRow, TestFunctionBound,
};
pub use lyapunov::{
    bound_classical, bound_higher_order, bound_lyapi, bound_lyapu, bounds_harris_kong,
    das_vatsala_constant, taylor_embedding_constant, BoundInputs, BoundName, BoundReport,
};
pub use pmath::{phi_p, pi_p, PExponent};
pub use shooting::{
    eigenvalue_with, integrate_ivp_with, rayleigh_quotient, weyl_estimate, EigenPair, ProblemSpec,
    Sample, SamplePoint, Sign, SolveOptions, Trajectory,
};
pub use transform::{build_transform, transformed_weight, ChangeOfVariables, MonotoneCubic};
pub use weights::{PiecewiseWeight, Primitive, Segment, Shape, SplitParts};
