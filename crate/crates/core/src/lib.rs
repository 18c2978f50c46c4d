//! Zeros of the classical orthogonal polynomials (Jacobi, generalized
//! Laguerre, Hermite) computed as the electrostatic equilibrium of `n` unit
//! charges, by Newton's method on a strictly concave log-energy.
//!
//! ```
//! use ortho_zeros::{solve, FamilySpec, SolverSettings};
//!
//! let report = solve(&FamilySpec::Hermite, 2, &SolverSettings::default()).unwrap();
//! let r = 1.0 / 2f64.sqrt();
//! assert!((report.zeros.points()[1] - r).abs() < 1e-15);
//! ```

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod families;
pub mod solver;
pub mod summation;
pub mod verify;

pub use equilibrium::{
    gradient, hessian, log_energy, proposition_residual, Configuration, EnergyReport,
};
pub use error::{Error, Result};
pub use families::{
    evaluate_with_derivative, ode_coefficients, q_at, validate, DomainInterval, FamilyKind,
    FamilySpec, OdeCoefficients, Preset, ReferenceCase, REFERENCE_CASES,
};
pub use solver::{initial_guess, newton_step, solve, solve_from, SolveReport, SolverSettings};
