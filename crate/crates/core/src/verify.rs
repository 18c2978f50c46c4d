//! Checks on computed zeros that do not go through the equilibrium solver:
//! closed-form Chebyshev zeros, a recurrence-based Newton correction, and an
//! audit of the Hessian's definiteness.

use std::f64::consts::PI;

use crate::equilibrium::{hessian, Configuration};
use crate::error::{Error, Result};
use crate::families::{
    evaluate_with_derivative, FamilySpec, ReferenceCase, ERROR_TABLE_ORDER, REFERENCE_CASES,
};
use crate::solver::{solve, SolveReport, SolverSettings};

/// Zeros of the first-kind Chebyshev polynomial `T_n`, ascending.
pub fn chebyshev_exact_zeros(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n)
        .rev()
        .map(|k| ((2 * k - 1) as f64 * PI / (2.0 * nf)).cos())
        .collect()
}

pub fn is_chebyshev_first_kind(spec: &FamilySpec) -> bool {
    matches!(*spec, FamilySpec::Jacobi { alpha, beta } if alpha == -0.5 && beta == -0.5)
}

pub fn infinity_norm_diff(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter()
        .zip(v)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}

/// `max_k |p_n(x_k) / p_n'(x_k)|` under the three-term recurrence: the size of
/// one scalar Newton correction at each computed zero.
pub fn polish_residual(spec: &FamilySpec, n: usize, zeros: &[f64]) -> Result<f64> {
    if zeros.len() != n {
        return Err(Error::LengthMismatch {
            left: zeros.len(),
            right: n,
        });
    }
    Configuration::new(*spec, zeros.to_vec())?;
    let mut worst = 0.0f64;
    for (index, &x) in zeros.iter().enumerate() {
        let (p, dp) = evaluate_with_derivative(spec, n, x);
        if !dp.is_finite() || dp.abs() < f64::MIN_POSITIVE {
            return Err(Error::DerivativeVanishes { index, value: x });
        }
        worst = worst.max((p / dp).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefinitenessReport {
    pub diagonally_dominant: bool,
    pub negative_diagonal: bool,
    pub factorization_succeeds: bool,
}

impl DefinitenessReport {
    pub fn all(&self) -> bool {
        self.diagonally_dominant && self.negative_diagonal && self.factorization_succeeds
    }
}

pub fn definiteness_audit(config: &Configuration) -> DefinitenessReport {
    let h = hessian(config);
    let n = h.nrows();
    let negative_diagonal = (0..n).all(|k| h[(k, k)] < 0.0);
    let diagonally_dominant = (0..n).all(|k| {
        let off: f64 = (0..n).filter(|&j| j != k).map(|j| h[(k, j)].abs()).sum();
        h[(k, k)].abs() > off
    });
    let factorization_succeeds = (-h).cholesky().is_some();
    DefinitenessReport {
        diagonally_dominant,
        negative_diagonal,
        factorization_succeeds,
    }
}

/// Solves every reference configuration at degree `n`, in
/// [`REFERENCE_CASES`] order. Failures are kept per case.
pub fn solve_reference_cases(
    n: usize,
    settings: &SolverSettings,
) -> Vec<(ReferenceCase, Result<SolveReport>)> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = REFERENCE_CASES
            .iter()
            .map(|case| scope.spawn(move || (*case, solve(&case.spec, n, settings))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowEstimate {
    pub error_estimate: f64,
    /// Distance to the closed-form zeros; Chebyshev rows only.
    pub exact_error: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl RowEstimate {
    pub fn from_report(spec: &FamilySpec, report: &SolveReport) -> Self {
        let exact_error = is_chebyshev_first_kind(spec).then(|| {
            let exact = chebyshev_exact_zeros(report.zeros.len());
            infinity_norm_diff(report.zeros.points(), &exact).expect("same degree")
        });
        Self {
            error_estimate: report.final_step_norm,
            exact_error,
            iterations: report.iterations,
            converged: report.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub family_label: &'static str,
    pub degree: usize,
    pub outcome: Result<RowEstimate>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    /// Rows of one degree in error-table order, from already solved cases.
    pub fn rows_for(
        degree: usize,
        solved: &[(ReferenceCase, Result<SolveReport>)],
    ) -> Vec<ErrorRow> {
        ERROR_TABLE_ORDER
            .iter()
            .map(|&i| {
                let (case, outcome) = &solved[i];
                ErrorRow {
                    family_label: case.row,
                    degree,
                    outcome: outcome
                        .as_ref()
                        .map(|r| RowEstimate::from_report(&case.spec, r))
                        .map_err(Clone::clone),
                }
            })
            .collect()
    }
}

/// Error estimates for the seven reference configurations at each degree.
pub fn build_error_table(degrees: &[usize], settings: &SolverSettings) -> ErrorTable {
    let rows = degrees
        .iter()
        .flat_map(|&n| ErrorTable::rows_for(n, &solve_reference_cases(n, settings)))
        .collect();
    ErrorTable { rows }
}
