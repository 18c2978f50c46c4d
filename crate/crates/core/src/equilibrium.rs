//! Logarithmic energy of `n` unit charges in the external field of a family's
//! weight, and its first and second derivatives.
//!
//! For a configuration `x_1 < … < x_n` the log-energy is
//!
//! ```text
//! ln f(x) = Σ_{i<j} ln(x_j − x_i) + Σ_k V(x_k)
//! ```
//!
//! with the external field
//!
//! | family   | V(x)                                          |
//! |----------|-----------------------------------------------|
//! | Jacobi   | (α+1)/2 · ln(1−x) + (β+1)/2 · ln(1+x)         |
//! | Laguerre | (α+1)/2 · ln x − x/2                          |
//! | Hermite  | −x²/2                                         |
//!
//! `ln f` is strictly concave on the ordered region and its unique critical
//! point is the zero set of the degree-`n` polynomial, so the equilibrium
//! equations are `gradient(x) = 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::families::{ode_coefficients, validate, FamilySpec};
use crate::summation::NeumaierSum;

/// A strictly increasing vector of points inside the family's open domain.
///
/// Construction is the only place admissibility is checked; every function in
/// this module takes an already valid configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    spec: FamilySpec,
    points: Vec<f64>,
}

impl Configuration {
    pub fn new(spec: FamilySpec, points: Vec<f64>) -> Result<Self> {
        validate(&spec)?;
        if points.is_empty() {
            return Err(Error::InvalidDegree(0));
        }
        let domain = spec.domain();
        for (index, &value) in points.iter().enumerate() {
            if !domain.contains(value) {
                return Err(Error::DomainViolation {
                    index,
                    value,
                    reason: "outside the open domain",
                });
            }
        }
        for (index, pair) in points.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(Error::DomainViolation {
                    index: index + 1,
                    value: pair[1],
                    reason: "points must be strictly increasing",
                });
            }
        }
        Ok(Self { spec, points })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn into_points(self) -> Vec<f64> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// External field `V`, `V'` and `V''` at one point.
fn field(spec: &FamilySpec, x: f64) -> (f64, f64, f64) {
    match *spec {
        FamilySpec::Jacobi { alpha, beta } => {
            let (wa, wb) = (0.5 * (alpha + 1.0), 0.5 * (beta + 1.0));
            let (xm, xp) = (x - 1.0, x + 1.0);
            (
                wa * (-x).ln_1p() + wb * x.ln_1p(),
                wa / xm + wb / xp,
                -wa / (xm * xm) - wb / (xp * xp),
            )
        }
        FamilySpec::Laguerre { alpha } => {
            let w = 0.5 * (alpha + 1.0);
            (w * x.ln() - 0.5 * x, w / x - 0.5, -w / (x * x))
        }
        FamilySpec::Hermite => (-0.5 * x * x, -x, -1.0),
    }
}

/// Magnitude of the field's second derivative: the guaranteed diagonal
/// dominance margin of the Hessian row at `x`.
pub fn field_curvature(spec: &FamilySpec, x: f64) -> f64 {
    -field(spec, x).2
}

pub fn log_energy(config: &Configuration) -> f64 {
    let x = config.points();
    let mut acc = NeumaierSum::new();
    for (i, &xi) in x.iter().enumerate() {
        acc += field(config.spec(), xi).0;
        for &xj in &x[i + 1..] {
            acc += (xj - xi).ln();
        }
    }
    acc.value()
}

/// `∂ ln f / ∂x_k` for every `k`: the left-hand sides of the equilibrium
/// equations.
pub fn gradient(config: &Configuration) -> Vec<f64> {
    let x = config.points();
    x.iter()
        .enumerate()
        .map(|(k, &xk)| {
            let mut acc = NeumaierSum::new();
            for (j, &xj) in x.iter().enumerate() {
                if j != k {
                    acc += 1.0 / (xk - xj);
                }
            }
            acc += field(config.spec(), xk).1;
            acc.value()
        })
        .collect()
}

/// Hessian of `ln f`.
///
/// Diagonal: `V''(x_k) − Σ_{j≠k} 1/(x_k−x_j)²`; off-diagonal `(i, j)`:
/// `+1/(x_i−x_j)²`. Each row is strictly diagonally dominant by `|V''(x_k)|`.
pub fn hessian(config: &Configuration) -> DMatrix<f64> {
    let x = config.points();
    let n = x.len();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let d = x[i] - x[j];
            let v = 1.0 / (d * d);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    for k in 0..n {
        let mut acc = NeumaierSum::new();
        for j in 0..n {
            if j != k {
                acc += -h[(k, j)];
            }
        }
        acc += field(config.spec(), x[k]).2;
        h[(k, k)] = acc.value();
    }
    h
}

/// Residual of the unified equilibrium form,
/// `2 Σ_{j≠k} Q(x_k)/(x_k − x_j) + μ x_k + ν`, from the differential equation
/// coefficients alone.
pub fn proposition_residual(config: &Configuration) -> Vec<f64> {
    let x = config.points();
    let ode = ode_coefficients(config.spec(), x.len());
    x.iter()
        .enumerate()
        .map(|(k, &xk)| {
            let q = ode.q(xk);
            let mut acc = NeumaierSum::new();
            for (j, &xj) in x.iter().enumerate() {
                if j != k {
                    acc += 2.0 * q / (xk - xj);
                }
            }
            acc += ode.nu;
            acc += ode.mu * xk;
            acc.value()
        })
        .collect()
}

/// `ln f(x + step) − ln f(x)`, evaluated term by term with `ln_1p` so the
/// result keeps full relative accuracy for steps far below the energy's own
/// rounding level. Returns `None` when `x + step` is not admissible.
pub fn log_energy_change(config: &Configuration, step: &[f64]) -> Option<f64> {
    let x = config.points();
    assert_eq!(x.len(), step.len());
    let mut acc = NeumaierSum::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let rel = (step[j] - step[i]) / (x[j] - x[i]);
            if rel <= -1.0 {
                return None;
            }
            acc += rel.ln_1p();
        }
        let (xi, di) = (x[i], step[i]);
        acc += match *config.spec() {
            FamilySpec::Jacobi { alpha, beta } => {
                let down = -di / (1.0 - xi);
                let up = di / (1.0 + xi);
                if down <= -1.0 || up <= -1.0 {
                    return None;
                }
                0.5 * (alpha + 1.0) * down.ln_1p() + 0.5 * (beta + 1.0) * up.ln_1p()
            }
            FamilySpec::Laguerre { alpha } => {
                let rel = di / xi;
                if rel <= -1.0 {
                    return None;
                }
                0.5 * (alpha + 1.0) * rel.ln_1p() - 0.5 * di
            }
            FamilySpec::Hermite => -0.5 * di * (2.0 * xi + di),
        };
    }
    Some(acc.value())
}

/// Log-energy, gradient and Hessian at one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub log_energy: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

impl EnergyReport {
    pub fn at(config: &Configuration) -> Self {
        Self {
            log_energy: log_energy(config),
            gradient: DVector::from_vec(gradient(config)),
            hessian: hessian(config),
        }
    }
}
