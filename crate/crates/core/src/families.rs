//! The three classical families, their differential equations and weights.
//!
//! Each family's degree-`n` member solves
//!
//! ```text
//! (a x² + b x + c) y'' + (μ x + ν) y' + κ y = 0
//! ```
//!
//! with the coefficient tuple returned by [`ode_coefficients`]. The zeros live
//! in the open interval returned by [`FamilySpec::domain`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Jacobi,
    Laguerre,
    Hermite,
}

/// A classical family together with its parameters.
///
/// Jacobi polynomials are orthogonal under `(1-x)^alpha (1+x)^beta` on
/// `(-1, 1)`, generalized Laguerre under `x^alpha e^{-x}` on `(0, ∞)`, and
/// Hermite under `e^{-x²}` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FamilySpec {
    Jacobi { alpha: f64, beta: f64 },
    Laguerre { alpha: f64 },
    Hermite,
}

impl FamilySpec {
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        let spec = FamilySpec::Jacobi { alpha, beta };
        validate(&spec)?;
        Ok(spec)
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        let spec = FamilySpec::Laguerre { alpha };
        validate(&spec)?;
        Ok(spec)
    }

    pub fn hermite() -> Self {
        FamilySpec::Hermite
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilySpec::Jacobi { .. } => FamilyKind::Jacobi,
            FamilySpec::Laguerre { .. } => FamilyKind::Laguerre,
            FamilySpec::Hermite => FamilyKind::Hermite,
        }
    }

    pub fn domain(&self) -> DomainInterval {
        match self {
            FamilySpec::Jacobi { .. } => DomainInterval::new(-1.0, 1.0),
            FamilySpec::Laguerre { .. } => DomainInterval::new(0.0, f64::INFINITY),
            FamilySpec::Hermite => DomainInterval::new(f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// True when the zero set is symmetric about the origin.
    pub fn is_symmetric(&self) -> bool {
        match *self {
            FamilySpec::Jacobi { alpha, beta } => alpha == beta,
            FamilySpec::Laguerre { .. } => false,
            FamilySpec::Hermite => true,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Jacobi { alpha, beta } => write!(f, "Jacobi(alpha={alpha}, beta={beta})"),
            FamilySpec::Laguerre { alpha } => write!(f, "Laguerre(alpha={alpha})"),
            FamilySpec::Hermite => write!(f, "Hermite"),
        }
    }
}

/// Checks the parameter constraints `alpha > -1` (and `beta > -1` for Jacobi).
pub fn validate(spec: &FamilySpec) -> Result<()> {
    fn check(name: &'static str, value: f64) -> Result<()> {
        // NaN fails the comparison as well
        if value.is_finite() && value > -1.0 {
            Ok(())
        } else {
            Err(Error::ParameterOutOfRange {
                name,
                value,
                bound: "finite and > -1",
            })
        }
    }
    match *spec {
        FamilySpec::Jacobi { alpha, beta } => {
            check("alpha", alpha)?;
            check("beta", beta)
        }
        FamilySpec::Laguerre { alpha } => check("alpha", alpha),
        FamilySpec::Hermite => Ok(()),
    }
}

/// Open interval `(lower, upper)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainInterval {
    pub lower: f64,
    pub upper: f64,
}

impl DomainInterval {
    fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower < upper);
        Self { lower, upper }
    }

    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && self.lower < x && x < self.upper
    }
}

/// Coefficients of `(a x² + b x + c) y'' + (μ x + ν) y' + κ y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub mu: f64,
    pub nu: f64,
    pub kappa: f64,
}

impl OdeCoefficients {
    /// The leading coefficient `Q(x) = a x² + b x + c`.
    pub fn q(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    /// The first-order coefficient `L(x) = μ x + ν`.
    pub fn l(&self, x: f64) -> f64 {
        self.mu * x + self.nu
    }
}

pub fn ode_coefficients(spec: &FamilySpec, n: usize) -> OdeCoefficients {
    let n = n as f64;
    match *spec {
        FamilySpec::Jacobi { alpha, beta } => OdeCoefficients {
            a: -1.0,
            b: 0.0,
            c: 1.0,
            mu: -(alpha + beta + 2.0),
            nu: beta - alpha,
            kappa: n * (n + alpha + beta + 1.0),
        },
        FamilySpec::Hermite => OdeCoefficients {
            a: 0.0,
            b: 0.0,
            c: 1.0,
            mu: -2.0,
            nu: 0.0,
            kappa: 2.0 * n,
        },
        FamilySpec::Laguerre { alpha } => OdeCoefficients {
            a: 0.0,
            b: 1.0,
            c: 0.0,
            mu: -1.0,
            nu: alpha + 1.0,
            kappa: n,
        },
    }
}

/// `Q(x)` for the family; independent of the degree.
pub fn q_at(spec: &FamilySpec, x: f64) -> f64 {
    ode_coefficients(spec, 0).q(x)
}

/// Evaluates `(p_n(x), p_n'(x))` by the family's three-term recurrence.
///
/// Normalizations follow the usual conventions: `P_n^{(α,β)}(1) = C(n+α, n)`,
/// `L_n^{(α)}(0) = C(n+α, n)`, and physicists' Hermite `H_n` with leading
/// coefficient `2^n`. The derivative is obtained by differentiating the
/// recurrence term by term, so both values come out of a single pass.
///
/// This routine shares no code with the equilibrium solver and serves as an
/// independent check on its output. Values overflow to infinity for large
/// degrees far outside the orthogonality interval.
pub fn evaluate_with_derivative(spec: &FamilySpec, n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (p1, dp1) = match *spec {
        FamilySpec::Jacobi { alpha, beta } => {
            let s = 0.5 * (alpha + beta + 2.0);
            (alpha + 1.0 + s * (x - 1.0), s)
        }
        FamilySpec::Laguerre { alpha } => (1.0 + alpha - x, -1.0),
        FamilySpec::Hermite => (2.0 * x, 2.0),
    };

    let (mut p_prev, mut dp_prev) = (1.0, 0.0);
    let (mut p, mut dp) = (p1, dp1);
    for k in 1..n {
        // p_{k+1} = (A x + B) p_k - C p_{k-1}
        let (a, b, c) = recurrence_coefficients(spec, k);
        let lin = a * x + b;
        let p_next = lin * p - c * p_prev;
        let dp_next = lin * dp + a * p - c * dp_prev;
        p_prev = p;
        dp_prev = dp;
        p = p_next;
        dp = dp_next;
    }
    (p, dp)
}

/// `(A_k, B_k, C_k)` with `p_{k+1} = (A_k x + B_k) p_k - C_k p_{k-1}`, `k ≥ 1`.
fn recurrence_coefficients(spec: &FamilySpec, k: usize) -> (f64, f64, f64) {
    let kf = k as f64;
    match *spec {
        FamilySpec::Jacobi { alpha, beta } => {
            let s = 2.0 * kf + alpha + beta;
            let denom = 2.0 * (kf + 1.0) * (kf + alpha + beta + 1.0) * s;
            let a = (s + 1.0) * (s + 2.0) * s / denom;
            let b = (s + 1.0) * (alpha * alpha - beta * beta) / denom;
            let c = 2.0 * (kf + alpha) * (kf + beta) * (s + 2.0) / denom;
            (a, b, c)
        }
        FamilySpec::Laguerre { alpha } => {
            let d = kf + 1.0;
            (-1.0 / d, (2.0 * kf + alpha + 1.0) / d, (kf + alpha) / d)
        }
        FamilySpec::Hermite => (2.0, 0.0, 2.0 * kf),
    }
}

/// Named parameter choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Jacobi(-1/2, -1/2).
    ChebyshevFirstKind,
    /// Jacobi(1/4, 1/4).
    GegenbauerPaper,
    /// Jacobi(0, 0).
    Legendre,
    /// Laguerre(0).
    ClassicalLaguerre,
}

impl Preset {
    pub fn spec(self) -> FamilySpec {
        match self {
            Preset::ChebyshevFirstKind => FamilySpec::Jacobi {
                alpha: -0.5,
                beta: -0.5,
            },
            Preset::GegenbauerPaper => FamilySpec::Jacobi {
                alpha: 0.25,
                beta: 0.25,
            },
            Preset::Legendre => FamilySpec::Jacobi {
                alpha: 0.0,
                beta: 0.0,
            },
            Preset::ClassicalLaguerre => FamilySpec::Laguerre { alpha: 0.0 },
        }
    }
}

/// A labelled configuration from the reference experiment set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCase {
    /// Column label used in the zero tables.
    pub column: &'static str,
    /// Row label used in the error-estimate tables.
    pub row: &'static str,
    pub spec: FamilySpec,
}

/// The seven reference configurations, in zero-table column order.
pub const REFERENCE_CASES: [ReferenceCase; 7] = [
    ReferenceCase {
        column: "Jacobi",
        row: "General Jacobi alpha = 1/4, beta = 1/8",
        spec: FamilySpec::Jacobi {
            alpha: 0.25,
            beta: 0.125,
        },
    },
    ReferenceCase {
        column: "Chebyshev",
        row: "Chebyshev 1st Kind",
        spec: FamilySpec::Jacobi {
            alpha: -0.5,
            beta: -0.5,
        },
    },
    ReferenceCase {
        column: "Gegenbauer",
        row: "Gegenbauer",
        spec: FamilySpec::Jacobi {
            alpha: 0.25,
            beta: 0.25,
        },
    },
    ReferenceCase {
        column: "Legendre",
        row: "Legendre",
        spec: FamilySpec::Jacobi {
            alpha: 0.0,
            beta: 0.0,
        },
    },
    ReferenceCase {
        column: "Laguerre",
        row: "Classical Laguerre",
        spec: FamilySpec::Laguerre { alpha: 0.0 },
    },
    ReferenceCase {
        column: "General Laguerre",
        row: "General Laguerre alpha = 1",
        spec: FamilySpec::Laguerre { alpha: 1.0 },
    },
    ReferenceCase {
        column: "Hermite",
        row: "Hermite",
        spec: FamilySpec::Hermite,
    },
];

/// Indices into [`REFERENCE_CASES`] in error-table row order.
pub const ERROR_TABLE_ORDER: [usize; 7] = [3, 0, 2, 1, 4, 5, 6];
