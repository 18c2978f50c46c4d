//! Damped Newton iteration on the equilibrium equations.
//!
//! The Jacobian of the gradient system is the Hessian of `ln f`, which is
//! symmetric negative definite everywhere on the ordered region. Each step
//! therefore solves `(−H) Δ = G` by Cholesky and backtracks along `Δ` until
//! the trial point is admissible and `ln f` does not decrease.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::equilibrium::{gradient, hessian, log_energy, log_energy_change, Configuration};
use crate::error::{Error, Result};
use crate::families::{validate, FamilySpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Convergence threshold on the infinity norm of the Newton step. Applied
    /// relative to the largest point magnitude once that exceeds one.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Step shrink factor per backtrack, in `(0, 1)`.
    pub backtracking_factor: f64,
    pub max_backtracks: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-15,
            max_iterations: 30,
            backtracking_factor: 0.5,
            max_backtracks: 60,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidSettings(
                "tolerance must be positive and finite",
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidSettings("max_iterations must be at least 1"));
        }
        if !(self.backtracking_factor > 0.0 && self.backtracking_factor < 1.0) {
            return Err(Error::InvalidSettings(
                "backtracking_factor must lie in (0, 1)",
            ));
        }
        if self.max_backtracks == 0 {
            return Err(Error::InvalidSettings("max_backtracks must be at least 1"));
        }
        Ok(())
    }

    /// Step-norm threshold at the given points: `tolerance · max(1, ‖x‖∞)`.
    pub fn threshold(&self, points: &[f64]) -> f64 {
        self.tolerance * points.iter().fold(1.0f64, |m, x| m.max(x.abs()))
    }
}

/// Closed-form starting configuration.
///
/// * Jacobi: Chebyshev angles, `cos(π(2(n−k)+1)/(2n))`.
/// * Hermite: `√(2n+1) · cos(π(n+1−k)/(n+1))`, a semicircle sampled at the
///   second-kind Chebyshev angles; symmetric about the origin.
/// * Laguerre: `(4n+2α+2) · ((2k−1)/(2n))²`.
pub fn initial_guess(spec: &FamilySpec, n: usize) -> Result<Configuration> {
    validate(spec)?;
    if n == 0 {
        return Err(Error::InvalidDegree(n));
    }
    let nf = n as f64;
    let points = (1..=n)
        .map(|k| {
            let kf = k as f64;
            match *spec {
                FamilySpec::Jacobi { .. } => (PI * (2.0 * (nf - kf) + 1.0) / (2.0 * nf)).cos(),
                FamilySpec::Hermite => {
                    (2.0 * nf + 1.0).sqrt() * (PI * (nf + 1.0 - kf) / (nf + 1.0)).cos()
                }
                FamilySpec::Laguerre { alpha } => {
                    let t = (2.0 * kf - 1.0) / (2.0 * nf);
                    (4.0 * nf + 2.0 * alpha + 2.0) * t * t
                }
            }
        })
        .collect();
    Configuration::new(*spec, points)
}

/// Outcome of one damped Newton step.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonStep {
    pub next: Configuration,
    /// Infinity norm of the accepted step.
    pub step_norm: f64,
    /// Infinity norm of the full Newton step before any backtracking.
    pub full_step_norm: f64,
    pub backtracks: usize,
    /// `ln f(next) − ln f(current)`.
    pub energy_gain: f64,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// One Newton step with an admissibility and ascent line search.
///
/// A trial step is accepted once the moved configuration is admissible and
/// `ln f` does not decrease. When the trial step is already below the
/// convergence threshold the ascent test is skipped: the true energy change
/// is then below what the computed gradient can resolve.
pub fn newton_step(config: &Configuration, settings: &SolverSettings) -> Result<NewtonStep> {
    let g = DVector::from_vec(gradient(config));
    let neg_h = -hessian(config);
    let chol = neg_h.cholesky().ok_or(Error::FactorizationFailure)?;
    let mut delta: Vec<f64> = chol.solve(&g).iter().copied().collect();
    if delta.iter().any(|d| !d.is_finite()) {
        return Err(Error::FactorizationFailure);
    }
    let full_step_norm = inf_norm(&delta);
    let threshold = settings.threshold(config.points());

    for backtracks in 0..=settings.max_backtracks {
        if backtracks > 0 {
            delta
                .iter_mut()
                .for_each(|d| *d *= settings.backtracking_factor);
        }
        let step_norm = inf_norm(&delta);
        let Some(gain) = log_energy_change(config, &delta) else {
            continue;
        };
        if gain < 0.0 && step_norm > threshold {
            continue;
        }
        let moved = config
            .points()
            .iter()
            .zip(&delta)
            .map(|(x, d)| x + d)
            .collect();
        // the ln_1p screen is exact in real arithmetic; rounding of x + d can
        // still collapse neighbours or land on an endpoint
        let Ok(next) = Configuration::new(*config.spec(), moved) else {
            continue;
        };
        return Ok(NewtonStep {
            next,
            step_norm,
            full_step_norm,
            backtracks,
            energy_gain: gain,
        });
    }
    Err(Error::LineSearchStalled {
        backtracks: settings.max_backtracks,
    })
}

/// Per-iteration record of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub step_norm: f64,
    pub full_step_norm: f64,
    pub threshold: f64,
    pub backtracks: usize,
    pub energy_gain: f64,
    /// `ln f` after the step.
    pub log_energy: f64,
    /// Every point of the accepted iterate, kept for auditing.
    pub points: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub zeros: Configuration,
    pub iterations: usize,
    /// Infinity norm of the last accepted Newton step, used as the error
    /// estimate.
    pub final_step_norm: f64,
    pub final_gradient_norm: f64,
    pub converged: bool,
    /// `ln f` at the starting configuration.
    pub initial_log_energy: f64,
    pub trace: Vec<IterationRecord>,
}

pub fn solve(spec: &FamilySpec, n: usize, settings: &SolverSettings) -> Result<SolveReport> {
    solve_from(initial_guess(spec, n)?, settings)
}

/// Runs the iteration from an explicit starting configuration.
pub fn solve_from(start: Configuration, settings: &SolverSettings) -> Result<SolveReport> {
    settings.validate()?;
    let initial_log_energy = log_energy(&start);
    let mut current = start;
    let mut trace = Vec::new();
    let mut final_step_norm = f64::INFINITY;
    let mut converged = false;

    for iteration in 1..=settings.max_iterations {
        let threshold = settings.threshold(current.points());
        let step = newton_step(&current, settings).map_err(|e| Error::Iteration {
            iteration,
            source: Box::new(e),
        })?;
        final_step_norm = step.step_norm;
        current = step.next;
        trace.push(IterationRecord {
            iteration,
            step_norm: step.step_norm,
            full_step_norm: step.full_step_norm,
            threshold,
            backtracks: step.backtracks,
            energy_gain: step.energy_gain,
            log_energy: log_energy(&current),
            points: current.points().to_vec(),
        });
        if step.step_norm <= threshold {
            converged = true;
            break;
        }
    }

    let final_gradient_norm = inf_norm(&gradient(&current));
    Ok(SolveReport {
        iterations: trace.len(),
        zeros: current,
        final_step_norm,
        final_gradient_norm,
        converged,
        initial_log_energy,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Preset, REFERENCE_CASES};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    #[test]
    fn guesses_are_admissible() {
        for case in REFERENCE_CASES {
            for n in 1..=60 {
                initial_guess(&case.spec, n).unwrap();
            }
        }
        assert!(matches!(
            initial_guess(&FamilySpec::Hermite, 0),
            Err(Error::InvalidDegree(0))
        ));
    }

    #[test]
    fn guess_small_cases() {
        let j = initial_guess(&Preset::Legendre.spec(), 1).unwrap();
        assert_abs_diff_eq!(j.points()[0], 0.0, epsilon = 1e-16);
        let h = initial_guess(&FamilySpec::Hermite, 1).unwrap();
        assert_abs_diff_eq!(h.points()[0], 0.0, epsilon = 1e-15);

        let c = initial_guess(&Preset::ChebyshevFirstKind.spec(), 4).unwrap();
        let expected: Vec<f64> = [7.0, 5.0, 3.0, 1.0]
            .iter()
            .map(|m| (PI / 8.0 * m).cos())
            .collect();
        for (a, b) in c.points().iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-16);
        }
    }

    #[test]
    fn hermite_single_step() {
        let c = Configuration::new(FamilySpec::Hermite, vec![0.5]).unwrap();
        let s = newton_step(&c, &SolverSettings::default()).unwrap();
        assert_eq!(s.next.points(), &[0.0]);
        assert_eq!(s.step_norm, 0.5);
        assert_eq!(s.backtracks, 0);
        assert!(s.energy_gain > 0.0);
    }

    #[test]
    fn hermite_step_at_equilibrium() {
        let r = 1.0 / SQRT_2;
        let c = Configuration::new(FamilySpec::Hermite, vec![-r, r]).unwrap();
        let s = newton_step(&c, &SolverSettings::default()).unwrap();
        assert!(s.step_norm <= 1e-15);
    }

    #[test]
    fn laguerre_step_backtracks_into_domain() {
        let c = Configuration::new(FamilySpec::Laguerre { alpha: 0.0 }, vec![2.0]).unwrap();
        let s = newton_step(&c, &SolverSettings::default()).unwrap();
        assert_abs_diff_eq!(s.full_step_norm, 2.0, epsilon = 1e-15);
        assert_eq!(s.backtracks, 1);
        assert_abs_diff_eq!(s.next.points()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.step_norm, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn line_search_stall_is_reported() {
        // one backtrack allowed, but the full step leaves the domain twice over
        let c = Configuration::new(FamilySpec::Laguerre { alpha: 0.0 }, vec![4.0]).unwrap();
        let settings = SolverSettings {
            max_backtracks: 1,
            ..Default::default()
        };
        // G = 1/8 - 1/2, H = -1/32, step = -12
        assert!(matches!(
            newton_step(&c, &settings),
            Err(Error::LineSearchStalled { backtracks: 1 })
        ));
    }

    #[test]
    fn settings_validation() {
        let bad = [
            SolverSettings {
                tolerance: 0.0,
                ..Default::default()
            },
            SolverSettings {
                max_iterations: 0,
                ..Default::default()
            },
            SolverSettings {
                backtracking_factor: 1.0,
                ..Default::default()
            },
            SolverSettings {
                max_backtracks: 0,
                ..Default::default()
            },
        ];
        for s in bad {
            assert!(matches!(
                solve(&FamilySpec::Hermite, 3, &s),
                Err(Error::InvalidSettings(_))
            ));
        }
    }

    #[test]
    fn small_closed_forms() {
        let settings = SolverSettings::default();
        let r = solve(&FamilySpec::Hermite, 1, &settings).unwrap();
        assert!(r.converged);
        assert_eq!(r.zeros.points(), &[0.0]);

        let r = solve(&Preset::Legendre.spec(), 2, &settings).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(r.zeros.points()[0], -x, epsilon = 1e-14);
        assert_abs_diff_eq!(r.zeros.points()[1], x, epsilon = 1e-14);
    }

    #[test]
    fn iterates_stay_admissible_and_ascend() {
        let settings = SolverSettings::default();
        for case in REFERENCE_CASES {
            for n in 1..=30 {
                let r = solve(&case.spec, n, &settings).unwrap();
                assert!(r.converged, "{} n={n}", case.column);
                for rec in &r.trace {
                    Configuration::new(case.spec, rec.points.clone()).unwrap();
                    if rec.step_norm > rec.threshold {
                        assert!(rec.energy_gain > 0.0, "{} n={n}: {rec:?}", case.column);
                    }
                }
            }
        }
    }
}
