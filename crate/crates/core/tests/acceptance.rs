//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and fails if any criterion fails.
//!
//! ```text
//! cargo test -p ortho-zeros --test acceptance -- --nocapture
//! ```

mod common;

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use ortho_zeros::equilibrium::log_energy;
use ortho_zeros::verify::{
    chebyshev_exact_zeros, definiteness_audit, infinity_norm_diff, polish_residual,
};
use ortho_zeros::{
    gradient, hessian, proposition_residual, q_at, solve, Configuration, FamilySpec, Preset,
    SolverSettings, REFERENCE_CASES,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_configuration, random_spec, KINDS};

mod tolerance {
    /// Chebyshev exact error, criteria 1-2.
    pub const CHEBYSHEV_EXACT: f64 = 1e-15;
    pub const CHEBYSHEV_RUNTIME_SECS: f64 = 1.0;
    /// Final Newton step, criterion 3.
    pub const ERROR_ESTIMATE: f64 = 1e-13;
    pub const MAX_ITERATIONS: usize = 30;
    pub const TABLE_RUNTIME_SECS: f64 = 10.0;
    /// Recurrence-oracle Newton correction, criterion 4.
    pub const POLISH: f64 = 1e-12;
    /// Bridge identity, criterion 5.
    pub const BRIDGE_RELATIVE: f64 = 1e-12;
    /// Finite-difference step and tolerance, criterion 7.
    pub const FD_STEP: f64 = 1e-6;
    pub const FD_RELATIVE: f64 = 1e-5;
    /// Closed-form small zeros, criterion 8.
    pub const SMALL_ZEROS: f64 = 1e-14;
}

struct Gate {
    results: Vec<(usize, String, bool, String)>,
}

impl Gate {
    fn check(&mut self, id: usize, name: &str, outcome: Result<String, String>) {
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        println!(
            "[{}] criterion {id}: {name} -- {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        self.results.push((id, name.to_string(), ok, detail));
    }
}

fn chebyshev_exactness(n: usize) -> Result<String, String> {
    let start = Instant::now();
    let report = solve(
        &Preset::ChebyshevFirstKind.spec(),
        n,
        &SolverSettings::default(),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let err = infinity_norm_diff(report.zeros.points(), &chebyshev_exact_zeros(n)).unwrap();
    let detail = format!("exact error {err:.3e}, {} ms", elapsed.as_millis());
    if err <= tolerance::CHEBYSHEV_EXACT
        && elapsed < Duration::from_secs_f64(tolerance::CHEBYSHEV_RUNTIME_SECS)
    {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn error_table_reproduction() -> Result<String, String> {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for n in [20, 25] {
        for case in REFERENCE_CASES {
            match solve(&case.spec, n, &SolverSettings::default()) {
                Ok(r) => {
                    worst = worst.max(r.final_step_norm);
                    if !r.converged
                        || r.iterations > tolerance::MAX_ITERATIONS
                        || r.final_step_norm > tolerance::ERROR_ESTIMATE
                    {
                        failures.push(format!(
                            "{} n={n}: converged={} it={} step={:.3e}",
                            case.row, r.converged, r.iterations, r.final_step_norm
                        ));
                    }
                }
                Err(e) => failures.push(format!("{} n={n}: {e}", case.row)),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs_f64(tolerance::TABLE_RUNTIME_SECS) {
        failures.push(format!("runtime {} ms", elapsed.as_millis()));
    }
    if failures.is_empty() {
        Ok(format!(
            "largest error estimate {worst:.3e}, {} ms",
            elapsed.as_millis()
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn oracle_agreement() -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for case in REFERENCE_CASES {
        for n in 1..=25 {
            let outcome = solve(&case.spec, n, &SolverSettings::default())
                .and_then(|r| polish_residual(&case.spec, n, r.zeros.points()));
            match outcome {
                Ok(p) if p <= tolerance::POLISH => worst = worst.max(p),
                Ok(p) => failures.push(format!("{} n={n}: {p:.3e}", case.column)),
                Err(e) => failures.push(format!("{} n={n}: {e}", case.column)),
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("worst polish residual {worst:.3e} over 175 solves"))
    } else {
        Err(failures.join("; "))
    }
}

fn bridge_identity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for kind in KINDS {
        for trial in 0..100 {
            let n = 1 + trial % 10;
            let spec = random_spec(kind, &mut rng);
            let c = random_configuration(spec, n, &mut rng);
            let g = gradient(&c);
            let p = proposition_residual(&c);
            for k in 0..n {
                let rhs = 2.0 * q_at(&spec, c.points()[k]) * g[k];
                let rel = (p[k] - rhs).abs() / p[k].abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
                worst = worst.max(rel);
                if rel > tolerance::BRIDGE_RELATIVE {
                    return Err(format!(
                        "{spec} n={n} k={k}: {} vs {rhs} (rel {rel:.3e})",
                        p[k]
                    ));
                }
            }
        }
    }
    Ok(format!(
        "worst relative deviation {worst:.3e} over 300 configurations"
    ))
}

fn concavity_suite() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for kind in KINDS {
        for trial in 0..100 {
            let n = 2 + trial % 14;
            let spec = random_spec(kind, &mut rng);
            let c = random_configuration(spec, n, &mut rng);
            let audit = definiteness_audit(&c);
            if !audit.all() {
                return Err(format!("{spec} n={n}: {audit:?}"));
            }
        }
    }
    Ok("300 configurations, all audits true".into())
}

fn derivative_consistency() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = tolerance::FD_STEP;
    let mut worst = 0.0f64;
    let shifted = |c: &Configuration, k: usize, d: f64| {
        let mut p = c.points().to_vec();
        p[k] += d;
        Configuration::new(*c.spec(), p).expect("step keeps the configuration admissible")
    };
    for kind in KINDS {
        for trial in 0..50 {
            let n = 1 + trial % 10;
            let spec = random_spec(kind, &mut rng);
            let c = random_configuration(spec, n, &mut rng);
            let g = gradient(&c);
            let hess = hessian(&c);
            for k in 0..n {
                let plus = shifted(&c, k, h);
                let minus = shifted(&c, k, -h);
                let fd = (log_energy(&plus) - log_energy(&minus)) / (2.0 * h);
                let dev = (fd - g[k]).abs() / g[k].abs().max(1.0);
                worst = worst.max(dev);
                if dev > tolerance::FD_RELATIVE {
                    return Err(format!("{spec} n={n} gradient[{k}]: fd {fd} vs {}", g[k]));
                }
                let (gp, gm) = (gradient(&plus), gradient(&minus));
                for i in 0..n {
                    let fd = (gp[i] - gm[i]) / (2.0 * h);
                    let dev = (fd - hess[(i, k)]).abs() / hess[(i, k)].abs().max(1.0);
                    worst = worst.max(dev);
                    if dev > tolerance::FD_RELATIVE {
                        return Err(format!(
                            "{spec} n={n} hessian[{i},{k}]: fd {fd} vs {}",
                            hess[(i, k)]
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("worst relative deviation {worst:.3e}"))
}

fn small_closed_forms() -> Result<String, String> {
    let settings = SolverSettings::default();
    let (alpha, beta) = (0.25, 0.125);
    let cases: [(FamilySpec, Vec<f64>); 4] = [
        (
            Preset::Legendre.spec(),
            vec![-1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt()],
        ),
        (FamilySpec::Hermite, vec![-1.0 / SQRT_2, 1.0 / SQRT_2]),
        (Preset::ClassicalLaguerre.spec(), vec![1.0]),
        (
            FamilySpec::Jacobi { alpha, beta },
            vec![(beta - alpha) / (alpha + beta + 2.0)],
        ),
    ];
    let mut worst = 0.0f64;
    for (spec, expected) in cases {
        let r = solve(&spec, expected.len(), &settings).map_err(|e| e.to_string())?;
        let err = infinity_norm_diff(r.zeros.points(), &expected).unwrap();
        worst = worst.max(err);
        if err > tolerance::SMALL_ZEROS {
            return Err(format!("{spec}: error {err:.3e}"));
        }
    }
    Ok(format!("worst error {worst:.3e}"))
}

fn degenerate_and_monotone() -> Result<String, String> {
    let settings = SolverSettings::default();
    // n = 1 analytic zeros
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for kind in KINDS {
        for _ in 0..20 {
            let spec = random_spec(kind, &mut rng);
            let exact = match spec {
                FamilySpec::Jacobi { alpha, beta } => (beta - alpha) / (alpha + beta + 2.0),
                FamilySpec::Laguerre { alpha } => alpha + 1.0,
                FamilySpec::Hermite => 0.0,
            };
            let r = solve(&spec, 1, &settings).map_err(|e| e.to_string())?;
            let err = (r.zeros.points()[0] - exact).abs();
            if !r.converged || err > tolerance::SMALL_ZEROS * exact.abs().max(1.0) {
                return Err(format!(
                    "{spec} n=1: got {:?}, expected {exact}",
                    r.zeros.points()
                ));
            }
        }
    }
    // ascent in every trace, for every step the iteration does not treat as
    // converged
    let mut steps = 0;
    for case in REFERENCE_CASES {
        for n in 1..=30 {
            let r = solve(&case.spec, n, &settings).map_err(|e| e.to_string())?;
            for rec in r.trace.iter().filter(|rec| rec.step_norm > rec.threshold) {
                steps += 1;
                if rec.energy_gain.is_nan() || rec.energy_gain <= 0.0 {
                    return Err(format!(
                        "{} n={n} iteration {}: energy change {:.3e}",
                        case.column, rec.iteration, rec.energy_gain
                    ));
                }
            }
        }
    }
    Ok(format!(
        "n=1 exact for 60 random families; {steps} ascent steps strictly increase ln f"
    ))
}

#[test]
fn acceptance_criteria() {
    let mut gate = Gate {
        results: Vec::new(),
    };
    gate.check(1, "Chebyshev exactness n=20", chebyshev_exactness(20));
    gate.check(2, "Chebyshev exactness n=25", chebyshev_exactness(25));
    gate.check(
        3,
        "error-estimate tables n=20, 25",
        error_table_reproduction(),
    );
    gate.check(4, "recurrence oracle agreement n=1..25", oracle_agreement());
    gate.check(5, "bridge identity", bridge_identity());
    gate.check(6, "concavity audit", concavity_suite());
    gate.check(7, "derivative consistency", derivative_consistency());
    gate.check(8, "small closed-form zeros", small_closed_forms());
    gate.check(
        9,
        "degenerate n=1 and monotone ascent",
        degenerate_and_monotone(),
    );

    let failed: Vec<_> = gate.results.iter().filter(|r| !r.2).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed",
        gate.results.len() - failed.len(),
        gate.results.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn chebyshev_from_a_generic_start() {
    // the default guess already sits on the Chebyshev zeros; start elsewhere
    let spec = Preset::ChebyshevFirstKind.spec();
    for n in [20, 25] {
        let start = ortho_zeros::initial_guess(&Preset::Legendre.spec(), n)
            .map(|c| c.into_points())
            .map(|p| p.iter().map(|x| 0.9 * x).collect::<Vec<_>>())
            .unwrap();
        let start = Configuration::new(spec, start).unwrap();
        let r = ortho_zeros::solve_from(start, &SolverSettings::default()).unwrap();
        assert!(r.converged);
        let err = infinity_norm_diff(r.zeros.points(), &chebyshev_exact_zeros(n)).unwrap();
        assert!(
            err <= tolerance::CHEBYSHEV_EXACT,
            "n={n}: {err:.3e}, {} iterations",
            r.iterations
        );
    }
}
