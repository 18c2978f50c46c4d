#![allow(dead_code)]

use ortho_zeros::{Configuration, FamilyKind, FamilySpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random family of the given kind with parameters in (-0.9, 3).
pub fn random_spec(kind: FamilyKind, rng: &mut ChaCha8Rng) -> FamilySpec {
    match kind {
        FamilyKind::Jacobi => FamilySpec::Jacobi {
            alpha: rng.random_range(-0.9..3.0),
            beta: rng.random_range(-0.9..3.0),
        },
        FamilyKind::Laguerre => FamilySpec::Laguerre {
            alpha: rng.random_range(-0.9..3.0),
        },
        FamilyKind::Hermite => FamilySpec::Hermite,
    }
}

/// Random admissible configuration of `n` points. Consecutive gaps, and the
/// margins to finite domain ends, are drawn from [0.2, 1] before scaling so no
/// two points crowd each other.
pub fn random_configuration(spec: FamilySpec, n: usize, rng: &mut ChaCha8Rng) -> Configuration {
    let gaps: Vec<f64> = (0..=n).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = gaps.iter().sum();
    let mut acc = 0.0;
    let unit: Vec<f64> = gaps[..n]
        .iter()
        .map(|g| {
            acc += g;
            acc / total
        })
        .collect();
    let nf = n as f64;
    let points = match spec {
        FamilySpec::Jacobi { .. } => unit.iter().map(|u| 2.0 * u - 1.0).collect(),
        FamilySpec::Laguerre { alpha } => {
            let span = 4.0 * nf + 2.0 * alpha + 2.0;
            unit.iter().map(|u| span * u).collect()
        }
        FamilySpec::Hermite => {
            let half = (2.0 * nf + 1.0).sqrt() + 1.0;
            let shift = rng.random_range(-1.0..1.0);
            unit.iter()
                .map(|u| half * (2.0 * u - 1.0) + shift)
                .collect()
        }
    };
    Configuration::new(spec, points).expect("generator yields admissible points")
}

pub const KINDS: [FamilyKind; 3] = [
    FamilyKind::Jacobi,
    FamilyKind::Laguerre,
    FamilyKind::Hermite,
];
