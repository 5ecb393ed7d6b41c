// Shared helpers for economy-core integration tests.
#![allow(dead_code)]

use economy_core::{CircleGrid, FirmDistribution};
use rand::{Rng, SeedableRng};

pub fn grid(cells: usize) -> CircleGrid {
    CircleGrid::new(cells, 1.0).unwrap()
}

/// Smooth positive density exp(sum of a few random harmonics), unit mass.
pub fn random_density(grid: CircleGrid, seed: u64, amp: f64) -> FirmDistribution {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (0..4).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let n = grid.n();
    let mu = grid.sample(|x| {
        let s: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = 2.0 * std::f64::consts::PI * (k + 1) as f64 * x / n;
                (a * w.cos() + b * w.sin()) / (k + 1) as f64
            })
            .sum();
        (amp * s).exp()
    });
    FirmDistribution::normalized(grid, mu).unwrap()
}

/// Raw baseline labour profile, [sin(2 pi (x - 1/4)) + 3] / 2; integrates to 1.5.
pub fn raw_labour(x: f64) -> f64 {
    ((2.0 * std::f64::consts::PI * (x - 0.25)).sin() + 3.0) / 2.0
}
