#![allow(dead_code)]

use economy_core::{profiles, CircleGrid, FirmDistribution, ModelParams, SectorProfiles, Variant};
use rand::{Rng, SeedableRng};

pub const BETA: f64 = 0.86;
pub const SIGMA: f64 = 1.3144;
pub const ETA: f64 = 0.0222;

pub fn grid(cells: usize) -> CircleGrid {
    CircleGrid::new(cells, 1.0).unwrap()
}

/// Smooth positive density exp(amp * random Fourier series), unit mass.
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

/// Immobile-labour economy of the numerical experiments and its initial density 1/L.
pub fn baseline_immobile(cells: usize) -> (SectorProfiles, ModelParams, FirmDistribution) {
    let g = grid(cells);
    let l = profiles::baseline_labour(&g);
    let mu0 = FirmDistribution::normalized(g, l.iter().map(|v| 1.0 / v).collect()).unwrap();
    let prof = SectorProfiles::constant(g, 1.0).unwrap().with_labour(l).unwrap();
    let params = ModelParams::new(BETA, SIGMA, ETA, 1.0, 0.0, Variant::ImmobileLabour).unwrap();
    (prof, params, mu0)
}

/// Closed-form immobile steady state, proportional to L^(beta (sigma-1)/((beta-eta)(sigma-1)+1)) for A0 = 1.
pub fn immobile_steady_state(prof: &SectorProfiles) -> FirmDistribution {
    let e = BETA * (SIGMA - 1.0) / ((BETA - ETA) * (SIGMA - 1.0) + 1.0);
    let l = prof.labour().unwrap();
    FirmDistribution::normalized(*prof.grid(), l.iter().map(|v| v.powf(e)).collect()).unwrap()
}
