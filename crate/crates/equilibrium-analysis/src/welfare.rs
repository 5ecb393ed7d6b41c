use economy_core::{CircleGrid, EquilibriumMap, FirmDistribution, ModelParams, SectorProfiles};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::steady::steady_state;

/// Whether the long-run equilibrium should maximise or minimise X.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WelfareDirection {
    Maximises,
    Minimises,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WelfareReport {
    pub direction: WelfareDirection,
    pub trials: usize,
    pub x_equilibrium: f64,
    pub violations: usize,
    /// Largest relative amount by which a random density beat the equilibrium.
    pub max_violation: f64,
    /// Signed relative excess of the best competitor; negative when the equilibrium wins every trial.
    pub worst_excess: f64,
}

const HARMONICS: usize = 8;

/// Per-trial generator derived from the run seed, independent across trials.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Strictly positive smooth density exp(sum of the first 8 harmonics with
/// random coefficients), normalised to unit mass.
pub fn random_feasible_density(grid: CircleGrid, rng: &mut impl Rng, amplitude: f64) -> Result<FirmDistribution> {
    let coeffs: Vec<(f64, f64)> =
        (0..HARMONICS).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let n = grid.n();
    let raw = grid.sample(|x| {
        let s: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = 2.0 * std::f64::consts::PI * (k + 1) as f64 * x / n;
                (a * w.cos() + b * w.sin()) / (k + 1) as f64
            })
            .sum();
        (amplitude * s).exp()
    });
    Ok(FirmDistribution::normalized(grid, raw)?)
}

/// Compares X at the long-run equilibrium with X at random feasible densities.
pub fn check_first_welfare(
    profiles: &SectorProfiles,
    params: &ModelParams,
    trials: usize,
    rng_seed: u64,
) -> Result<WelfareReport> {
    let map = EquilibriumMap::new(profiles, params)?;
    let eq = steady_state(profiles, params)?;
    let x_eq = map.consumption(eq.values())?;
    let direction = if params.eta > params.beta - 1.0 { WelfareDirection::Maximises } else { WelfareDirection::Minimises };
    let mut report = WelfareReport { direction, trials, x_equilibrium: x_eq, violations: 0, max_violation: 0.0, worst_excess: f64::NEG_INFINITY };
    for t in 0..trials {
        let mut rng = trial_rng(rng_seed, t as u64);
        let amplitude = rng.random_range(0.1..2.0);
        let mu = random_feasible_density(*profiles.grid(), &mut rng, amplitude)?;
        let x = map.consumption(mu.values())?;
        let excess = match direction {
            WelfareDirection::Maximises => (x - x_eq) / x_eq,
            WelfareDirection::Minimises => (x_eq - x) / x_eq,
        };
        if excess > 1e-12 {
            report.violations += 1;
        }
        report.worst_excess = report.worst_excess.max(excess);
        report.max_violation = report.max_violation.max(excess);
    }
    Ok(report)
}
