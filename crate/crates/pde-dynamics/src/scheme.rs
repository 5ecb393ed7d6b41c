use economy_core::{EquilibriumMap, FirmDistribution, ModelParams, SectorProfiles, POSITIVITY_FLOOR};

use crate::config::SolverConfig;
use crate::error::{Result, SolverError};

/// Reusable work buffers for the upwind update.
///
/// Face `j` sits between cells `j` and `j+1` (periodic), so
/// `v[j] = (pi[j+1] - pi[j]) / h`.
#[derive(Debug, Clone)]
pub struct Stepper {
    map: EquilibriumMap,
    threshold: Option<f64>,
    diffusion_factor: f64,
    pi: Vec<f64>,
    v: Vec<f64>,
    flux: Vec<f64>,
    next: Vec<f64>,
    h: f64,
}

impl Stepper {
    pub fn new(profiles: &SectorProfiles, params: &ModelParams) -> Result<Self> {
        let map = EquilibriumMap::new(profiles, params)?;
        let cells = profiles.grid().cells();
        let threshold = (params.c0 > 0.0).then(|| (2.0 * params.c0).sqrt());
        Ok(Stepper {
            map,
            threshold,
            diffusion_factor: params.profit_exponent().abs(),
            pi: vec![0.0; cells],
            v: vec![0.0; cells],
            flux: vec![0.0; cells],
            next: vec![0.0; cells],
            h: profiles.grid().h(),
        })
    }

    pub fn map(&self) -> &EquilibriumMap {
        &self.map
    }

    pub fn profit_rates(&self) -> &[f64] {
        &self.pi
    }

    pub fn velocities(&self) -> &[f64] {
        &self.v
    }

    /// Recomputes profit rates and face velocities for `mu`; returns Z.
    pub fn evaluate(&mut self, mu: &[f64]) -> Result<f64> {
        let z = self.map.profit_rates_into(mu, &mut self.pi)?;
        let n = self.pi.len();
        let inv_h = 1.0 / self.h;
        for j in 0..n {
            let jp = if j + 1 == n { 0 } else { j + 1 };
            let mut v = (self.pi[jp] - self.pi[j]) * inv_h;
            if let Some(t) = self.threshold {
                if v.abs() <= t {
                    v = 0.0;
                }
            }
            self.v[j] = v;
        }
        Ok(z)
    }

    /// Largest face speed after thresholding.
    pub fn max_speed(&self) -> f64 {
        self.v.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Upper bound of the nonlinear diffusion coefficient mu * |d pi / d mu|.
    pub fn max_diffusion(&self) -> f64 {
        self.diffusion_factor * self.pi.iter().fold(0.0f64, |m, p| m.max(*p))
    }

    /// Explicit stability bound for the last evaluated state, or `None` when
    /// every face velocity vanishes (the update is then the identity).
    pub fn stable_dt(&self, cfl: f64) -> Option<f64> {
        let vmax = self.max_speed();
        if vmax == 0.0 {
            return None;
        }
        let adv = self.h / vmax;
        let d = self.max_diffusion();
        let diff = if d > 0.0 { self.h * self.h / (2.0 * d) } else { f64::INFINITY };
        Some(cfl * adv.min(diff))
    }

    /// Upwind update with the velocities of the last `evaluate` call.
    pub fn advance(&mut self, mu: &[f64], dt: f64) -> Result<&[f64]> {
        let n = mu.len();
        for j in 0..n {
            let jp = if j + 1 == n { 0 } else { j + 1 };
            let v = self.v[j];
            self.flux[j] = v * if v > 0.0 { mu[j] } else { mu[jp] };
        }
        let c = dt / self.h;
        for j in 0..n {
            let jm = if j == 0 { n - 1 } else { j - 1 };
            let m = mu[j] - c * (self.flux[j] - self.flux[jm]);
            if !m.is_finite() {
                return Err(SolverError::Model(economy_core::ModelError::Domain(format!(
                    "non-finite density at cell {j}"
                ))));
            }
            if m <= POSITIVITY_FLOOR {
                return Err(SolverError::StepRejected { dt, cell: j });
            }
            self.next[j] = m;
        }
        Ok(&self.next)
    }
}

/// Face velocities v_{j+1/2} = (pi_{j+1} - pi_j)/h, zeroed where
/// |v| <= sqrt(2 c0) when a fixed reallocation cost is present.
pub fn velocity_field(mu: &FirmDistribution, profiles: &SectorProfiles, params: &ModelParams) -> Result<Vec<f64>> {
    let mut s = Stepper::new(profiles, params)?;
    s.evaluate(mu.values())?;
    Ok(s.v)
}

/// One explicit upwind step of size `dt`.
pub fn step(mu: &FirmDistribution, profiles: &SectorProfiles, params: &ModelParams, dt: f64) -> Result<FirmDistribution> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SolverError::Config(format!("dt must be positive, got {dt}")));
    }
    let mut s = Stepper::new(profiles, params)?;
    s.evaluate(mu.values())?;
    let next = s.advance(mu.values(), dt)?.to_vec();
    Ok(FirmDistribution::from_update(*mu.grid(), next)?)
}

/// dt = cfl * min(h / max|v|, h^2 / (2 D_max)); the snapshot interval when
/// nothing moves.
pub fn adaptive_dt(
    mu: &FirmDistribution,
    profiles: &SectorProfiles,
    params: &ModelParams,
    config: &SolverConfig,
) -> Result<f64> {
    config.validate()?;
    let mut s = Stepper::new(profiles, params)?;
    s.evaluate(mu.values())?;
    Ok(s.stable_dt(config.cfl).unwrap_or(config.snapshot_every))
}
