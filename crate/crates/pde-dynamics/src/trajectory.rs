use economy_core::{FirmDistribution, SectorProfiles, ModelParams};

use crate::config::{SolverConfig, MIN_DT};
use crate::error::{Result, SolverError};
use crate::scheme::Stepper;

/// Recorded solution of the reallocation PDE.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<FirmDistribution>,
    pub f_values: Vec<f64>,
    pub x_values: Vec<f64>,
    pub mass_error: Vec<f64>,
    /// L2 distance to the supplied reference, when one was given.
    pub l2_to_eq: Option<Vec<f64>>,
    /// Every accepted step size, in order.
    pub dt_history: Vec<f64>,
    /// Size of the last accepted step before each snapshot (0 at t = 0).
    pub snapshot_dt: Vec<f64>,
    /// Largest |mass - 1| over all accepted steps.
    pub max_step_mass_error: f64,
    /// Largest decrease F(t_k) - F(t_{k+1}) over accepted steps (<= 0 means monotone).
    pub max_f_decrease: f64,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.dt_history.len()
    }

    pub fn last(&self) -> Option<&FirmDistribution> {
        self.snapshots.last()
    }

    pub fn min_density(&self) -> f64 {
        self.snapshots
            .iter()
            .flat_map(|s| s.values().iter().copied())
            .fold(f64::INFINITY, f64::min)
    }
}

struct Recorder<'a> {
    traj: Trajectory,
    reference: Option<&'a FirmDistribution>,
}

impl Recorder<'_> {
    fn record(&mut self, t: f64, mu: &[f64], stepper: &Stepper, z: f64, dt: f64) -> Result<()> {
        let grid = *stepper.map().grid();
        let dist = FirmDistribution::from_update(grid, mu.to_vec())?;
        let map = stepper.map();
        self.traj.times.push(t);
        self.traj.f_values.push(map.functional_from_z(z));
        self.traj.x_values.push(map.log_consumption_from_z(z).exp());
        self.traj.mass_error.push((dist.mass() - 1.0).abs());
        if let Some(r) = self.reference {
            self.traj.l2_to_eq.get_or_insert_with(Vec::new).push(dist.l2_distance(r));
        }
        self.traj.snapshot_dt.push(dt);
        self.traj.snapshots.push(dist);
        Ok(())
    }
}

/// Integrates the reallocation PDE from `mu0` to `config.t_end`.
///
/// Snapshots are taken at multiples of `snapshot_every` and at `t_end`;
/// step sizes are clipped so those times are hit exactly. A step that would
/// make the density non-positive is retried with a smaller dt.
pub fn simulate(
    mu0: &FirmDistribution,
    profiles: &SectorProfiles,
    params: &ModelParams,
    config: &SolverConfig,
    reference: Option<&FirmDistribution>,
) -> Result<Trajectory> {
    config.validate()?;
    let mut stepper = Stepper::new(profiles, params)?;
    if mu0.grid() != profiles.grid() {
        return Err(SolverError::Config("initial density and profiles live on different grids".into()));
    }
    let h = profiles.grid().h();
    let mut mu = mu0.values().to_vec();
    let mut rec = Recorder { traj: Trajectory::default(), reference };
    let mut z = stepper.evaluate(&mu)?;
    rec.record(0.0, &mu, &stepper, z, 0.0)?;

    let mut t = 0.0;
    let mut k = 1usize;
    let mut f_prev = stepper.map().functional_from_z(z);
    while t < config.t_end {
        let target = (k as f64 * config.snapshot_every).min(config.t_end);
        let remaining = target - t;
        let mut dt = stepper.stable_dt(config.cfl).unwrap_or(remaining).min(remaining);
        loop {
            match stepper.advance(&mu, dt) {
                Ok(next) => {
                    mu.copy_from_slice(next);
                    break;
                }
                Err(SolverError::StepRejected { .. }) => {
                    rec.traj.rejected_steps += 1;
                    dt *= config.positivity_retry_shrink;
                    if dt < MIN_DT {
                        return Err(SolverError::Stiff { t, dt });
                    }
                }
                Err(e) => return Err(e),
            }
        }
        let hit = dt == remaining;
        t = if hit { target } else { t + dt };
        rec.traj.dt_history.push(dt);
        let mass = mu.iter().sum::<f64>() * h;
        rec.traj.max_step_mass_error = rec.traj.max_step_mass_error.max((mass - 1.0).abs());

        z = stepper.evaluate(&mu)?;
        let f = stepper.map().functional_from_z(z);
        rec.traj.max_f_decrease = rec.traj.max_f_decrease.max(f_prev - f);
        f_prev = f;

        if hit {
            rec.record(t, &mu, &stepper, z, dt)?;
            k += 1;
        }
        if rec.traj.steps() >= config.max_steps && t < config.t_end {
            if !hit {
                rec.record(t, &mu, &stepper, z, dt)?;
            }
            return Err(SolverError::Timeout { steps: config.max_steps, t, partial: Box::new(rec.traj) });
        }
    }
    Ok(rec.traj)
}
