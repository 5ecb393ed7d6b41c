use crate::error::{Result, SolverError};

/// Time-stepping controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_every: f64,
    pub max_steps: usize,
    pub positivity_retry_shrink: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { cfl: 0.4, t_end: 1.0, snapshot_every: 0.1, max_steps: 5_000_000, positivity_retry_shrink: 0.5 }
    }
}

/// Retries below this step size are treated as stiffness.
pub const MIN_DT: f64 = 1e-14;

impl SolverConfig {
    pub fn new(t_end: f64, snapshot_every: f64) -> Self {
        SolverConfig { t_end, snapshot_every, ..Default::default() }
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SolverError::Config(m));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0,1], got {}", self.cfl));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if !(self.snapshot_every > 0.0 && self.snapshot_every.is_finite()) {
            return bad(format!("snapshot_every must be positive, got {}", self.snapshot_every));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        if !(self.positivity_retry_shrink > 0.0 && self.positivity_retry_shrink < 1.0) {
            return bad(format!("positivity_retry_shrink must lie in (0,1), got {}", self.positivity_retry_shrink));
        }
        Ok(())
    }
}
