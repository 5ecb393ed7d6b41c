//! Firm reallocation dynamics: the continuity equation
//! d(mu)/dt + d(mu * d(pi)/di)/di = 0 on a periodic sector grid, solved with
//! conservative donor-cell fluxes and explicit adaptive time stepping.

mod config;
mod error;
pub mod export;
mod scheme;
mod trajectory;

pub use config::{SolverConfig, MIN_DT};
pub use error::{Result, SolverError};
pub use scheme::{adaptive_dt, step, velocity_field, Stepper};
pub use trajectory::{simulate, Trajectory};
