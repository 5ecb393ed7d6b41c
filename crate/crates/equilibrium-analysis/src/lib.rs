//! Long-run analysis of the reallocation model: closed-form steady states,
//! equilibrium consumption, welfare and efficiency-loss checks, exponential
//! convergence fits and the fixed-cost equilibrium example.

mod convergence;
mod error;
mod fixed_cost;
mod steady;
mod welfare;

pub use convergence::{fit_convergence_rate, fit_exponential, ConvergenceFit, MIN_FIT_POINTS};
pub use error::{AnalysisError, Result};
pub use fixed_cost::{
    fixed_cost_example, fixed_cost_max_slope, fixed_cost_threshold, fixed_cost_threshold_as_printed,
    max_profit_slope, stationarity_check,
};
pub use steady::{
    efficiency_loss, equilibrium_consumption, immobile_exponent, mobile_exponent, optimal_labor_allocation,
    steady_state,
};
pub use welfare::{check_first_welfare, random_feasible_density, trial_rng, WelfareDirection, WelfareReport};
