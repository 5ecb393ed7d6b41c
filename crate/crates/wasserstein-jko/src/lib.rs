//! Quadratic-cost optimal transport on the circle of sectors and the JKO
//! proximal scheme for the reallocation gradient flow.
//!
//! Measures are given as cell masses on a [`CircleGrid`](economy_core::CircleGrid).
//! Two readings of the same masses are supported: atoms at the cell centres
//! (the exact discrete problem, checked against a min-cost-flow oracle) and
//! piecewise-constant densities (used by the JKO step, where transport between
//! neighbouring states must vary smoothly with the masses).

mod circle;
mod error;
mod jko;
mod oracle;

pub use circle::{
    min_reallocation_cost, optimal_plan_circle, w2_distance_circle, w2_distance_circle_histogram, CellMass,
    TransportPlan,
};
pub use error::{OtError, Result};
pub use jko::{jko_step, jko_trajectory, JkoOptions, JkoOutcome, JkoTrajectory};
pub use oracle::{brute_force_ot, ORACLE_MAX_CELLS};

/// Cell masses of `mu` rotated by `k` cells.
pub fn rotate(masses: &[f64], k: usize) -> Vec<f64> {
    let n = masses.len();
    (0..n).map(|j| masses[(j + n - k % n) % n]).collect()
}
