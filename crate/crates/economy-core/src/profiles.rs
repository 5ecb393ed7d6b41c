//! Standard sector profiles.

use std::f64::consts::PI;

use crate::grid::CircleGrid;

/// amp * sin(2 pi (x/n - phase)) + offset sampled at cell centres.
pub fn sine(grid: &CircleGrid, amp: f64, phase: f64, offset: f64) -> Vec<f64> {
    let n = grid.n();
    grid.sample(|x| amp * (2.0 * PI * (x / n - phase)).sin() + offset)
}

/// v1 on the first half of the circle, v2 on the second.
pub fn step(grid: &CircleGrid, v1: f64, v2: f64) -> Vec<f64> {
    let half = grid.n() / 2.0;
    grid.sample(|x| if x < half { v1 } else { v2 })
}

/// Labour endowment of the numerical experiments, [sin(2 pi (i - 1/4)) + 3] / 2,
/// rescaled to unit mass.
pub fn baseline_labour(grid: &CircleGrid) -> Vec<f64> {
    let raw = sine(grid, 0.5, 0.25, 1.5);
    let mass = raw.iter().sum::<f64>() * grid.h();
    raw.into_iter().map(|v| v / mass).collect()
}
