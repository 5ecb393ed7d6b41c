use economy_core::FirmDistribution;
use pde_dynamics::Trajectory;

use crate::error::{AnalysisError, Result};

/// Least-squares fit of ||mu(t) - mu_EQ|| ~ C1 exp(-C2 t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceFit {
    pub c1: f64,
    pub c2: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 10;
const FLOOR: f64 = 1e-12;

/// Fits the middle 60% of the decay: points whose log-distance lies between
/// 20% and 80% of the way from the initial to the final value.
pub fn fit_exponential(times: &[f64], distances: &[f64]) -> Result<ConvergenceFit> {
    if times.len() != distances.len() {
        return Err(AnalysisError::Config("times and distances differ in length".into()));
    }
    let logs: Vec<(f64, f64)> =
        times.iter().zip(distances).filter(|(_, d)| **d > FLOOR).map(|(t, d)| (*t, d.ln())).collect();
    if logs.len() < MIN_FIT_POINTS {
        return Err(AnalysisError::DegenerateFit(format!("only {} usable points", logs.len())));
    }
    let start = logs[0].1;
    let end = logs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let drop = start - end;
    if !(drop > 1e-9) {
        return Err(AnalysisError::DegenerateFit("distance does not decay".into()));
    }
    let (hi, lo) = (start - 0.2 * drop, start - 0.8 * drop);
    let pts: Vec<(f64, f64)> = logs.into_iter().filter(|(_, l)| *l <= hi && *l >= lo).collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(AnalysisError::DegenerateFit(format!("only {} points inside the fit window", pts.len())));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt = pts.iter().map(|p| (p.0 - mt).powi(2)).sum::<f64>();
    let stl = pts.iter().map(|p| (p.0 - mt) * (p.1 - ml)).sum::<f64>();
    let sll = pts.iter().map(|p| (p.1 - ml).powi(2)).sum::<f64>();
    if stt == 0.0 {
        return Err(AnalysisError::DegenerateFit("fit window has a single time".into()));
    }
    let slope = stl / stt;
    let intercept = ml - slope * mt;
    if slope >= 0.0 {
        return Err(AnalysisError::DegenerateFit(format!("non-negative log slope {slope}")));
    }
    let r_squared = if sll == 0.0 { 1.0 } else { (stl * stl) / (stt * sll) };
    let window = (pts.first().expect("non-empty").0, pts.last().expect("non-empty").0);
    Ok(ConvergenceFit { c1: intercept.exp(), c2: -slope, r_squared, window, points: pts.len() })
}

/// Exponential-rate fit of a simulated trajectory's L2 distance to `reference`.
pub fn fit_convergence_rate(traj: &Trajectory, reference: &FirmDistribution) -> Result<ConvergenceFit> {
    let d: Vec<f64> = traj.snapshots.iter().map(|s| s.l2_distance(reference)).collect();
    fit_exponential(&traj.times, &d)
}
