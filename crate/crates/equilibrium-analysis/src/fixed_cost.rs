use economy_core::{CircleGrid, FirmDistribution, ModelParams, SectorProfiles, Variant};
use pde_dynamics::velocity_field;

use crate::error::{AnalysisError, Result};

fn check_example(alpha: f64, params: &ModelParams) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(AnalysisError::Config(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if params.rho() >= alpha {
        return Err(AnalysisError::Config(format!(
            "the example needs sigma(1-beta)+beta < alpha, got rho = {} >= {alpha}",
            params.rho()
        )));
    }
    if params.n != 1.0 {
        return Err(AnalysisError::Config("the example lives on the unit circle (n = 1)".into()));
    }
    if params.variant != Variant::MobileBaseline {
        return Err(AnalysisError::Config("the example uses the mobile baseline economy".into()));
    }
    Ok(())
}

/// Cumulative mass of the density C_a x^-a on (0,1/2], mirrored on (1/2,1).
fn example_cdf(alpha: f64, x: f64) -> f64 {
    let c = (1.0 - alpha) / 2f64.powf(alpha);
    let tail = |y: f64| c * y.powf(1.0 - alpha) / (1.0 - alpha);
    if x <= 0.5 {
        tail(x)
    } else {
        1.0 - tail(1.0 - x)
    }
}

/// Exact cell averages of the singular fixed-cost equilibrium density.
pub fn fixed_cost_example(alpha: f64, grid: CircleGrid, params: &ModelParams) -> Result<FirmDistribution> {
    check_example(alpha, params)?;
    if grid.n() != 1.0 {
        return Err(AnalysisError::Config("the example lives on the unit circle (n = 1)".into()));
    }
    let h = grid.h();
    let masses: Vec<f64> = (0..grid.cells())
        .map(|j| {
            let x0 = j as f64 * h;
            let x1 = if j + 1 == grid.cells() { 1.0 } else { (j + 1) as f64 * h };
            example_cdf(alpha, x1) - example_cdf(alpha, x0)
        })
        .collect();
    Ok(FirmDistribution::from_masses(grid, &masses)?)
}

/// Largest profit-rate slope of the example, attained at x = 1/2:
/// 2 alpha (1-beta) (alpha (1-rho) + rho) / ((1-alpha) rho^2).
pub fn fixed_cost_max_slope(alpha: f64, params: &ModelParams) -> Result<f64> {
    check_example(alpha, params)?;
    let rho = params.rho();
    Ok(2.0 * alpha * (1.0 - params.beta) * (alpha * (1.0 - rho) + rho) / ((1.0 - alpha) * rho * rho))
}

/// Smallest fixed cost that makes the example stationary, half the squared maximal slope.
pub fn fixed_cost_threshold(alpha: f64, params: &ModelParams) -> Result<f64> {
    let s = fixed_cost_max_slope(alpha, params)?;
    Ok(0.5 * s * s)
}

/// The threshold as printed in the source article. Kept for comparison only:
/// it disagrees with the maximal slope of its own example.
pub fn fixed_cost_threshold_as_printed(alpha: f64, params: &ModelParams) -> Result<f64> {
    check_example(alpha, params)?;
    let (beta, sigma) = (params.beta, params.sigma);
    let rho = params.rho();
    let num = alpha * (1.0 - beta) * (1.0 - alpha).powf(((sigma - 1.0) * (1.0 - beta) - 1.0) / rho);
    let den = 2f64.powf(alpha - 1.0 + alpha / rho) * ((1.0 - alpha) * rho + alpha);
    Ok(0.5 * (num / den).powi(2))
}

/// Largest |d pi / di| over the faces of the grid, before any thresholding.
pub fn max_profit_slope(mu: &FirmDistribution, profiles: &SectorProfiles, params: &ModelParams) -> Result<f64> {
    let smooth = params.with_c0(0.0)?;
    let v = velocity_field(mu, profiles, &smooth).map_err(|e| match e {
        pde_dynamics::SolverError::Model(m) => AnalysisError::Model(m),
        other => AnalysisError::Config(other.to_string()),
    })?;
    Ok(v.iter().fold(0.0, |m, x| m.max(x.abs())))
}

/// True when no firm wants to move: max |d pi / di| <= sqrt(2 c0) on every face.
pub fn stationarity_check(mu: &FirmDistribution, profiles: &SectorProfiles, params: &ModelParams) -> Result<bool> {
    Ok(max_profit_slope(mu, profiles, params)? <= (2.0 * params.c0).sqrt() + 1e-12)
}
