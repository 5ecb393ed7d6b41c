use economy_core::{ModelParams, Variant};

use crate::error::{CalibrationError, Result};
use crate::ols::{design_with_intercept, ols, RegressionFit};
use crate::panel::SectorPanel;

/// Long-run profit rate and labour share implied by the ROE convergence line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaEstimate {
    pub pi_bar: f64,
    pub beta: f64,
}

/// pi_bar = intercept / (-slope) and beta = 1 - pi_bar; needs a negative slope.
pub fn recover_beta(intercept: f64, slope: f64) -> Result<BetaEstimate> {
    if !(slope < 0.0) {
        return Err(CalibrationError::NoConvergence { slope });
    }
    let pi_bar = intercept / -slope;
    Ok(BetaEstimate { pi_bar, beta: 1.0 - pi_bar })
}

pub fn recover_beta_from_fit(fit: &RegressionFit) -> Result<BetaEstimate> {
    if fit.coefficients.len() != 2 {
        return Err(CalibrationError::Config("ROE convergence fit needs exactly an intercept and a slope".into()));
    }
    recover_beta(fit.intercept(), fit.slope())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaSigma {
    pub eta: f64,
    pub sigma: f64,
    /// Whether (beta, sigma, eta) gives a well-posed immobile-labour economy.
    pub well_posed: bool,
    pub detail: String,
}

/// eta = beta (1 + rho2/rho1) - 1 and sigma = 1 + rho1 / (beta (1 + rho2) - rho1),
/// with rho2 the output elasticity to profit rates taken as a magnitude.
pub fn recover_eta_sigma(rho1: f64, rho2: f64, beta: f64) -> Result<EtaSigma> {
    if rho1 == 0.0 {
        return Err(CalibrationError::Domain("rho1 must be non-zero".into()));
    }
    let den = beta * (1.0 + rho2) - rho1;
    if den == 0.0 {
        return Err(CalibrationError::Domain("beta (1 + rho2) equals rho1".into()));
    }
    let eta = beta * (1.0 + rho2 / rho1) - 1.0;
    let sigma = 1.0 + rho1 / den;
    let (well_posed, detail) = match ModelParams::new(beta, sigma, eta, 1.0, 0.0, Variant::ImmobileLabour) {
        Ok(_) => (true, "well-posed immobile-labour economy".to_string()),
        Err(e) => (false, e.to_string()),
    };
    Ok(EtaSigma { eta, sigma, well_posed, detail })
}

/// Signed elasticities of sector output to employment and to the profit rate in
/// the immobile-labour economy, log Y = g + rho1 log L + phi log pi.
pub fn production_growth_elasticities(params: &ModelParams) -> (f64, f64) {
    let (beta, sigma, eta) = (params.beta, params.sigma, params.eta);
    let den = 1.0 - (eta - beta) * (sigma - 1.0);
    (beta * (sigma - 1.0) / den, -(1.0 + eta - beta) * (sigma - 1.0) / den)
}

/// Structural parameters from a fitted growth regression (intercept, employment,
/// profit rate). The profit-rate coefficient enters with its sign flipped, the
/// magnitude convention of [`recover_eta_sigma`].
pub fn recover_from_growth_fit(fit: &RegressionFit, beta: f64) -> Result<EtaSigma> {
    if fit.coefficients.len() != 3 {
        return Err(CalibrationError::Config("growth fit needs intercept, employment and profit-rate terms".into()));
    }
    recover_eta_sigma(fit.coefficients[1], -fit.coefficients[2], beta)
}

/// Delta ROE on ROE at the first date.
pub fn roe_convergence_fit(panel: &SectorPanel) -> Result<RegressionFit> {
    let x = panel.column(|r| r.roe_t0);
    let y: Vec<f64> = panel.rows.iter().map(|r| r.roe_t1 - r.roe_t0).collect();
    ols(&design_with_intercept(&[&x])?, &y)
}

/// Delta log labour productivity on its level at the first date.
pub fn labour_productivity_fit(panel: &SectorPanel) -> Result<RegressionFit> {
    let x = panel.column(|r| r.labprod_t0);
    let y: Vec<f64> = panel.rows.iter().map(|r| (r.labprod_t1 / r.labprod_t0).ln()).collect();
    ols(&design_with_intercept(&[&x])?, &y)
}

/// log(Y1/Y0) on log(L1/L0) and log(ROE1/ROE0). Sectors with a non-positive
/// ROE at either date have no log ratio and are skipped; their count is returned.
pub fn production_growth_fit(panel: &SectorPanel) -> Result<(RegressionFit, usize)> {
    let kept: Vec<_> = panel.rows.iter().filter(|r| r.roe_t0 > 0.0 && r.roe_t1 > 0.0).collect();
    let dl: Vec<f64> = kept.iter().map(|r| (r.l_t1 / r.l_t0).ln()).collect();
    let dp: Vec<f64> = kept.iter().map(|r| (r.roe_t1 / r.roe_t0).ln()).collect();
    let dy: Vec<f64> = kept.iter().map(|r| (r.y_t1 / r.y_t0).ln()).collect();
    let fit = ols(&design_with_intercept(&[&dl, &dp])?, &dy)?;
    Ok((fit, panel.len() - kept.len()))
}
