//! Empirical side of the reallocation model: sector panels, Nadaraya-Watson
//! and OLS regressions, recovery of (beta, eta, sigma) from fitted
//! coefficients, Tweedie identification of the firm density and synthetic
//! data generators for all of them.

mod error;
mod kernel;
mod ols;
mod panel;
mod structural;
mod synthetic;
mod tweedie;

pub use error::{CalibrationError, Result};
pub use kernel::{nadaraya_watson, silverman, Bandwidth, KernelCurve, CURVE_POINTS, MIN_POINTS};
pub use ols::{design_with_intercept, ols, ols_with, Covariance, RegressionFit};
pub use panel::{IngestReport, SectorPanel, SectorRow, PANEL_COLUMNS};
pub use structural::{
    labour_productivity_fit, production_growth_elasticities, production_growth_fit, recover_beta,
    recover_beta_from_fit, recover_eta_sigma, recover_from_growth_fit, roe_convergence_fit, BetaEstimate, EtaSigma,
};
pub use synthetic::{
    synthetic_immobile_panel, synthetic_roe_panel, tweedie_benchmark, LogDensityShape, PanelShocks, TweedieBenchmark,
};
pub use tweedie::{
    tweedie_estimate_mu, tweedie_exponent, tweedie_observable, TweedieConfig, TweedieEstimate, MIN_OBSERVATIONS,
};
