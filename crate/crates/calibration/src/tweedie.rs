//! Empirical-Bayes identification of the firm density from profit rates and employment.
//!
//! With labour immobile, z = log[(pi/(1-beta))^e L^(beta(1-sigma)/D)] equals
//! y + a, where y = log mu and a collects technology and the price level
//! (D = (eta-beta)(sigma-1) - 1, e = sigma/D). Tweedie's formula gives
//! E[y|z] = z - a_bar + sigma_a^2 (log f)'(z). For each trial sigma_a^2 the
//! unit-mass constraint fixes a_bar; sigma_a^2 itself is pinned by requiring
//! the implied technologies and densities to reproduce the price index.
//! Experimental.

use economy_core::{ModelParams, Variant};

use crate::error::{CalibrationError, Result};
use crate::kernel::{std_dev, Bandwidth};

pub const MIN_OBSERVATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TweedieConfig {
    pub bandwidth: Bandwidth,
    /// Points of the grid on which the density score is tabulated and then
    /// interpolated; 0 evaluates it at every observation.
    pub grid_points: usize,
}

impl Default for TweedieConfig {
    fn default() -> Self {
        TweedieConfig { bandwidth: Bandwidth::Auto, grid_points: 1024 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TweedieEstimate {
    /// Firm density per sector, unit mass over the sector circle.
    pub mu: Vec<f64>,
    pub a_bar: f64,
    pub sigma_a2: f64,
    /// Location and variance of log technology.
    pub m_a: f64,
    pub sigma_a_tilde2: f64,
    pub bandwidth: f64,
    /// Price-index identity residual at the reported sigma_a^2.
    pub consistency_residual: f64,
}

fn immobile_denominator(params: &ModelParams) -> f64 {
    (params.eta - params.beta) * (params.sigma - 1.0) - 1.0
}

/// Exponent k with a = k log(A P).
pub fn tweedie_exponent(params: &ModelParams) -> f64 {
    (params.sigma - 1.0) / immobile_denominator(params)
}

/// The observable z built from per-sector profit rates and employment.
pub fn tweedie_observable(pi: &[f64], labour: &[f64], params: &ModelParams) -> Result<Vec<f64>> {
    if pi.len() != labour.len() {
        return Err(CalibrationError::Config("profit rates and employment differ in length".into()));
    }
    let d = immobile_denominator(params);
    let e = params.sigma / d;
    let el = params.beta * (1.0 - params.sigma) / d;
    pi.iter()
        .zip(labour)
        .map(|(p, l)| {
            if *p > 0.0 && *l > 0.0 {
                Ok(e * (p / (1.0 - params.beta)).ln() + el * l.ln())
            } else {
                Err(CalibrationError::Domain("profit rates and employment must be positive".into()))
            }
        })
        .collect()
}

/// d/dz log f(z) for a Gaussian kernel density estimate.
fn kde_score(data: &[f64], at: f64, h: f64) -> f64 {
    let (mut s0, mut s1) = (0.0, 0.0);
    for d in data {
        let u = (at - d) / h;
        let w = (-0.5 * u * u).exp();
        s0 += w;
        s1 -= u * w;
    }
    if s0 > 0.0 {
        s1 / (s0 * h)
    } else {
        0.0
    }
}

fn scores(z: &[f64], h: f64, grid_points: usize) -> Vec<f64> {
    if grid_points < 2 {
        return z.iter().map(|v| kde_score(z, *v, h)).collect();
    }
    let (lo, hi) = z.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let step = (hi - lo) / (grid_points - 1) as f64;
    let table: Vec<f64> = (0..grid_points).map(|g| kde_score(z, lo + g as f64 * step, h)).collect();
    z.iter()
        .map(|v| {
            let r = ((v - lo) / step).clamp(0.0, (grid_points - 1) as f64);
            let g = (r.floor() as usize).min(grid_points - 2);
            let t = r - g as f64;
            table[g] * (1.0 - t) + table[g + 1] * t
        })
        .collect()
}

struct Trial {
    a_bar: f64,
    log_mu: Vec<f64>,
    residual: f64,
}

struct Problem<'a> {
    z: &'a [f64],
    log_l: Vec<f64>,
    score: Vec<f64>,
    params: ModelParams,
    cell: f64,
}

impl Problem<'_> {
    fn log_integral(&self, v: impl Iterator<Item = f64>) -> f64 {
        let v: Vec<f64> = v.collect();
        let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        m + (self.cell * v.iter().map(|x| (x - m).exp()).sum::<f64>()).ln()
    }

    fn trial(&self, s2: f64) -> Trial {
        let (beta, sigma, eta) = (self.params.beta, self.params.sigma, self.params.eta);
        let k = tweedie_exponent(&self.params);
        let t: Vec<f64> = self.z.iter().zip(&self.score).map(|(z, s)| z + s2 * s).collect();
        let a_bar = self.log_integral(t.iter().copied());
        let log_mu: Vec<f64> = t.iter().map(|t| t - a_bar).collect();
        let r = (sigma - 1.0) / sigma;
        let log_c = self.log_integral((0..t.len()).map(|i| {
            let a = a_bar - s2 * self.score[i];
            r * (a / k + beta * self.log_l[i] + (1.0 + eta - beta) * log_mu[i])
        }));
        Trial { a_bar, log_mu, residual: log_c.exp_m1() }
    }
}

/// Tweedie deconvolution of the firm density from the observable z.
///
/// `labour` is the per-sector employment used to build z; sectors are equal
/// cells of the circle of length `params.n`.
pub fn tweedie_estimate_mu(
    z: &[f64],
    labour: &[f64],
    params: &ModelParams,
    config: &TweedieConfig,
) -> Result<TweedieEstimate> {
    if params.variant != Variant::ImmobileLabour {
        return Err(CalibrationError::Config("density identification uses the immobile-labour economy".into()));
    }
    params.validate()?;
    if z.len() < MIN_OBSERVATIONS {
        return Err(CalibrationError::Degenerate(format!("{} observations, need {MIN_OBSERVATIONS}", z.len())));
    }
    if labour.len() != z.len() {
        return Err(CalibrationError::Config("z and employment differ in length".into()));
    }
    if z.iter().any(|v| !v.is_finite()) || labour.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(CalibrationError::Degenerate("z must be finite and employment positive".into()));
    }
    let h = config.bandwidth.resolve(z)?;
    let problem = Problem {
        z,
        log_l: labour.iter().map(|l| l.ln()).collect(),
        score: scores(z, h, config.grid_points),
        params: *params,
        cell: params.n / z.len() as f64,
    };

    let var_z = std_dev(z).powi(2);
    let at_zero = problem.trial(0.0);
    let chosen = if at_zero.residual.abs() <= 1e-12 {
        0.0
    } else {
        // bracket the first sign change on [0, var z], then bisect
        let scan = 64;
        let mut lo = 0.0;
        let mut hi = None;
        for j in 1..=scan {
            let s = var_z * j as f64 / scan as f64;
            if problem.trial(s).residual.signum() != at_zero.residual.signum() {
                hi = Some(s);
                break;
            }
            lo = s;
        }
        let mut hi = hi.ok_or_else(|| {
            CalibrationError::Unidentified(format!(
                "price-index residual keeps its sign on [0, var z = {var_z:.4e}]: {:.4e} at 0, {:.4e} at var z",
                at_zero.residual,
                problem.trial(var_z).residual
            ))
        })?;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if problem.trial(mid).residual.signum() == at_zero.residual.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let best = problem.trial(chosen);
    let k = tweedie_exponent(params);
    let log_p = problem.log_integral(z.iter().zip(&best.log_mu).map(|(z, y)| (z - y) / k));
    let mut mu: Vec<f64> = best.log_mu.iter().map(|y| y.exp()).collect();
    let mass: f64 = mu.iter().sum::<f64>() * problem.cell;
    mu.iter_mut().for_each(|m| *m /= mass);
    Ok(TweedieEstimate {
        mu,
        a_bar: best.a_bar,
        sigma_a2: chosen,
        m_a: best.a_bar / k - log_p,
        sigma_a_tilde2: chosen / (k * k),
        bandwidth: h,
        consistency_residual: best.residual,
    })
}
