use economy_core::{profiles, CircleGrid, EquilibriumMap, FirmDistribution, ModelParams, SectorProfiles, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};

use crate::error::{CalibrationError, Result};
use crate::panel::{SectorPanel, SectorRow};
use crate::tweedie::tweedie_observable;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(mean: f64, sd: f64) -> Result<Normal<f64>> {
    Normal::new(mean, sd).map_err(|e| CalibrationError::Config(format!("normal({mean}, {sd}): {e}")))
}

fn lognormal(sd: f64) -> Result<LogNormal<f64>> {
    LogNormal::new(0.0, sd).map_err(|e| CalibrationError::Config(format!("lognormal(0, {sd}): {e}")))
}

/// Panel following Delta ROE = intercept + slope ROE_t0 + N(0, noise_sd^2).
/// The remaining columns are positive placeholders.
pub fn synthetic_roe_panel(sectors: usize, intercept: f64, slope: f64, noise_sd: f64, seed: u64) -> Result<SectorPanel> {
    let mut r = rng(seed);
    let level = normal(0.14, 0.2)?;
    let noise = normal(0.0, noise_sd)?;
    let filler = lognormal(0.5)?;
    let rows = (0..sectors)
        .map(|i| {
            let roe_t0 = level.sample(&mut r);
            SectorRow {
                sector_id: format!("S{i:04}"),
                roe_t0,
                roe_t1: roe_t0 + intercept + slope * roe_t0 + noise.sample(&mut r),
                labprod_t0: filler.sample(&mut r),
                labprod_t1: filler.sample(&mut r),
                y_t0: filler.sample(&mut r),
                y_t1: filler.sample(&mut r),
                l_t0: filler.sample(&mut r),
                l_t1: filler.sample(&mut r),
            }
        })
        .collect();
    SectorPanel::new(rows)
}

/// Dispersion of the shocks in a synthetic immobile-labour panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelShocks {
    /// Cross-sector log sd of technology (constant over time).
    pub technology_sd: f64,
    /// Log sd of employment and firm-density levels.
    pub level_sd: f64,
    pub labour_change_sd: f64,
    pub firm_change_sd: f64,
    /// Multiplicative measurement error on output at the second date.
    pub output_noise_sd: f64,
}

impl Default for PanelShocks {
    fn default() -> Self {
        PanelShocks { technology_sd: 0.3, level_sd: 0.3, labour_change_sd: 0.15, firm_change_sd: 0.2, output_noise_sd: 0.02 }
    }
}

fn immobile(params: &ModelParams) -> Result<()> {
    if params.variant != Variant::ImmobileLabour {
        return Err(CalibrationError::Config("synthetic panels are generated from the immobile-labour economy".into()));
    }
    Ok(params.validate()?)
}

/// Two short-run equilibria of an immobile-labour economy, one per date, with
/// employment and firm densities shocked in between.
pub fn synthetic_immobile_panel(params: &ModelParams, sectors: usize, shocks: &PanelShocks, seed: u64) -> Result<SectorPanel> {
    immobile(params)?;
    let mut r = rng(seed);
    let g = CircleGrid::new(sectors, params.n)?;
    let draw = |r: &mut ChaCha8Rng, sd: f64, n: usize| -> Result<Vec<f64>> {
        let d = lognormal(sd)?;
        Ok((0..n).map(|_| d.sample(r)).collect())
    };
    let a0 = draw(&mut r, shocks.technology_sd, sectors)?;
    let l0 = draw(&mut r, shocks.level_sd, sectors)?;
    let mu0 = draw(&mut r, shocks.level_sd, sectors)?;
    let dl = draw(&mut r, shocks.labour_change_sd, sectors)?;
    let dm = draw(&mut r, shocks.firm_change_sd, sectors)?;
    let dy = draw(&mut r, shocks.output_noise_sd, sectors)?;
    let l1: Vec<f64> = l0.iter().zip(&dl).map(|(a, b)| a * b).collect();
    let mu1: Vec<f64> = mu0.iter().zip(&dm).map(|(a, b)| a * b).collect();

    let date = |l: Vec<f64>, mu: Vec<f64>| -> Result<_> {
        let prof = SectorProfiles::new(g, a0.clone())?.with_labour_normalized(l)?;
        let mu = FirmDistribution::normalized(g, mu)?;
        let eq = EquilibriumMap::new(&prof, params)?.solve(&mu)?;
        Ok(eq)
    };
    let e0 = date(l0, mu0)?;
    let e1 = date(l1, mu1)?;
    let (lp0, lp1) = (e0.labour_productivity(), e1.labour_productivity());
    let rows = (0..sectors)
        .map(|i| SectorRow {
            sector_id: format!("S{i:04}"),
            roe_t0: e0.pi[i],
            roe_t1: e1.pi[i],
            labprod_t0: lp0[i],
            labprod_t1: lp1[i],
            y_t0: e0.y[i],
            y_t1: e1.y[i] * dy[i],
            l_t0: e0.l_used[i],
            l_t1: e1.l_used[i],
        })
        .collect();
    SectorPanel::new(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogDensityShape {
    #[default]
    Normal,
    /// Equal mixture of N(-sd, (sd/3)^2) and N(sd, (sd/3)^2).
    Bimodal,
}

/// Sectors of an immobile-labour economy with lognormal technology, where the
/// firm density is known and only z is handed to the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct TweedieBenchmark {
    pub z: Vec<f64>,
    pub labour: Vec<f64>,
    pub mu_true: Vec<f64>,
    /// a = z - log mu, the term the estimator has to remove.
    pub a_true: Vec<f64>,
}

pub fn tweedie_benchmark(
    params: &ModelParams,
    sectors: usize,
    log_mu_sd: f64,
    log_technology_sd: f64,
    shape: LogDensityShape,
    seed: u64,
) -> Result<TweedieBenchmark> {
    immobile(params)?;
    let mut r = rng(seed);
    let g = CircleGrid::new(sectors, params.n)?;
    let tech = lognormal(log_technology_sd)?;
    let a0: Vec<f64> = (0..sectors).map(|_| tech.sample(&mut r)).collect();
    let y = normal(0.0, log_mu_sd)?;
    let narrow = normal(0.0, log_mu_sd / 3.0)?;
    let raw: Vec<f64> = (0..sectors)
        .map(|_| match shape {
            LogDensityShape::Normal => y.sample(&mut r).exp(),
            LogDensityShape::Bimodal => {
                let centre = if r.random_bool(0.5) { -log_mu_sd } else { log_mu_sd };
                (centre + narrow.sample(&mut r)).exp()
            }
        })
        .collect();
    let mu = FirmDistribution::normalized(g, raw)?;
    let prof = SectorProfiles::new(g, a0)?.with_labour_normalized(profiles::baseline_labour(&g))?;
    let pi = EquilibriumMap::new(&prof, params)?.profit_rates(mu.values())?;
    let labour = prof.labour().expect("set above").to_vec();
    let z = tweedie_observable(&pi, &labour, params)?;
    let a_true = z.iter().zip(mu.values()).map(|(z, m)| z - m.ln()).collect();
    Ok(TweedieBenchmark { z, labour, mu_true: mu.into_values(), a_true })
}
