use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use calibration::{
    labour_productivity_fit, nadaraya_watson, production_growth_fit, recover_beta_from_fit, recover_eta_sigma,
    recover_from_growth_fit, roe_convergence_fit, synthetic_immobile_panel, tweedie_estimate_mu, tweedie_observable,
    Bandwidth, EtaSigma, PanelShocks, RegressionFit, SectorPanel, TweedieConfig,
};
use economy_core::{EquilibriumMap, FirmDistribution, ModelParams, SectorProfiles, Variant};
use equilibrium_analysis::{
    efficiency_loss, equilibrium_consumption, fit_convergence_rate, fixed_cost_example, fixed_cost_max_slope,
    fixed_cost_threshold, fixed_cost_threshold_as_printed, max_profit_slope, optimal_labor_allocation,
    stationarity_check, steady_state,
};
use pde_dynamics::export::{fmt17, write_meta, write_snapshots, write_summary};
use pde_dynamics::{simulate, SolverConfig, SolverError, Trajectory};
use wasserstein_jko::{jko_trajectory, w2_distance_circle, w2_distance_circle_histogram, JkoOptions};

use crate::config::{read_column, ScenarioConfig};
use crate::error::{CliError, Result};

/// Published estimates, written next to recovered values for comparison.
pub const PUBLISHED_ETA: f64 = 0.0222;
pub const PUBLISHED_SIGMA: f64 = 1.3144;

/// Output directory that remembers every file written into it.
pub struct Output {
    dir: PathBuf,
    pub written: Vec<PathBuf>,
}

impl Output {
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
        Ok(Output { dir, written: Vec::new() })
    }

    pub fn file(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let f = File::create(&path).map_err(CliError::io(&path))?;
        self.written.push(path);
        Ok(BufWriter::new(f))
    }

    /// Two-column `metric,value` table.
    pub fn report(&mut self, name: &str, meta: &[(&str, String)], rows: &[(&str, String)]) -> Result<()> {
        let mut f = self.file(name)?;
        write_meta(&mut f, meta).map_err(CliError::io(&self.dir))?;
        let mut w = csv::Writer::from_writer(f);
        w.write_record(["metric", "value"])?;
        for (k, v) in rows {
            w.write_record([*k, v.as_str()])?;
        }
        w.flush().map_err(CliError::io(&self.dir))?;
        Ok(())
    }

    pub fn table(&mut self, name: &str, meta: &[(&str, String)], header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut f = self.file(name)?;
        write_meta(&mut f, meta).map_err(CliError::io(&self.dir))?;
        let mut w = csv::Writer::from_writer(f);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush().map_err(CliError::io(&self.dir))?;
        Ok(())
    }
}

fn solver_config(cfg: &ScenarioConfig) -> SolverConfig {
    let mut sc = SolverConfig::new(cfg.t_end, cfg.snapshot_every).with_cfl(cfg.cfl);
    sc.max_steps = cfg.max_steps;
    sc
}

/// A finished simulation together with everything needed to report on it.
pub struct SimulationRun {
    pub profiles: SectorProfiles,
    pub params: ModelParams,
    pub mu0: FirmDistribution,
    /// Closed-form long-run equilibrium of the frictionless economy.
    pub equilibrium: FirmDistribution,
    pub trajectory: Trajectory,
    /// Set when the solver ran out of steps; the trajectory is then partial.
    pub timed_out: Option<String>,
}

impl SimulationRun {
    pub fn final_profit_rates(&self) -> Result<Vec<f64>> {
        let last = self.trajectory.last().ok_or_else(|| CliError::Numeric("empty trajectory".into()))?;
        Ok(EquilibriumMap::new(&self.profiles, &self.params)?.profit_rates(last.values())?)
    }

    pub fn equilibrium_profit_rate(&self) -> Result<f64> {
        let eq = EquilibriumMap::new(&self.profiles, &self.params)?.profit_rates(self.equilibrium.values())?;
        Ok(eq[0])
    }
}

pub fn run_simulation(cfg: &ScenarioConfig) -> Result<SimulationRun> {
    let params = cfg.params()?;
    let profiles = cfg.profiles()?;
    let mu0 = cfg.initial_density(&profiles)?;
    let equilibrium = steady_state(&profiles, &params.with_c0(0.0)?)?;
    let (trajectory, timed_out) =
        match simulate(&mu0, &profiles, &params, &solver_config(cfg), Some(&equilibrium)) {
            Ok(t) => (t, None),
            Err(SolverError::Timeout { steps, t, partial }) => {
                (*partial, Some(format!("stopped after {steps} steps at t = {t}")))
            }
            Err(e) => return Err(e.into()),
        };
    Ok(SimulationRun { profiles, params, mu0, equilibrium, trajectory, timed_out })
}

fn range(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)))
}

pub fn cmd_simulate(cfg: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let run = run_simulation(cfg)?;
    let meta = cfg.meta("simulate");
    let traj = &run.trajectory;
    write_snapshots(out.file("snapshots.csv")?, traj, &run.profiles, &run.params, &meta)?;
    write_summary(out.file("summary.csv")?, traj, &meta)?;

    let fit_row = match fit_convergence_rate(traj, &run.equilibrium) {
        Ok(f) => vec![fmt17(f.c1), fmt17(f.c2), fmt17(f.r_squared), fmt17(f.window.0), fmt17(f.window.1), f.points.to_string(), "ok".into()],
        Err(e) => vec![String::new(), String::new(), String::new(), String::new(), String::new(), "0".into(), e.to_string()],
    };
    out.table("convergence_fit.csv", &meta, &["c1", "c2", "r_squared", "t_lo", "t_hi", "points", "status"], &[fit_row])?;

    let pi = run.final_profit_rates()?;
    let pi_eq = run.equilibrium_profit_rate()?;
    let (lo, hi) = range(&pi);
    let last = traj.last().expect("non-empty");
    out.report(
        "report.csv",
        &meta,
        &[
            ("t_final", fmt17(*traj.times.last().expect("non-empty"))),
            ("steps", traj.steps().to_string()),
            ("rejected_steps", traj.rejected_steps.to_string()),
            ("max_step_mass_error", fmt17(traj.max_step_mass_error)),
            ("min_density", fmt17(traj.min_density())),
            ("max_f_decrease", fmt17(traj.max_f_decrease)),
            ("pi_equilibrium", fmt17(pi_eq)),
            ("x_equilibrium", fmt17(equilibrium_consumption(&run.profiles, &run.params.with_c0(0.0)?)?)),
            ("final_pi_min", fmt17(lo)),
            ("final_pi_max", fmt17(hi)),
            ("final_max_abs_pi_minus_equilibrium", fmt17(pi.iter().map(|p| (p - pi_eq).abs()).fold(0.0, f64::max))),
            ("final_l2_to_equilibrium", fmt17(last.l2_distance(&run.equilibrium))),
            ("final_linf_to_equilibrium", fmt17(last.linf_distance(&run.equilibrium))),
            ("final_linf_to_uniform", fmt17(last.linf_distance(&FirmDistribution::uniform(*last.grid())))),
        ],
    )?;
    match run.timed_out {
        Some(msg) => Err(CliError::Timeout(msg)),
        None => Ok(()),
    }
}

pub fn cmd_steady(cfg: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let params = cfg.params()?.with_c0(0.0)?;
    let profiles = cfg.profiles()?;
    let mu = steady_state(&profiles, &params)?;
    let eq = EquilibriumMap::new(&profiles, &params)?.solve(&mu)?;
    let prod = eq.labour_productivity();
    let centers = profiles.grid().centers();
    let rows: Vec<Vec<String>> = (0..centers.len())
        .map(|j| vec![fmt17(centers[j]), fmt17(mu.values()[j]), fmt17(eq.y[j]), fmt17(eq.pi[j]), fmt17(eq.w[j]), fmt17(prod[j])])
        .collect();
    let meta = cfg.meta("steady");
    out.table("steady.csv", &meta, &["i", "mu_eq", "Y_eq", "pi_eq", "w_eq", "labor_productivity"], &rows)?;
    out.report(
        "report.csv",
        &meta,
        &[
            ("x_eq", fmt17(equilibrium_consumption(&profiles, &params)?)),
            ("x_eq_aggregate", fmt17(eq.x)),
            ("pi_eq", fmt17(eq.pi[0])),
        ],
    )
}

/// JKO trajectory and its W2 gap to the PDE run at the same times.
pub struct JkoComparison {
    pub times: Vec<f64>,
    pub f_values: Vec<f64>,
    pub gaps: Vec<f64>,
    pub all_converged: bool,
    pub jko_snapshots: Vec<FirmDistribution>,
}

pub fn run_jko(cfg: &ScenarioConfig) -> Result<JkoComparison> {
    let params = cfg.params()?;
    let profiles = cfg.profiles()?;
    let mu0 = cfg.initial_density(&profiles)?;
    let jko = jko_trajectory(&mu0, cfg.dt, cfg.steps, &profiles, &params, &JkoOptions::default())?;
    let horizon = cfg.dt * cfg.steps as f64;
    let pde = simulate(&mu0, &profiles, &params, &SolverConfig::new(horizon, cfg.dt).with_cfl(cfg.cfl), None)?;
    let mut gaps = Vec::with_capacity(jko.times.len());
    for (t, snap) in jko.times.iter().zip(&jko.snapshots) {
        let k = pde
            .times
            .iter()
            .position(|s| (s - t).abs() <= 1e-9 * (1.0 + t))
            .ok_or_else(|| CliError::Numeric(format!("no PDE snapshot at t = {t}")))?;
        gaps.push(w2_distance_circle_histogram(&snap.masses(), &pde.snapshots[k].masses(), profiles.grid())?);
    }
    Ok(JkoComparison {
        times: jko.times,
        f_values: jko.f_values,
        gaps,
        all_converged: jko.all_converged,
        jko_snapshots: jko.snapshots,
    })
}

pub fn cmd_jko(cfg: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let cmp = run_jko(cfg)?;
    let meta = cfg.meta("jko");
    let rows: Vec<Vec<String>> = (0..cmp.times.len())
        .map(|k| vec![k.to_string(), fmt17(cmp.times[k]), fmt17(cmp.f_values[k]), fmt17(cmp.gaps[k])])
        .collect();
    out.table("jko.csv", &meta, &["step", "t", "F", "w2_gap_to_pde"], &rows)?;
    let grid = cmp.jko_snapshots[0].grid().centers();
    let mut snaps = Vec::new();
    for (t, s) in cmp.times.iter().zip(&cmp.jko_snapshots) {
        for (x, m) in grid.iter().zip(s.values()) {
            snaps.push(vec![fmt17(*t), fmt17(*x), fmt17(*m)]);
        }
    }
    out.table("jko_snapshots.csv", &meta, &["t", "i", "mu"], &snaps)?;
    out.report(
        "report.csv",
        &meta,
        &[
            ("dt", fmt17(cfg.dt)),
            ("steps", cfg.steps.to_string()),
            ("all_converged", cmp.all_converged.to_string()),
            ("final_w2_gap", fmt17(*cmp.gaps.last().expect("non-empty"))),
        ],
    )
}

/// Consumption in the mobile and immobile economies started from the same density.
pub struct EfficiencyRun {
    pub delta_x_eq: f64,
    pub x_eq_mobile: f64,
    pub x_eq_immobile: f64,
    pub delta_at_optimal_labour: f64,
    pub times: Vec<f64>,
    pub x_mobile: Vec<f64>,
    pub x_immobile: Vec<f64>,
}

impl EfficiencyRun {
    pub fn gaps(&self) -> Vec<f64> {
        self.x_mobile.iter().zip(&self.x_immobile).map(|(m, i)| m - i).collect()
    }
}

pub fn run_efficiency(cfg: &ScenarioConfig) -> Result<EfficiencyRun> {
    let base = cfg.params()?;
    let profiles = cfg.profiles()?;
    if profiles.labour().is_none() {
        return Err(CliError::Config("the efficiency comparison needs a labour profile 'L'".into()));
    }
    let mobile = ModelParams::new(base.beta, base.sigma, base.eta, base.n, base.c0, Variant::MobileExternalities)?;
    let immobile = ModelParams::new(base.beta, base.sigma, base.eta, base.n, base.c0, Variant::ImmobileLabour)?;
    let mu0 = cfg.initial_density(&profiles)?;
    let sc = solver_config(cfg);
    let tm = simulate(&mu0, &profiles, &mobile, &sc, None)?;
    let ti = simulate(&mu0, &profiles, &immobile, &sc, None)?;
    if tm.times.len() != ti.times.len() {
        return Err(CliError::Numeric("mobile and immobile runs recorded different snapshot times".into()));
    }
    let l_star = optimal_labor_allocation(&profiles, &mobile)?;
    let at_star = efficiency_loss(&profiles.clone().with_labour(l_star)?, &immobile)?;
    Ok(EfficiencyRun {
        delta_x_eq: efficiency_loss(&profiles, &immobile)?,
        x_eq_mobile: equilibrium_consumption(&profiles, &mobile.with_c0(0.0)?)?,
        x_eq_immobile: equilibrium_consumption(&profiles, &immobile.with_c0(0.0)?)?,
        delta_at_optimal_labour: at_star,
        times: tm.times,
        x_mobile: tm.x_values,
        x_immobile: ti.x_values,
    })
}

pub fn cmd_efficiency(cfg: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let run = run_efficiency(cfg)?;
    let meta = cfg.meta("efficiency");
    let gaps = run.gaps();
    let rows: Vec<Vec<String>> = (0..run.times.len())
        .map(|k| vec![fmt17(run.times[k]), fmt17(run.x_mobile[k]), fmt17(run.x_immobile[k]), fmt17(gaps[k])])
        .collect();
    out.table("efficiency.csv", &meta, &["t", "x_mobile", "x_immobile", "gap"], &rows)?;
    let (lo, hi) = range(&gaps);
    out.report(
        "report.csv",
        &meta,
        &[
            ("delta_x_eq", fmt17(run.delta_x_eq)),
            ("x_eq_mobile", fmt17(run.x_eq_mobile)),
            ("x_eq_immobile", fmt17(run.x_eq_immobile)),
            ("delta_x_eq_at_optimal_labour", fmt17(run.delta_at_optimal_labour)),
            ("gap_t0", fmt17(gaps[0])),
            ("gap_final", fmt17(*gaps.last().expect("non-empty"))),
            ("gap_min", fmt17(lo)),
            ("gap_max", fmt17(hi)),
        ],
    )
}

/// The singular fixed-cost equilibrium and its behaviour at and below the threshold.
pub struct FixedCostRun {
    pub alpha: f64,
    pub example: FirmDistribution,
    pub profiles: SectorProfiles,
    pub threshold: f64,
    pub threshold_as_printed: f64,
    pub max_slope_formula: f64,
    pub max_slope_grid: f64,
    pub stationary_at_threshold: bool,
    pub stationary_at_quarter: bool,
    pub drift_at_threshold: f64,
    pub drift_at_quarter: f64,
}

pub fn run_fixed_cost(cfg: &ScenarioConfig) -> Result<FixedCostRun> {
    let alpha = cfg.alpha.ok_or_else(|| CliError::Config("fixedcost needs 'alpha'".into()))?;
    let params = cfg.params()?.with_c0(0.0)?;
    let grid = cfg.grid()?;
    let profiles = SectorProfiles::constant(grid, 1.0)?;
    let example = fixed_cost_example(alpha, grid, &params)?;
    let threshold = fixed_cost_threshold(alpha, &params)?;
    let at = params.with_c0(threshold)?;
    let quarter = params.with_c0(threshold / 4.0)?;
    let drift = |p: &ModelParams| -> Result<f64> {
        let tr = simulate(&example, &profiles, p, &solver_config(cfg), None)?;
        Ok(tr.last().expect("non-empty").linf_distance(&example))
    };
    Ok(FixedCostRun {
        alpha,
        threshold,
        threshold_as_printed: fixed_cost_threshold_as_printed(alpha, &params)?,
        max_slope_formula: fixed_cost_max_slope(alpha, &params)?,
        max_slope_grid: max_profit_slope(&example, &profiles, &params)?,
        stationary_at_threshold: stationarity_check(&example, &profiles, &at)?,
        stationary_at_quarter: stationarity_check(&example, &profiles, &quarter)?,
        drift_at_threshold: drift(&at)?,
        drift_at_quarter: drift(&quarter)?,
        example,
        profiles,
    })
}

pub fn cmd_fixedcost(cfg: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let run = run_fixed_cost(cfg)?;
    let meta = cfg.meta("fixedcost");
    let params = cfg.params()?.with_c0(0.0)?;
    let pi = EquilibriumMap::new(&run.profiles, &params)?.profit_rates(run.example.values())?;
    let centers = run.profiles.grid().centers();
    let rows: Vec<Vec<String>> =
        (0..centers.len()).map(|j| vec![fmt17(centers[j]), fmt17(run.example.values()[j]), fmt17(pi[j])]).collect();
    out.table("example.csv", &meta, &["i", "mu", "pi"], &rows)?;
    out.report(
        "report.csv",
        &meta,
        &[
            ("alpha", fmt17(run.alpha)),
            ("threshold_c0", fmt17(run.threshold)),
            ("threshold_c0_as_printed", fmt17(run.threshold_as_printed)),
            ("max_slope_formula", fmt17(run.max_slope_formula)),
            ("max_slope_grid", fmt17(run.max_slope_grid)),
            ("stationary_at_threshold", run.stationary_at_threshold.to_string()),
            ("stationary_at_quarter_threshold", run.stationary_at_quarter.to_string()),
            ("drift_at_threshold", fmt17(run.drift_at_threshold)),
            ("drift_at_quarter_threshold", fmt17(run.drift_at_quarter)),
        ],
    )
}

#[derive(Debug, Clone, Default)]
pub struct CalibrateOptions {
    pub panel: Option<PathBuf>,
    /// Generate a synthetic immobile-labour panel with this many sectors instead of reading one.
    pub synthetic: Option<usize>,
    pub beta: Option<f64>,
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub tweedie: bool,
    pub robust: bool,
}

fn fit_rows(fit: &RegressionFit, names: &[&str]) -> Vec<Vec<String>> {
    names
        .iter()
        .enumerate()
        .map(|(k, n)| vec![n.to_string(), fmt17(fit.coefficients[k]), fmt17(fit.std_errors[k])])
        .chain([
            vec!["r_squared".into(), fmt17(fit.r_squared), String::new()],
            vec!["residual_se".into(), fmt17(fit.residual_se), String::new()],
            vec!["n_obs".into(), fit.n_obs.to_string(), String::new()],
        ])
        .collect()
}

fn structural_rows(rows: &mut Vec<Vec<String>>, es: &EtaSigma) {
    rows.push(vec!["eta".into(), fmt17(es.eta), fmt17(PUBLISHED_ETA)]);
    rows.push(vec!["sigma".into(), fmt17(es.sigma), fmt17(PUBLISHED_SIGMA)]);
    rows.push(vec!["well_posed".into(), es.well_posed.to_string(), es.detail.clone()]);
}

pub fn cmd_calibrate(opts: &CalibrateOptions, cfg: &ScenarioConfig, out: &mut Output) -> Result<()> {
    let meta = cfg.meta("calibrate");
    let header = ["quantity", "value", "reference"];
    if let (Some(r1), Some(r2)) = (opts.rho1, opts.rho2) {
        let beta = opts.beta.ok_or_else(|| CliError::Config("--rho1/--rho2 need --beta".into()))?;
        let es = recover_eta_sigma(r1, r2, beta)?;
        let mut rows = vec![
            vec!["beta".into(), fmt17(beta), String::new()],
            vec!["rho1".into(), fmt17(r1), String::new()],
            vec!["rho2".into(), fmt17(r2), String::new()],
        ];
        structural_rows(&mut rows, &es);
        return out.table("structural.csv", &meta, &header, &rows);
    }

    let panel = match (&opts.panel, opts.synthetic) {
        (Some(path), None) => {
            let (panel, report) = SectorPanel::from_path(path)?;
            let rows: Vec<Vec<String>> = report.dropped.iter().map(|(l, r)| vec![l.to_string(), r.clone()]).collect();
            out.table("ingest.csv", &meta, &["line", "reason"], &rows)?;
            panel
        }
        (None, Some(sectors)) => {
            let params = ModelParams { variant: Variant::ImmobileLabour, ..cfg.params()? };
            let panel = synthetic_immobile_panel(&params, sectors, &PanelShocks::default(), cfg.seed)?;
            panel.write_csv(out.file("panel.csv")?)?;
            panel
        }
        _ => return Err(CliError::Config("calibrate needs exactly one of a panel path or --synthetic".into())),
    };
    let cov = if opts.robust { calibration::Covariance::Hc1 } else { calibration::Covariance::Classical };
    let refit = |fit: RegressionFit, x: Vec<f64>, y: Vec<f64>| -> Result<RegressionFit> {
        if opts.robust {
            Ok(calibration::ols_with(&calibration::design_with_intercept(&[&x])?, &y, cov)?)
        } else {
            Ok(fit)
        }
    };

    let roe0 = panel.column(|r| r.roe_t0);
    let droe: Vec<f64> = panel.rows.iter().map(|r| r.roe_t1 - r.roe_t0).collect();
    let roe_fit = refit(roe_convergence_fit(&panel)?, roe0.clone(), droe.clone())?;
    out.table("roe_fit.csv", &meta, &["term", "estimate", "std_error"], &fit_rows(&roe_fit, &["(Intercept)", "roe_t0"]))?;
    nadaraya_watson(&roe0, &droe, Bandwidth::Auto)?.write_csv(out.file("roe_curve.csv")?)?;

    let lp0 = panel.column(|r| r.labprod_t0);
    let dlp: Vec<f64> = panel.rows.iter().map(|r| (r.labprod_t1 / r.labprod_t0).ln()).collect();
    let lp_fit = refit(labour_productivity_fit(&panel)?, lp0.clone(), dlp.clone())?;
    out.table("labprod_fit.csv", &meta, &["term", "estimate", "std_error"], &fit_rows(&lp_fit, &["(Intercept)", "labprod_t0"]))?;
    nadaraya_watson(&lp0, &dlp, Bandwidth::Auto)?.write_csv(out.file("labprod_curve.csv")?)?;

    let (growth, skipped) = production_growth_fit(&panel)?;
    let mut g_rows = fit_rows(&growth, &["(Intercept)", "log_l_ratio", "log_roe_ratio"]);
    g_rows.push(vec!["skipped_non_positive_roe".into(), skipped.to_string(), String::new()]);
    out.table("growth_fit.csv", &meta, &["term", "estimate", "std_error"], &g_rows)?;

    let mut rows = Vec::new();
    let beta = match recover_beta_from_fit(&roe_fit) {
        Ok(b) => {
            rows.push(vec!["pi_bar".into(), fmt17(b.pi_bar), String::new()]);
            rows.push(vec!["beta_from_roe".into(), fmt17(b.beta), String::new()]);
            opts.beta.unwrap_or(b.beta)
        }
        Err(e) => {
            rows.push(vec!["beta_from_roe".into(), String::new(), e.to_string()]);
            opts.beta.unwrap_or(cfg.beta)
        }
    };
    rows.push(vec!["beta_used".into(), fmt17(beta), String::new()]);
    rows.push(vec!["rho1".into(), fmt17(growth.coefficients[1]), String::new()]);
    rows.push(vec!["rho2".into(), fmt17(-growth.coefficients[2]), "sign flipped profit-rate coefficient".into()]);
    let es = recover_from_growth_fit(&growth, beta)?;
    structural_rows(&mut rows, &es);

    if opts.tweedie {
        if !es.well_posed {
            rows.push(vec!["tweedie".into(), String::new(), "skipped: recovered parameters are ill-posed".into()]);
        } else {
            let params = ModelParams::new(beta, es.sigma, es.eta, cfg.n, 0.0, Variant::ImmobileLabour)?;
            let l = panel.column(|r| r.l_t1);
            let mean = l.iter().sum::<f64>() / l.len() as f64 * cfg.n;
            let l: Vec<f64> = l.iter().map(|v| v / mean).collect();
            let z = tweedie_observable(&panel.column(|r| r.roe_t1), &l, &params)?;
            let est = tweedie_estimate_mu(&z, &l, &params, &TweedieConfig::default())?;
            let t_rows: Vec<Vec<String>> = panel
                .rows
                .iter()
                .zip(z.iter().zip(&est.mu))
                .map(|(r, (z, m))| vec![r.sector_id.clone(), fmt17(*z), fmt17(*m)])
                .collect();
            out.table("tweedie.csv", &meta, &["sector_id", "z", "mu_hat"], &t_rows)?;
            for (k, v) in [
                ("tweedie_a_bar", est.a_bar),
                ("tweedie_sigma_a2", est.sigma_a2),
                ("tweedie_m_a", est.m_a),
                ("tweedie_sigma_a_tilde2", est.sigma_a_tilde2),
            ] {
                rows.push(vec![k.into(), fmt17(v), "experimental".into()]);
            }
        }
    }
    out.table("structural.csv", &meta, &header, &rows)
}

/// W2 distance between two densities read from CSV files, as atoms and as histograms.
pub fn cmd_w2(a: &Path, b: &Path, n: f64, column: Option<&str>) -> Result<(f64, f64)> {
    let ma = read_column(a, column)?;
    let mb = read_column(b, column)?;
    if ma.len() != mb.len() {
        return Err(CliError::Config(format!("{} and {} have different lengths", a.display(), b.display())));
    }
    let grid = economy_core::CircleGrid::coarse(ma.len(), n)?;
    let to_masses = |v: &[f64]| -> Result<Vec<f64>> {
        let total: f64 = v.iter().sum::<f64>() * grid.h();
        if !(total > 0.0) {
            return Err(CliError::Config("density has no mass".into()));
        }
        Ok(v.iter().map(|x| x * grid.h() / total).collect())
    };
    let (pa, pb) = (to_masses(&ma)?, to_masses(&mb)?);
    Ok((w2_distance_circle(&pa, &pb, &grid)?, w2_distance_circle_histogram(&pa, &pb, &grid)?))
}

pub fn write_w2(out: &mut Output, atoms: f64, histogram: f64) -> Result<()> {
    let mut f = out.file("w2.csv")?;
    write_meta(&mut f, &[("command", "w2".into())]).map_err(CliError::io("w2.csv"))?;
    writeln!(f, "reading,w2\natoms,{}\nhistogram,{}", fmt17(atoms), fmt17(histogram)).map_err(CliError::io("w2.csv"))?;
    Ok(())
}
