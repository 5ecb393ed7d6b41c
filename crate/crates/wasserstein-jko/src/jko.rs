//! JKO proximal step mu_{k+1} = argmax F(mu) - W2^2(mu, mu_k) / (2 dt).
//!
//! The unknowns are the face fluxes J_f, the mass moved rightwards across
//! the left face of cell f. New cell masses are m_f = a_f + J_f - J_{f+1}
//! and the new lifted cumulative distribution is F_k(face f) - J_f, so mass
//! conservation holds by construction. Transport cost is measured between
//! piecewise-constant densities; the rotation of the circular coupling is
//! carried by the common mode of J, so maximising over J also minimises over
//! the rotation. The inner solver is a damped Newton ascent.

use economy_core::{EquilibriumMap, FirmDistribution, ModelParams, SectorProfiles};
use nalgebra::{DMatrix, DVector};

use crate::circle::{pieces, CellMass, Quantile};
use crate::error::{OtError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JkoOptions {
    pub max_iters: usize,
    /// Stop once a Newton step improves the objective by less than this.
    pub tol: f64,
    /// Finite-difference step for the Hessian of the objective in J.
    pub hessian_step: f64,
}

impl Default for JkoOptions {
    fn default() -> Self {
        JkoOptions { max_iters: 50, tol: 1e-12, hessian_step: 1e-8 }
    }
}

#[derive(Debug, Clone)]
pub struct JkoOutcome {
    pub mu: FirmDistribution,
    pub converged: bool,
    pub iterations: usize,
    pub objective_initial: f64,
    pub objective_final: f64,
    /// Squared W2 distance (piecewise-constant densities) travelled in the step.
    pub transport_cost: f64,
}

struct Problem<'a> {
    map: &'a EquilibriumMap,
    a: Vec<f64>,
    cum_old: Vec<f64>,
    q_old: Quantile,
    dt: f64,
    h: f64,
}

impl Problem<'_> {
    fn masses(&self, j: &[f64]) -> Vec<f64> {
        let n = self.a.len();
        (0..n).map(|f| self.a[f] + j[f] - j[(f + 1) % n]).collect()
    }

    /// Quantile of the new measure, anchored so that C(J) = shifted_cost(q_old, q_new, J_0).
    fn new_quantile(&self, j: &[f64]) -> Quantile {
        let n = self.a.len();
        let mut cum = Vec::with_capacity(n + 1);
        for f in 0..n {
            cum.push(self.cum_old[f] - j[f] + j[0]);
        }
        cum.push(1.0);
        Quantile::from_cumulative(cum, self.map.grid(), CellMass::Uniform)
    }

    fn cost(&self, j: &[f64]) -> f64 {
        let qn = self.new_quantile(j);
        pieces(&self.q_old, &qn, j[0]).iter().map(|p| p.cost()).sum()
    }

    /// Gradient of the transport cost in J:
    /// dC/dJ_f = 2 int (y - T^-1(y)) hat_f(y) dy over the new positions y.
    fn cost_gradient(&self, j: &[f64]) -> Vec<f64> {
        let n = self.a.len();
        let qn = self.new_quantile(j);
        let big_n = self.map.grid().n();
        let mut g = vec![0.0; n];
        for p in pieces(&self.q_old, &qn, j[0]) {
            let base = p.period_b * big_n;
            let u = |y: f64| (y - base) / self.h - p.cell_b as f64;
            let (d0, d1) = (p.yb0 - p.ya0, p.yb1 - p.ya1);
            let (u0, u1) = (u(p.yb0), u(p.yb1));
            let (dm, um) = (0.5 * (d0 + d1), 0.5 * (u0 + u1));
            let jac = p.yb1 - p.yb0;
            let right = jac * (d0 * u0 + 4.0 * dm * um + d1 * u1) / 6.0;
            let left = jac * (d0 * (1.0 - u0) + 4.0 * dm * (1.0 - um) + d1 * (1.0 - u1)) / 6.0;
            g[p.cell_b] += 2.0 * left;
            g[(p.cell_b + 1) % n] += 2.0 * right;
        }
        g
    }

    fn objective(&self, j: &[f64]) -> Option<f64> {
        let m = self.masses(j);
        if m.iter().any(|v| *v <= 0.0) {
            return None;
        }
        let mu: Vec<f64> = m.iter().map(|v| v / self.h).collect();
        let f = self.map.functional(&mu).ok()?;
        Some(f - self.cost(j) / (2.0 * self.dt))
    }

    fn gradient(&self, j: &[f64]) -> Result<Vec<f64>> {
        let n = self.a.len();
        let mu: Vec<f64> = self.masses(j).iter().map(|v| v / self.h).collect();
        let pi = self.map.profit_rates(&mu)?;
        let gc = self.cost_gradient(j);
        Ok((0..n).map(|f| pi[f] - pi[(f + n - 1) % n] - gc[f] / (2.0 * self.dt)).collect())
    }
}

/// One JKO step of size `dt` from `mu`.
pub fn jko_step(
    mu: &FirmDistribution,
    dt: f64,
    profiles: &SectorProfiles,
    params: &ModelParams,
    options: &JkoOptions,
) -> Result<JkoOutcome> {
    if params.c0 > 0.0 {
        return Err(OtError::Config("the JKO step is defined only without a fixed reallocation cost".into()));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(OtError::Config(format!("dt must be positive, got {dt}")));
    }
    let map = EquilibriumMap::new(profiles, params)?;
    if mu.grid() != map.grid() {
        return Err(OtError::Config("density and profiles live on different grids".into()));
    }
    jko_step_with(&map, mu, dt, options)
}

pub(crate) fn jko_step_with(
    map: &EquilibriumMap,
    mu: &FirmDistribution,
    dt: f64,
    options: &JkoOptions,
) -> Result<JkoOutcome> {
    let grid = *map.grid();
    let n = grid.cells();
    let a = mu.masses();
    let q_old = Quantile::new(&a, &grid, CellMass::Uniform);
    let prob = Problem { map, cum_old: q_old.cum.clone(), q_old, a, dt, h: grid.h() };

    let mut j = vec![0.0; n];
    let objective_initial = prob.objective(&j).ok_or_else(|| OtError::Measure("initial density invalid".into()))?;
    let mut obj = objective_initial;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iters {
        iterations += 1;
        let g = prob.gradient(&j)?;
        let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if gmax < 1e-15 {
            converged = true;
            break;
        }
        let dir = newton_direction(&prob, &j, &g, options.hessian_step)?;
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-12 {
            let trial: Vec<f64> = j.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
            if let Some(v) = prob.objective(&trial) {
                if v >= obj {
                    accepted = Some((trial, v));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((trial, v)) => {
                let gain = v - obj;
                j = trial;
                obj = v;
                if gain < options.tol {
                    converged = true;
                    break;
                }
            }
            None => {
                // no ascent left at floating-point resolution
                converged = gmax < 1e-9;
                break;
            }
        }
    }
    let masses = prob.masses(&j);
    let transport_cost = prob.cost(&j);
    let mu = FirmDistribution::from_update(grid, masses.iter().map(|m| m / grid.h()).collect())?;
    Ok(JkoOutcome { mu, converged, iterations, objective_initial, objective_final: obj, transport_cost })
}

/// Newton direction for the concave-near-optimum objective, with a
/// Levenberg shift when the finite-difference Hessian is not negative definite.
fn newton_direction(prob: &Problem<'_>, j: &[f64], g: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = j.len();
    let mut hess = DMatrix::<f64>::zeros(n, n);
    let mut jp = j.to_vec();
    for f in 0..n {
        jp[f] = j[f] + step;
        let gp = prob.gradient(&jp)?;
        jp[f] = j[f] - step;
        let gm = prob.gradient(&jp)?;
        jp[f] = j[f];
        for r in 0..n {
            hess[(r, f)] = (gp[r] - gm[r]) / (2.0 * step);
        }
    }
    let neg = -(&hess + hess.transpose()) * 0.5;
    let rhs = DVector::from_column_slice(g);
    let scale = neg.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut shift = 0.0;
    for _ in 0..40 {
        let mut m = neg.clone();
        for k in 0..n {
            m[(k, k)] += shift;
        }
        if let Some(ch) = m.cholesky() {
            return Ok(ch.solve(&rhs).iter().copied().collect());
        }
        shift = if shift == 0.0 { 1e-10 * scale } else { shift * 10.0 };
    }
    // steepest ascent as a last resort
    Ok(g.iter().map(|v| v / scale).collect())
}

/// Sequence of JKO steps, starting density included.
#[derive(Debug, Clone)]
pub struct JkoTrajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<FirmDistribution>,
    pub f_values: Vec<f64>,
    pub all_converged: bool,
}

pub fn jko_trajectory(
    mu0: &FirmDistribution,
    dt: f64,
    steps: usize,
    profiles: &SectorProfiles,
    params: &ModelParams,
    options: &JkoOptions,
) -> Result<JkoTrajectory> {
    if params.c0 > 0.0 {
        return Err(OtError::Config("the JKO step is defined only without a fixed reallocation cost".into()));
    }
    let map = EquilibriumMap::new(profiles, params)?;
    let mut traj = JkoTrajectory {
        times: vec![0.0],
        snapshots: vec![mu0.clone()],
        f_values: vec![map.functional(mu0.values())?],
        all_converged: true,
    };
    let mut mu = mu0.clone();
    for k in 1..=steps {
        let out = jko_step_with(&map, &mu, dt, options)?;
        traj.all_converged &= out.converged;
        mu = out.mu;
        traj.times.push(k as f64 * dt);
        traj.f_values.push(map.functional(mu.values())?);
        traj.snapshots.push(mu.clone());
    }
    Ok(traj)
}
