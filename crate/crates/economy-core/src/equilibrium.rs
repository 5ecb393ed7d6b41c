use crate::error::{config, domain, Result};
use crate::grid::{CircleGrid, FirmDistribution, SectorProfiles};
use crate::params::{ModelParams, Variant};

/// Technology field entering the mobile formulas. For non-symmetric
/// preferences the taste weights are folded in as gamma^(sigma/(sigma-1)) * A0.
pub fn effective_technology(profiles: &SectorProfiles, params: &ModelParams) -> Result<Vec<f64>> {
    match params.variant {
        Variant::NonSymmetricPreferences => {
            let gamma = match profiles.gamma() {
                Some(g) => g,
                None => return config("non-symmetric preferences need taste weights gamma"),
            };
            let e = params.sigma / (params.sigma - 1.0);
            let out: Vec<f64> = profiles.a0().iter().zip(gamma).map(|(a, g)| g.powf(e) * a).collect();
            if out.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return domain("effective technology overflowed");
            }
            Ok(out)
        }
        _ => Ok(profiles.a0().to_vec()),
    }
}

/// Short-run equilibrium quantities for a given firm distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortRunEquilibrium {
    pub p: Vec<f64>,
    pub w: Vec<f64>,
    pub pi: Vec<f64>,
    pub y: Vec<f64>,
    pub l_used: Vec<f64>,
    /// Labour per firm.
    pub l: Vec<f64>,
    /// Output per firm.
    pub q: Vec<f64>,
    pub price_index: f64,
    pub x: f64,
    pub pi_agg: f64,
    pub z: f64,
}

impl ShortRunEquilibrium {
    /// Value added per worker, Y / L.
    pub fn labour_productivity(&self) -> Vec<f64> {
        self.y.iter().zip(&self.l_used).map(|(y, l)| y / l).collect()
    }
}

/// Precomputed equilibrium map for fixed profiles and parameters.
///
/// Every variant shares the structure Y = c * mu^ez / Z with
/// Z = h * sum(c * mu^ez) and pi = (1-beta) * Y / mu; only the per-cell
/// coefficient c and the exponent ez differ.
#[derive(Debug, Clone)]
pub struct EquilibriumMap {
    params: ModelParams,
    grid: CircleGrid,
    ln_coef: Vec<f64>,
    ez: f64,
    // per-cell price factor and exponent of mu in the price
    ln_price_coef: Vec<f64>,
    price_mu_exp: f64,
    price_z_exp: f64,
    labour: Option<Vec<f64>>,
}

impl EquilibriumMap {
    pub fn new(profiles: &SectorProfiles, params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let grid = *profiles.grid();
        if (grid.n() - params.n).abs() > 1e-12 * params.n {
            return config(format!("grid length {} does not match n = {}", grid.n(), params.n));
        }
        let (beta, sigma, eta) = (params.beta, params.sigma, params.eta);
        let rho = params.rho();
        let ez = params.z_exponent();
        let (ln_coef, ln_price_coef, price_mu_exp, price_z_exp, labour) = if params.variant.is_mobile() {
            let a = effective_technology(profiles, params)?;
            let ln_a: Vec<f64> = a.iter().map(|v| v.ln()).collect();
            let ln_coef: Vec<f64> = ln_a.iter().map(|la| la * (sigma - 1.0) / rho).collect();
            let mut ln_price: Vec<f64> = ln_a.iter().map(|la| -la / rho).collect();
            if params.variant == Variant::NonSymmetricPreferences {
                // prices carry the taste weight back out: p = p~ * gamma^(sigma/(sigma-1))
                let g = profiles.gamma().expect("checked by effective_technology");
                let e = sigma / (sigma - 1.0);
                ln_price.iter_mut().zip(g).for_each(|(lp, g)| *lp += e * g.ln());
            }
            (ln_coef, ln_price, -(1.0 - beta + eta) / rho, -(1.0 - beta), None)
        } else {
            let l = match profiles.labour() {
                Some(l) => l.to_vec(),
                None => return config("immobile labour variant needs a labour endowment L"),
            };
            let ln_al: Vec<f64> =
                profiles.a0().iter().zip(&l).map(|(a, l)| a.ln() + beta * l.ln()).collect();
            let ln_coef: Vec<f64> = ln_al.iter().map(|v| v * (sigma - 1.0) / sigma).collect();
            let ln_price = ln_al.iter().map(|v| -v / sigma).collect();
            (ln_coef, ln_price, -(1.0 + eta - beta) / sigma, -1.0, Some(l))
        };
        if ln_coef.iter().any(|v: &f64| !v.is_finite()) {
            return domain("equilibrium coefficients are not finite");
        }
        Ok(EquilibriumMap {
            params: *params,
            grid,
            ln_coef,
            ez,
            ln_price_coef,
            price_mu_exp,
            price_z_exp,
            labour,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    /// Writes the unnormalised sectoral output c * mu^ez into `out` and returns Z.
    fn raw_output_into(&self, mu: &[f64], out: &mut [f64]) -> Result<f64> {
        let mut s = 0.0;
        for ((o, &m), &lc) in out.iter_mut().zip(mu).zip(&self.ln_coef) {
            *o = (lc + self.ez * m.ln()).exp();
            s += *o;
        }
        let z = s * self.grid.h();
        if !(z.is_finite() && z > 0.0) {
            return domain(format!("Z integral is not a positive finite number ({z})"));
        }
        Ok(z)
    }

    pub fn z(&self, mu: &[f64]) -> Result<f64> {
        let mut buf = vec![0.0; mu.len()];
        self.raw_output_into(mu, &mut buf)
    }

    /// Profit rates written into `out`; returns Z. Hot path of the PDE solver.
    pub fn profit_rates_into(&self, mu: &[f64], out: &mut [f64]) -> Result<f64> {
        let z = self.raw_output_into(mu, out)?;
        let k = (1.0 - self.params.beta) / z;
        for (o, &m) in out.iter_mut().zip(mu) {
            *o *= k / m;
        }
        Ok(z)
    }

    pub fn profit_rates(&self, mu: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; mu.len()];
        self.profit_rates_into(mu, &mut out)?;
        Ok(out)
    }

    pub fn log_consumption_from_z(&self, z: f64) -> f64 {
        self.params.consumption_log_factor() * z.ln()
    }

    pub fn functional_from_z(&self, z: f64) -> f64 {
        self.params.functional_prefactor() * self.log_consumption_from_z(z)
    }

    /// Gradient-flow functional F(mu).
    pub fn functional(&self, mu: &[f64]) -> Result<f64> {
        Ok(self.functional_from_z(self.z(mu)?))
    }

    pub fn consumption(&self, mu: &[f64]) -> Result<f64> {
        Ok(self.log_consumption_from_z(self.z(mu)?).exp())
    }

    pub fn solve(&self, mu: &FirmDistribution) -> Result<ShortRunEquilibrium> {
        if mu.grid() != &self.grid {
            return config("firm distribution and profiles live on different grids");
        }
        let mu = mu.values();
        let cells = mu.len();
        let beta = self.params.beta;
        let mut y = vec![0.0; cells];
        let z = self.raw_output_into(mu, &mut y)?;
        y.iter_mut().for_each(|v| *v /= z);
        let pi: Vec<f64> = y.iter().zip(mu).map(|(y, m)| (1.0 - beta) * y / m).collect();
        let (w, l_used) = match &self.labour {
            None => (vec![beta; cells], y.clone()),
            Some(l) => (y.iter().zip(l).map(|(y, l)| beta * y / l).collect(), l.clone()),
        };
        let zp = z.powf(self.price_z_exp);
        let p: Vec<f64> = self
            .ln_price_coef
            .iter()
            .zip(mu)
            .map(|(lc, m)| (lc + self.price_mu_exp * m.ln()).exp() * zp)
            .collect();
        let l: Vec<f64> = l_used.iter().zip(mu).map(|(l, m)| l / m).collect();
        let q: Vec<f64> = y.iter().zip(&p).zip(mu).map(|((y, p), m)| y / (p * m)).collect();
        let log_x = self.log_consumption_from_z(z);
        let x = log_x.exp();
        let price_index = (-log_x).exp();
        let pi_agg = self.grid.integrate(&pi.iter().zip(mu).map(|(p, m)| p * m).collect::<Vec<_>>())?;
        let eq = ShortRunEquilibrium { p, w, pi, y, l_used, l, q, price_index, x, pi_agg, z };
        let finite = [&eq.p, &eq.w, &eq.pi, &eq.y, &eq.l, &eq.q]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
            && x.is_finite()
            && price_index.is_finite();
        if !finite {
            return domain("short-run equilibrium overflowed");
        }
        Ok(eq)
    }
}

pub fn z_integral(mu: &FirmDistribution, profiles: &SectorProfiles, params: &ModelParams) -> Result<f64> {
    EquilibriumMap::new(profiles, params)?.z(mu.values())
}

pub fn short_run_equilibrium(
    mu: &FirmDistribution,
    profiles: &SectorProfiles,
    params: &ModelParams,
) -> Result<ShortRunEquilibrium> {
    EquilibriumMap::new(profiles, params)?.solve(mu)
}

pub fn aggregate_consumption(eq: &ShortRunEquilibrium) -> f64 {
    1.0 / eq.price_index
}

pub fn functional_f(mu: &FirmDistribution, profiles: &SectorProfiles, params: &ModelParams) -> Result<f64> {
    EquilibriumMap::new(profiles, params)?.functional(mu.values())
}
