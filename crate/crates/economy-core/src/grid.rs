use crate::error::{config, domain, Result};

/// Smallest grid accepted for simulation work.
pub const MIN_CELLS: usize = 8;

/// Uniform periodic discretisation of the circle [0, n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleGrid {
    cells: usize,
    n: f64,
}

impl CircleGrid {
    pub fn new(cells: usize, n: f64) -> Result<Self> {
        if cells < MIN_CELLS {
            return config(format!("grid needs at least {MIN_CELLS} cells, got {cells}"));
        }
        Self::coarse(cells, n)
    }

    /// Like [`CircleGrid::new`] but without the simulation lower bound on the
    /// cell count; transport oracles work on 2- and 4-cell grids.
    pub fn coarse(cells: usize, n: f64) -> Result<Self> {
        if cells == 0 {
            return config("grid needs at least one cell");
        }
        if !(n.is_finite() && n > 0.0) {
            return config(format!("circle length must be positive, got {n}"));
        }
        Ok(CircleGrid { cells, n })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.n / self.cells as f64
    }

    pub fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.h()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|j| self.center(j)).collect()
    }

    /// Arc-length distance between two points of the circle.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let d = (x - y).abs().rem_euclid(self.n);
        d.min(self.n - d)
    }

    /// Arc-length distance between two cell centres.
    pub fn cell_distance(&self, i: usize, j: usize) -> f64 {
        let k = i.abs_diff(j) % self.cells;
        k.min(self.cells - k) as f64 * self.h()
    }

    /// Midpoint quadrature h * sum f.
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        if f.len() != self.cells {
            return config(format!("field has {} entries for a {}-cell grid", f.len(), self.cells));
        }
        let mut s = 0.0;
        for &v in f {
            if !v.is_finite() {
                return domain(format!("non-finite integrand value {v}"));
            }
            s += v;
        }
        Ok(s * self.h())
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.cells).map(|j| f(self.center(j))).collect()
    }
}

/// Free-function form of [`CircleGrid::integrate`].
pub fn sector_integral(f: &[f64], grid: &CircleGrid) -> Result<f64> {
    grid.integrate(f)
}

fn check_field(name: &str, v: &[f64], grid: &CircleGrid) -> Result<()> {
    if v.len() != grid.cells() {
        return config(format!("{name} has {} entries for a {}-cell grid", v.len(), grid.cells()));
    }
    if let Some((j, x)) = v.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
        return config(format!("{name}[{j}] = {x} must be positive and finite"));
    }
    Ok(())
}

/// Exogenous per-sector fields on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorProfiles {
    grid: CircleGrid,
    a0: Vec<f64>,
    labour: Option<Vec<f64>>,
    gamma: Option<Vec<f64>>,
}

impl SectorProfiles {
    pub fn new(grid: CircleGrid, a0: Vec<f64>) -> Result<Self> {
        check_field("A0", &a0, &grid)?;
        Ok(SectorProfiles { grid, a0, labour: None, gamma: None })
    }

    pub fn constant(grid: CircleGrid, a0: f64) -> Result<Self> {
        Self::new(grid, vec![a0; grid.cells()])
    }

    /// Attach a labour endowment; it must integrate to one.
    pub fn with_labour(mut self, l: Vec<f64>) -> Result<Self> {
        check_field("L", &l, &self.grid)?;
        let mass = self.grid.integrate(&l)?;
        if (mass - 1.0).abs() > 1e-10 {
            return config(format!("labour endowment must integrate to 1, got {mass}"));
        }
        self.labour = Some(l);
        Ok(self)
    }

    /// Attach a labour endowment after rescaling it to unit mass.
    pub fn with_labour_normalized(self, l: Vec<f64>) -> Result<Self> {
        check_field("L", &l, &self.grid)?;
        let mass = self.grid.integrate(&l)?;
        let l = l.into_iter().map(|x| x / mass).collect();
        self.with_labour(l)
    }

    /// Attach taste weights; they must integrate to the circle length.
    pub fn with_gamma(mut self, gamma: Vec<f64>) -> Result<Self> {
        check_field("gamma", &gamma, &self.grid)?;
        let mass = self.grid.integrate(&gamma)?;
        if (mass - self.grid.n()).abs() > 1e-10 * self.grid.n() {
            return config(format!("taste weights must integrate to n = {}, got {mass}", self.grid.n()));
        }
        self.gamma = Some(gamma);
        Ok(self)
    }

    pub fn with_gamma_normalized(self, gamma: Vec<f64>) -> Result<Self> {
        check_field("gamma", &gamma, &self.grid)?;
        let scale = self.grid.n() / self.grid.integrate(&gamma)?;
        let gamma = gamma.into_iter().map(|x| x * scale).collect();
        self.with_gamma(gamma)
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    pub fn labour(&self) -> Option<&[f64]> {
        self.labour.as_deref()
    }

    pub fn gamma(&self) -> Option<&[f64]> {
        self.gamma.as_deref()
    }

    /// Copy with A0 multiplied by k.
    pub fn scaled_a0(&self, k: f64) -> Result<Self> {
        let mut out = self.clone();
        out.a0.iter_mut().for_each(|a| *a *= k);
        check_field("A0", &out.a0, &out.grid)?;
        Ok(out)
    }
}

/// Strictly positive firm density with unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct FirmDistribution {
    grid: CircleGrid,
    mu: Vec<f64>,
}

/// Densities at or below this value are treated as a solver failure.
pub const POSITIVITY_FLOOR: f64 = 1e-14;

impl FirmDistribution {
    pub fn new(grid: CircleGrid, mu: Vec<f64>) -> Result<Self> {
        Self::check(&grid, &mu)?;
        let mass = grid.integrate(&mu)?;
        if (mass - 1.0).abs() > 1e-12 {
            return config(format!("firm distribution must have unit mass, got {mass}"));
        }
        Ok(FirmDistribution { grid, mu })
    }

    /// Rescale an arbitrary positive field to unit mass.
    pub fn normalized(grid: CircleGrid, mu: Vec<f64>) -> Result<Self> {
        Self::check(&grid, &mu)?;
        let mass = grid.integrate(&mu)?;
        let mu = mu.into_iter().map(|x| x / mass).collect();
        Self::new(grid, mu)
    }

    pub fn uniform(grid: CircleGrid) -> Self {
        FirmDistribution { grid, mu: vec![1.0 / grid.n(); grid.cells()] }
    }

    /// Build from cell masses (density times h).
    pub fn from_masses(grid: CircleGrid, masses: &[f64]) -> Result<Self> {
        let h = grid.h();
        Self::normalized(grid, masses.iter().map(|m| m / h).collect())
    }

    /// Wrap a field produced by a conservative update, without renormalising.
    /// Positivity is still enforced; the mass is only checked loosely.
    pub fn from_update(grid: CircleGrid, mu: Vec<f64>) -> Result<Self> {
        Self::check(&grid, &mu)?;
        let mass = grid.integrate(&mu)?;
        if (mass - 1.0).abs() > 1e-9 {
            return domain(format!("mass drifted to {mass}"));
        }
        Ok(FirmDistribution { grid, mu })
    }

    fn check(grid: &CircleGrid, mu: &[f64]) -> Result<()> {
        if mu.len() != grid.cells() {
            return config(format!("density has {} entries for a {}-cell grid", mu.len(), grid.cells()));
        }
        for (j, &x) in mu.iter().enumerate() {
            if !x.is_finite() {
                return domain(format!("density is not finite at cell {j}"));
            }
            if x <= POSITIVITY_FLOOR {
                return domain(format!("density {x} at cell {j} is not strictly positive"));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> &CircleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }

    pub fn into_values(self) -> Vec<f64> {
        self.mu
    }

    pub fn masses(&self) -> Vec<f64> {
        let h = self.grid.h();
        self.mu.iter().map(|m| m * h).collect()
    }

    pub fn mass(&self) -> f64 {
        self.mu.iter().sum::<f64>() * self.grid.h()
    }

    pub fn l2_distance(&self, other: &FirmDistribution) -> f64 {
        l2_distance(&self.mu, &other.mu, self.grid.h())
    }

    pub fn linf_distance(&self, other: &FirmDistribution) -> f64 {
        linf_distance(&self.mu, &other.mu)
    }
}

pub fn l2_distance(a: &[f64], b: &[f64], h: f64) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() * h).sqrt()
}

pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
