//! Exact quadratic-cost transport on the circle through lifted quantile
//! functions: W2^2 = min over theta of int_0^1 |F^-1(s) - G^-1(s + theta)|^2 ds,
//! where F, G are the cumulative distributions lifted to the real line
//! (F(x + n) = F(x) + 1). The objective is convex in theta.

use economy_core::CircleGrid;

use crate::error::{OtError, Result};

/// How mass inside a cell is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellMass {
    /// Point mass at the cell centre.
    Atom,
    /// Mass spread uniformly over the cell.
    Uniform,
}

/// Lifted quantile function of a discrete measure on the grid.
#[derive(Debug, Clone)]
pub(crate) struct Quantile {
    /// cum[f] = mass strictly left of face f; cum[0] = 0 and cum[N] = 1.
    pub cum: Vec<f64>,
    pub kind: CellMass,
    pub h: f64,
    pub n: f64,
}

/// A linear piece of the pair of quantile functions over [s0, s1].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Piece {
    pub s0: f64,
    pub s1: f64,
    /// cell of the first measure and its period shift
    pub cell_a: usize,
    pub ya0: f64,
    pub ya1: f64,
    pub cell_b: usize,
    pub period_b: f64,
    pub yb0: f64,
    pub yb1: f64,
}

impl Piece {
    /// int (qa - qb)^2 ds, exact for linear pieces.
    pub fn cost(&self) -> f64 {
        let d0 = self.ya0 - self.yb0;
        let d1 = self.ya1 - self.yb1;
        (self.s1 - self.s0) * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0
    }
}

pub(crate) fn check_masses(m: &[f64], grid: &CircleGrid, what: &str) -> Result<()> {
    if m.len() != grid.cells() {
        return Err(OtError::Config(format!("{what} has {} cells, grid has {}", m.len(), grid.cells())));
    }
    if let Some((j, v)) = m.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(OtError::Measure(format!("{what}[{j}] = {v} is not a non-negative mass")));
    }
    let total: f64 = m.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(OtError::Measure(format!("{what} has total mass {total}, expected 1")));
    }
    Ok(())
}

impl Quantile {
    pub fn new(masses: &[f64], grid: &CircleGrid, kind: CellMass) -> Self {
        let total: f64 = masses.iter().sum();
        let mut cum = Vec::with_capacity(masses.len() + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for m in masses {
            acc += m;
            cum.push(acc / total);
        }
        *cum.last_mut().expect("non-empty") = 1.0;
        Quantile { cum, kind, h: grid.h(), n: grid.n() }
    }

    pub fn from_cumulative(cum: Vec<f64>, grid: &CircleGrid, kind: CellMass) -> Self {
        Quantile { cum, kind, h: grid.h(), n: grid.n() }
    }

    pub fn cells(&self) -> usize {
        self.cum.len() - 1
    }

    /// Cell whose mass interval contains level r in [0, 1) (half-open on the right).
    pub fn cell_at(&self, r: f64) -> usize {
        let n = self.cells();
        let f = self.cum.partition_point(|c| *c <= r);
        let mut f = f.saturating_sub(1).min(n - 1);
        // skip empty cells at the top end produced by rounding
        while f > 0 && self.cum[f + 1] <= self.cum[f] {
            f -= 1;
        }
        f
    }

    /// Value of the quantile at lifted level s, using cell `f` of period `p`.
    pub fn value_in(&self, f: usize, p: f64, s: f64) -> f64 {
        let base = p * self.n;
        match self.kind {
            CellMass::Atom => base + (f as f64 + 0.5) * self.h,
            CellMass::Uniform => {
                let m = self.cum[f + 1] - self.cum[f];
                let r = s - p;
                base + (f as f64 + ((r - self.cum[f]) / m).clamp(0.0, 1.0)) * self.h
            }
        }
    }

    /// Locates the cell and period containing lifted level s.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let p = s.floor();
        (self.cell_at(s - p), p)
    }
}

/// Splits [0, 1) at every breakpoint of qa(s) and qb(s + theta).
pub(crate) fn pieces(qa: &Quantile, qb: &Quantile, theta: f64) -> Vec<Piece> {
    let mut cuts: Vec<f64> = Vec::with_capacity(qa.cum.len() + qb.cum.len() + 2);
    cuts.extend_from_slice(&qa.cum);
    for c in &qb.cum {
        cuts.push((c - theta).rem_euclid(1.0));
    }
    cuts.push(1.0);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cut points"));
    let mut out = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        if s1 - s0 <= 0.0 {
            continue;
        }
        let mid = 0.5 * (s0 + s1);
        let (fa, pa) = qa.locate(mid);
        let (fb, pb) = qb.locate(mid + theta);
        out.push(Piece {
            s0,
            s1,
            cell_a: fa,
            ya0: qa.value_in(fa, pa, s0),
            ya1: qa.value_in(fa, pa, s1),
            cell_b: fb,
            period_b: pb,
            yb0: qb.value_in(fb, pb, s0 + theta),
            yb1: qb.value_in(fb, pb, s1 + theta),
        });
    }
    out
}

pub(crate) fn shifted_cost(qa: &Quantile, qb: &Quantile, theta: f64) -> f64 {
    pieces(qa, qb, theta).iter().map(Piece::cost).sum()
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimisation of the convex rotation objective over
/// theta in [-1, 1]; returns (theta, cost).
pub(crate) fn optimal_rotation(qa: &Quantile, qb: &Quantile) -> (f64, f64) {
    let f = |t: f64| shifted_cost(qa, qb, t);
    let (mut a, mut b) = (-1.0f64, 1.0f64);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for (t, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (t, v);
        }
    }
    if qa.kind == CellMass::Atom && qb.kind == CellMass::Atom {
        // piecewise linear in theta: the minimum sits on a kink where a
        // cumulative level of one measure meets a shifted level of the other
        let window = 1e-9;
        for ca in &qa.cum {
            for cb in &qb.cum {
                let t0 = cb - ca;
                for t in [t0 - 1.0, t0, t0 + 1.0] {
                    if (t - best.0).abs() <= window {
                        let v = f(t);
                        if v < best.1 {
                            best = (t, v);
                        }
                    }
                }
            }
        }
    }
    (best.0, best.1.max(0.0))
}

fn squared_distance(mu: &[f64], nu: &[f64], grid: &CircleGrid, kind: CellMass) -> Result<f64> {
    check_masses(mu, grid, "mu")?;
    check_masses(nu, grid, "nu")?;
    if mu == nu {
        return Ok(0.0);
    }
    let qa = Quantile::new(mu, grid, kind);
    let qb = Quantile::new(nu, grid, kind);
    Ok(optimal_rotation(&qa, &qb).1)
}

/// W2 distance between cell masses placed as atoms at the cell centres.
pub fn w2_distance_circle(mu: &[f64], nu: &[f64], grid: &CircleGrid) -> Result<f64> {
    Ok(squared_distance(mu, nu, grid, CellMass::Atom)?.sqrt())
}

/// W2 distance between the piecewise-constant densities with the given cell masses.
pub fn w2_distance_circle_histogram(mu: &[f64], nu: &[f64], grid: &CircleGrid) -> Result<f64> {
    Ok(squared_distance(mu, nu, grid, CellMass::Uniform)?.sqrt())
}

/// Minimum reallocation cost, half the squared W2 distance (atoms).
pub fn min_reallocation_cost(mu: &[f64], nu: &[f64], grid: &CircleGrid) -> Result<f64> {
    Ok(0.5 * squared_distance(mu, nu, grid, CellMass::Atom)?)
}

/// A coupling between two measures on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// Total squared arc-length cost.
    pub cost: f64,
    /// (source cell, target cell, mass), masses > 0.
    pub entries: Vec<(usize, usize, f64)>,
}

impl TransportPlan {
    /// Row and column sums of the plan.
    pub fn marginals(&self, cells: usize) -> (Vec<f64>, Vec<f64>) {
        let mut rows = vec![0.0; cells];
        let mut cols = vec![0.0; cells];
        for &(i, j, m) in &self.entries {
            rows[i] += m;
            cols[j] += m;
        }
        (rows, cols)
    }

    pub fn recomputed_cost(&self, grid: &CircleGrid) -> f64 {
        self.entries.iter().map(|&(i, j, m)| m * grid.cell_distance(i, j).powi(2)).sum()
    }
}

/// Optimal plan between atom measures read off the cyclic monotone rearrangement.
pub fn optimal_plan_circle(mu: &[f64], nu: &[f64], grid: &CircleGrid) -> Result<TransportPlan> {
    check_masses(mu, grid, "mu")?;
    check_masses(nu, grid, "nu")?;
    let qa = Quantile::new(mu, grid, CellMass::Atom);
    let qb = Quantile::new(nu, grid, CellMass::Atom);
    let (theta, _) = if mu == nu { (0.0, 0.0) } else { optimal_rotation(&qa, &qb) };
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for p in pieces(&qa, &qb, theta) {
        let m = p.s1 - p.s0;
        match entries.last_mut() {
            Some(last) if last.0 == p.cell_a && last.1 == p.cell_b => last.2 += m,
            _ => entries.push((p.cell_a, p.cell_b, m)),
        }
    }
    let plan = TransportPlan { cost: 0.0, entries };
    Ok(TransportPlan { cost: plan.recomputed_cost(grid), ..plan })
}
