use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::error::{CalibrationError, Result};

/// Covariance estimator for the coefficient standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Covariance {
    #[default]
    Classical,
    /// White heteroskedasticity-consistent errors with the n/(n-k) correction.
    Hc1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionFit {
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub r_squared: f64,
    pub n_obs: usize,
    pub residual_se: f64,
}

impl RegressionFit {
    pub fn intercept(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn slope(&self) -> f64 {
        self.coefficients[1]
    }

    pub fn t_stat(&self, k: usize) -> f64 {
        self.coefficients[k] / self.std_errors[k]
    }

    /// Writes `term,estimate,std_error` rows.
    pub fn write_csv(&self, names: &[&str], w: impl Write) -> Result<()> {
        if names.len() != self.coefficients.len() {
            return Err(CalibrationError::Config(format!(
                "{} term names for {} coefficients",
                names.len(),
                self.coefficients.len()
            )));
        }
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["term", "estimate", "std_error"])?;
        for ((n, c), s) in names.iter().zip(&self.coefficients).zip(&self.std_errors) {
            wtr.write_record([n.to_string(), format!("{c:.16e}"), format!("{s:.16e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Design matrix with a leading column of ones.
pub fn design_with_intercept(columns: &[&[f64]]) -> Result<DMatrix<f64>> {
    let n = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != n) {
        return Err(CalibrationError::Config("regressors differ in length".into()));
    }
    Ok(DMatrix::from_fn(n, columns.len() + 1, |i, j| if j == 0 { 1.0 } else { columns[j - 1][i] }))
}

pub fn ols(design: &DMatrix<f64>, y: &[f64]) -> Result<RegressionFit> {
    ols_with(design, y, Covariance::Classical)
}

pub fn ols_with(design: &DMatrix<f64>, y: &[f64], covariance: Covariance) -> Result<RegressionFit> {
    let (n, k) = design.shape();
    if y.len() != n {
        return Err(CalibrationError::Config(format!("{} responses for {n} design rows", y.len())));
    }
    if n <= k {
        return Err(CalibrationError::Degenerate(format!("{n} observations for {k} coefficients")));
    }
    if design.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(CalibrationError::Degenerate("non-finite value in the regression data".into()));
    }
    let svd = design.clone().svd(true, true);
    let largest = svd.singular_values.max();
    let smallest = svd.singular_values.min();
    if !(smallest > largest * 1e-10) {
        return Err(CalibrationError::Collinear { smallest, largest });
    }
    let yv = DVector::from_column_slice(y);
    let beta = svd.solve(&yv, 0.0).map_err(|e| CalibrationError::Degenerate(e.to_string()))?;
    let resid = &yv - design * &beta;
    let ssr = resid.norm_squared();
    let mean = yv.mean();
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let dof = (n - k) as f64;
    let s2 = ssr / dof;

    // (X'X)^-1 = V S^-2 V'
    let v = svd.v_t.as_ref().expect("requested").transpose();
    let inv_s2 = DMatrix::from_diagonal(&svd.singular_values.map(|s| 1.0 / (s * s)));
    let xtx_inv = &v * inv_s2 * v.transpose();
    let cov = match covariance {
        Covariance::Classical => xtx_inv * s2,
        Covariance::Hc1 => {
            let mut meat = DMatrix::zeros(k, k);
            for i in 0..n {
                let row = design.row(i);
                meat += row.transpose() * row * resid[i].powi(2);
            }
            &xtx_inv * meat * &xtx_inv * (n as f64 / dof)
        }
    };
    Ok(RegressionFit {
        coefficients: beta.iter().copied().collect(),
        std_errors: (0..k).map(|j| cov[(j, j)].max(0.0).sqrt()).collect(),
        r_squared: if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 },
        n_obs: n,
        residual_se: s2.sqrt(),
    })
}
