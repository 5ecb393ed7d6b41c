use std::f64::consts::PI;
use std::io::Write;

use crate::error::{CalibrationError, Result};

pub const CURVE_POINTS: usize = 200;
pub const MIN_POINTS: usize = 10;
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Bandwidth {
    /// Silverman's rule of thumb, 1.06 sd n^(-1/5).
    #[default]
    Auto,
    Fixed(f64),
}

impl Bandwidth {
    pub fn resolve(self, x: &[f64]) -> Result<f64> {
        match self {
            Bandwidth::Fixed(h) if h > 0.0 && h.is_finite() => Ok(h),
            Bandwidth::Fixed(h) => Err(CalibrationError::Config(format!("bandwidth must be positive, got {h}"))),
            Bandwidth::Auto => {
                let sd = std_dev(x);
                if !(sd > 0.0) {
                    return Err(CalibrationError::Degenerate("regressor has zero variance".into()));
                }
                Ok(silverman(sd, x.len()))
            }
        }
    }
}

pub fn silverman(sd: f64, n: usize) -> f64 {
    1.06 * sd * (n as f64).powf(-0.2)
}

pub(crate) fn std_dev(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Locally constant kernel fit with pointwise 95% bands.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCurve {
    pub bandwidth: f64,
    pub x: Vec<f64>,
    pub m_hat: Vec<f64>,
    pub lo95: Vec<f64>,
    pub hi95: Vec<f64>,
}

impl KernelCurve {
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["x", "m_hat", "lo95", "hi95"])?;
        for i in 0..self.x.len() {
            wtr.write_record([self.x[i], self.m_hat[i], self.lo95[i], self.hi95[i]].map(|v| format!("{v:.16e}")))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Nadaraya-Watson regression with a Gaussian kernel on 200 points spanning the data.
///
/// Bands use the asymptotic variance sigma^2(x) R(K) / (n h f(x)), with the
/// local residual variance and the kernel density estimate plugged in.
pub fn nadaraya_watson(x: &[f64], y: &[f64], bandwidth: Bandwidth) -> Result<KernelCurve> {
    if x.len() != y.len() {
        return Err(CalibrationError::Config("x and y differ in length".into()));
    }
    if x.len() < MIN_POINTS {
        return Err(CalibrationError::Degenerate(format!("{} points, need at least {MIN_POINTS}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(CalibrationError::Degenerate("non-finite observation".into()));
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    if hi <= lo {
        return Err(CalibrationError::Degenerate("regressor has zero variance".into()));
    }
    let h = bandwidth.resolve(x)?;
    let n = x.len() as f64;
    let roughness = 1.0 / (2.0 * PI.sqrt());
    let mut curve = KernelCurve { bandwidth: h, x: Vec::new(), m_hat: Vec::new(), lo95: Vec::new(), hi95: Vec::new() };
    for g in 0..CURVE_POINTS {
        let x0 = lo + (hi - lo) * g as f64 / (CURVE_POINTS - 1) as f64;
        let w: Vec<f64> = x.iter().map(|xi| (-0.5 * ((xi - x0) / h).powi(2)).exp()).collect();
        let sw: f64 = w.iter().sum();
        let (m, half) = if sw > 0.0 {
            let m = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
            let s2 = w.iter().zip(y).map(|(w, y)| w * (y - m).powi(2)).sum::<f64>() / sw;
            let f = sw / (n * h * (2.0 * PI).sqrt());
            (m, Z95 * (s2 * roughness / (n * h * f)).sqrt())
        } else {
            // far outside the kernel support: fall back to the nearest observation
            let k = (0..x.len()).min_by(|a, b| (x[*a] - x0).abs().total_cmp(&(x[*b] - x0).abs())).expect("non-empty");
            (y[k], f64::INFINITY)
        };
        curve.x.push(x0);
        curve.m_hat.push(m);
        curve.lo95.push(m - half);
        curve.hi95.push(m + half);
    }
    Ok(curve)
}
