#![allow(dead_code)]

use economy_core::{ModelParams, Variant};

pub const BETA: f64 = 0.86;
pub const SIGMA: f64 = 1.3144;
pub const ETA: f64 = 0.0222;

pub fn baseline() -> ModelParams {
    ModelParams::new(BETA, SIGMA, ETA, 1.0, 0.0, Variant::ImmobileLabour).unwrap()
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

pub fn variance(a: &[f64]) -> f64 {
    let n = a.len() as f64;
    let m = a.iter().sum::<f64>() / n;
    a.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
}
