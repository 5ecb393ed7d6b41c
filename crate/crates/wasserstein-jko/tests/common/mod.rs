#![allow(dead_code)]

use rand::{Rng, SeedableRng};

/// Random probability vector; roughly a fifth of the cells are left empty.
pub fn random_masses(rng: &mut impl Rng, cells: usize) -> Vec<f64> {
    loop {
        let raw: Vec<f64> =
            (0..cells).map(|_| if rng.random::<f64>() < 0.2 { 0.0 } else { rng.random::<f64>() }).collect();
        let s: f64 = raw.iter().sum();
        if s > 0.0 {
            return raw.into_iter().map(|v| v / s).collect();
        }
    }
}

pub fn rng(seed: u64) -> rand::rngs::StdRng {
    rand::rngs::StdRng::seed_from_u64(seed)
}

pub fn point_mass(cells: usize, at: usize) -> Vec<f64> {
    let mut m = vec![0.0; cells];
    m[at] = 1.0;
    m
}
