#![allow(dead_code)]

use economy_core::{profiles, CircleGrid, ModelParams, SectorProfiles, Variant};

pub const BETA: f64 = 0.86;
pub const SIGMA: f64 = 1.3144;
pub const ETA: f64 = 0.0222;

pub fn grid(cells: usize) -> CircleGrid {
    CircleGrid::new(cells, 1.0).unwrap()
}

/// A0 = 1 on the first half of the unit circle, 2 on the second.
pub fn step_economy(cells: usize, sigma: f64) -> (SectorProfiles, ModelParams) {
    let g = grid(cells);
    let prof = SectorProfiles::new(g, profiles::step(&g, 1.0, 2.0)).unwrap();
    (prof, ModelParams::mobile(0.5, sigma).unwrap())
}

/// Immobile-labour economy with A0 = 1 and the normalized sine labour profile.
pub fn baseline_immobile(cells: usize) -> (SectorProfiles, ModelParams) {
    let g = grid(cells);
    let prof = SectorProfiles::constant(g, 1.0).unwrap().with_labour(profiles::baseline_labour(&g)).unwrap();
    (prof, ModelParams::new(BETA, SIGMA, ETA, 1.0, 0.0, Variant::ImmobileLabour).unwrap())
}
