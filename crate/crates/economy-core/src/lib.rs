//! Closed-form short-run equilibria of the sector reallocation model on a
//! discretised circle of sectors.
//!
//! Firms are distributed over sectors with density `mu`; given `mu`, prices,
//! wages, profit rates and aggregate consumption follow in closed form for
//! four model variants (mobile labour, mobile labour with intrasectoral
//! externalities, immobile labour, non-symmetric preferences).

mod equilibrium;
mod error;
mod grid;
mod params;
pub mod profiles;

pub use equilibrium::{
    aggregate_consumption, effective_technology, functional_f, short_run_equilibrium, z_integral,
    EquilibriumMap, ShortRunEquilibrium,
};
pub use error::{ModelError, Result};
pub use grid::{
    l2_distance, linf_distance, sector_integral, CircleGrid, FirmDistribution, SectorProfiles, MIN_CELLS,
    POSITIVITY_FLOOR,
};
pub use params::{ModelParams, Variant};
