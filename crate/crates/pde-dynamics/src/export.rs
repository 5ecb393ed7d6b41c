//! CSV export of trajectories. Every file starts with a `#` metadata line
//! carrying the schema version, followed by a regular CSV header.

use std::io::Write;

use economy_core::{EquilibriumMap, ModelParams, SectorProfiles};

use crate::error::Result;
use crate::trajectory::Trajectory;

pub const SCHEMA_VERSION: u32 = 1;

/// Full double precision: 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the metadata line `# schema_version=1 key=value ...`.
pub fn write_meta<W: Write>(out: &mut W, meta: &[(&str, String)]) -> std::io::Result<()> {
    write!(out, "# schema_version={SCHEMA_VERSION}")?;
    for (k, v) in meta {
        write!(out, " {k}={v}")?;
    }
    writeln!(out)
}

/// Per-cell snapshot table: t, i, mu, pi, Y, w, labor_productivity.
pub fn write_snapshots<W: Write>(
    mut out: W,
    traj: &Trajectory,
    profiles: &SectorProfiles,
    params: &ModelParams,
    meta: &[(&str, String)],
) -> Result<()> {
    write_meta(&mut out, meta)?;
    let map = EquilibriumMap::new(profiles, params)?;
    let centers = profiles.grid().centers();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "i", "mu", "pi", "Y", "w", "labor_productivity"])?;
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        let eq = map.solve(snap)?;
        let prod = eq.labour_productivity();
        for j in 0..centers.len() {
            w.write_record([
                fmt17(*t),
                fmt17(centers[j]),
                fmt17(snap.values()[j]),
                fmt17(eq.pi[j]),
                fmt17(eq.y[j]),
                fmt17(eq.w[j]),
                fmt17(prod[j]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Per-snapshot aggregates: t, F, X, P, mass_error, l2_to_eq, dt.
pub fn write_summary<W: Write>(mut out: W, traj: &Trajectory, meta: &[(&str, String)]) -> Result<()> {
    write_meta(&mut out, meta)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "F", "X", "P", "mass_error", "l2_to_eq", "dt"])?;
    for k in 0..traj.times.len() {
        let l2 = traj.l2_to_eq.as_ref().map(|v| fmt17(v[k])).unwrap_or_default();
        w.write_record([
            fmt17(traj.times[k]),
            fmt17(traj.f_values[k]),
            fmt17(traj.x_values[k]),
            fmt17(1.0 / traj.x_values[k]),
            fmt17(traj.mass_error[k]),
            l2,
            fmt17(traj.snapshot_dt[k]),
        ])?;
    }
    w.flush()?;
    Ok(())
}
