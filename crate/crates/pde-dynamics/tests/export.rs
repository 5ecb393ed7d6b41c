mod common;

use common::*;
use pde_dynamics::export::{write_snapshots, write_summary};
use pde_dynamics::{simulate, SolverConfig};

#[test]
fn csv_files_have_schema_header_and_full_precision() {
    let (prof, params, mu0) = baseline_immobile(16);
    let eq = immobile_steady_state(&prof);
    let traj = simulate(&mu0, &prof, &params, &SolverConfig::new(0.2, 0.1), Some(&eq)).unwrap();
    let meta = [("seed", "7".to_string())];

    let mut snaps = Vec::new();
    write_snapshots(&mut snaps, &traj, &prof, &params, &meta).unwrap();
    let text = String::from_utf8(snaps).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# schema_version=1 seed=7");
    assert_eq!(lines[1], "t,i,mu,pi,Y,w,labor_productivity");
    assert_eq!(lines.len(), 2 + 3 * 16);
    let first: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(first.len(), 7);
    // 17 significant digits, round-trips exactly
    let mu: f64 = first[2].parse().unwrap();
    assert_eq!(mu, mu0.values()[0]);
    assert_eq!(first[2].split('e').next().unwrap().replace(['.', '-'], "").len(), 17);

    let mut summary = Vec::new();
    write_summary(&mut summary, &traj, &meta).unwrap();
    let text = String::from_utf8(summary).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "t,F,X,P,mass_error,l2_to_eq,dt");
    assert_eq!(lines.len(), 2 + 3);

    let mut again = Vec::new();
    write_summary(&mut again, &traj, &meta).unwrap();
    assert_eq!(text.as_bytes(), &again[..]);
}
