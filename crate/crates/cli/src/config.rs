//! Flat `key = value` scenario files.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use economy_core::{profiles, CircleGrid, FirmDistribution, ModelParams, SectorProfiles, Variant};
use equilibrium_analysis::{random_feasible_density, steady_state, trial_rng};

use crate::error::{CliError, Result};

pub const KEYS: [&str; 22] = [
    "variant",
    "beta",
    "sigma",
    "eta",
    "n",
    "c0",
    "cells",
    "t_end",
    "snapshot_every",
    "cfl",
    "max_steps",
    "seed",
    "A0",
    "L",
    "gamma",
    "mu0",
    "output_dir",
    "alpha",
    "dt",
    "steps",
    "trials",
    "name",
];

/// A per-cell profile: `constant:<v>`, `sin:<amp>,<phase>,<offset>`,
/// `step:<v1>,<v2>` or `csv:<path>`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Constant(f64),
    Sin { amp: f64, phase: f64, offset: f64 },
    Step(f64, f64),
    Csv(PathBuf),
}

fn numbers(s: &str, want: usize, key: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse numbers in '{s}'")))?;
    if v.len() != want {
        return Err(CliError::Config(format!("{key}: expected {want} numbers, got {}", v.len())));
    }
    Ok(v)
}

impl ProfileSpec {
    pub fn parse(key: &str, s: &str, base: &Path) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("{key}: profile '{s}' is not of the form kind:args")))?;
        match kind.trim() {
            "constant" => Ok(ProfileSpec::Constant(numbers(args, 1, key)?[0])),
            "sin" => {
                let v = numbers(args, 3, key)?;
                Ok(ProfileSpec::Sin { amp: v[0], phase: v[1], offset: v[2] })
            }
            "step" => {
                let v = numbers(args, 2, key)?;
                Ok(ProfileSpec::Step(v[0], v[1]))
            }
            "csv" => {
                let p = PathBuf::from(args.trim());
                Ok(ProfileSpec::Csv(if p.is_relative() { base.join(p) } else { p }))
            }
            other => Err(CliError::Config(format!("{key}: unknown profile kind '{other}'"))),
        }
    }

    pub fn evaluate(&self, grid: &CircleGrid) -> Result<Vec<f64>> {
        match self {
            ProfileSpec::Constant(v) => Ok(vec![*v; grid.cells()]),
            ProfileSpec::Sin { amp, phase, offset } => Ok(profiles::sine(grid, *amp, *phase, *offset)),
            ProfileSpec::Step(a, b) => Ok(profiles::step(grid, *a, *b)),
            ProfileSpec::Csv(path) => {
                let v = read_column(path, None)?;
                if v.len() != grid.cells() {
                    return Err(CliError::Config(format!(
                        "{}: {} values for a {}-cell grid",
                        path.display(),
                        v.len(),
                        grid.cells()
                    )));
                }
                Ok(v)
            }
        }
    }
}

/// Reads one numeric column from a CSV file. Lines starting with `#` are
/// skipped; with a header the column is picked by name (default: the only
/// column, or `mu`), without one the first field of each row is used.
pub fn read_column(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = rdr.records();
    let first = match records.next() {
        Some(r) => r?,
        None => return Err(CliError::Config(format!("{}: empty file", path.display()))),
    };
    let has_header = first.iter().any(|f| f.parse::<f64>().is_err());
    let idx = if has_header {
        let names: Vec<&str> = first.iter().collect();
        let want = column.unwrap_or(if names.len() == 1 { names[0] } else { "mu" });
        names
            .iter()
            .position(|n| *n == want)
            .ok_or_else(|| CliError::Config(format!("{}: no column '{want}' in {names:?}", path.display())))?
    } else {
        0
    };
    let mut out = Vec::new();
    let mut push = |rec: &csv::StringRecord| -> Result<()> {
        let f = rec.get(idx).ok_or_else(|| CliError::Config(format!("{}: short row", path.display())))?;
        out.push(f.parse::<f64>().map_err(|_| CliError::Config(format!("{}: bad number '{f}'", path.display())))?);
        Ok(())
    };
    if !has_header {
        push(&first)?;
    }
    for r in records {
        push(&r?)?;
    }
    Ok(out)
}

/// Initial firm density.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Uniform,
    /// Proportional to 1/L.
    InverseLabour,
    /// Exponentiated random Fourier field with the given amplitude, from the scenario seed.
    Random(f64),
    /// The closed-form long-run equilibrium.
    Steady,
    Profile(ProfileSpec),
}

impl InitialSpec {
    fn parse(s: &str, base: &Path) -> Result<Self> {
        match s {
            "uniform" => Ok(InitialSpec::Uniform),
            "inverse-labour" | "inverse-labor" => Ok(InitialSpec::InverseLabour),
            "steady" => Ok(InitialSpec::Steady),
            _ => match s.strip_prefix("random:") {
                Some(a) => Ok(InitialSpec::Random(numbers(a, 1, "mu0")?[0])),
                None => Ok(InitialSpec::Profile(ProfileSpec::parse("mu0", s, base)?)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub variant: Variant,
    pub beta: f64,
    pub sigma: f64,
    pub eta: f64,
    pub n: f64,
    pub c0: f64,
    pub cells: usize,
    pub t_end: f64,
    pub snapshot_every: f64,
    pub cfl: f64,
    pub max_steps: usize,
    pub seed: u64,
    pub a0: ProfileSpec,
    pub labour: Option<ProfileSpec>,
    pub gamma: Option<ProfileSpec>,
    pub mu0: InitialSpec,
    pub output_dir: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub dt: f64,
    pub steps: usize,
    pub trials: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "scenario".into(),
            variant: Variant::MobileBaseline,
            beta: 0.86,
            sigma: 1.3144,
            eta: 0.0,
            n: 1.0,
            c0: 0.0,
            cells: 512,
            t_end: 2.0,
            snapshot_every: 0.01,
            cfl: 0.4,
            max_steps: 5_000_000,
            seed: 0,
            a0: ProfileSpec::Constant(1.0),
            labour: None,
            gamma: None,
            mu0: InitialSpec::Uniform,
            output_dir: None,
            alpha: None,
            dt: 1e-3,
            steps: 10,
            trials: 1000,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
}

impl ScenarioConfig {
    /// Parses a scenario document. Relative `csv:` paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        let mut seen = HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
            }
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!("line {}: duplicated key '{key}'", lineno + 1)));
            }
            match key {
                "name" => cfg.name = value.to_string(),
                "variant" => cfg.variant = value.parse().map_err(|e: economy_core::ModelError| CliError::Config(e.to_string()))?,
                "beta" => cfg.beta = parse_num(key, value)?,
                "sigma" => cfg.sigma = parse_num(key, value)?,
                "eta" => cfg.eta = parse_num(key, value)?,
                "n" => cfg.n = parse_num(key, value)?,
                "c0" => cfg.c0 = parse_num(key, value)?,
                "cells" => cfg.cells = parse_num(key, value)?,
                "t_end" => cfg.t_end = parse_num(key, value)?,
                "snapshot_every" => cfg.snapshot_every = parse_num(key, value)?,
                "cfl" => cfg.cfl = parse_num(key, value)?,
                "max_steps" => cfg.max_steps = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "A0" => cfg.a0 = ProfileSpec::parse(key, value, base)?,
                "L" => cfg.labour = Some(ProfileSpec::parse(key, value, base)?),
                "gamma" => cfg.gamma = Some(ProfileSpec::parse(key, value, base)?),
                "mu0" => cfg.mu0 = InitialSpec::parse(value, base)?,
                "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
                "alpha" => cfg.alpha = Some(parse_num(key, value)?),
                "dt" => cfg.dt = parse_num(key, value)?,
                "steps" => cfg.steps = parse_num(key, value)?,
                "trials" => cfg.trials = parse_num(key, value)?,
                _ => unreachable!("key list and match arms agree"),
            }
        }
        cfg.params()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut cfg = Self::parse(&text, base)?;
        if cfg.name == "scenario" {
            if let Some(stem) = path.file_stem() {
                cfg.name = stem.to_string_lossy().into_owned();
            }
        }
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.beta, self.sigma, self.eta, self.n, self.c0, self.variant)?)
    }

    pub fn grid(&self) -> Result<CircleGrid> {
        Ok(CircleGrid::new(self.cells, self.n)?)
    }

    /// Technology, unit-mass labour and taste weights of total mass n.
    pub fn profiles(&self) -> Result<SectorProfiles> {
        let g = self.grid()?;
        let mut prof = SectorProfiles::new(g, self.a0.evaluate(&g)?)?;
        if let Some(l) = &self.labour {
            prof = prof.with_labour_normalized(l.evaluate(&g)?)?;
        } else if self.variant == Variant::ImmobileLabour {
            return Err(CliError::Config("the immobile-labour variant needs a labour profile 'L'".into()));
        }
        if let Some(gm) = &self.gamma {
            prof = prof.with_gamma_normalized(gm.evaluate(&g)?)?;
        } else if self.variant == Variant::NonSymmetricPreferences {
            return Err(CliError::Config("the non-symmetric variant needs a taste profile 'gamma'".into()));
        }
        Ok(prof)
    }

    pub fn initial_density(&self, profiles: &SectorProfiles) -> Result<FirmDistribution> {
        let g = *profiles.grid();
        Ok(match &self.mu0 {
            InitialSpec::Uniform => FirmDistribution::uniform(g),
            InitialSpec::InverseLabour => {
                let l = profiles
                    .labour()
                    .ok_or_else(|| CliError::Config("mu0 = inverse-labour needs a labour profile 'L'".into()))?;
                FirmDistribution::normalized(g, l.iter().map(|v| 1.0 / v).collect())?
            }
            InitialSpec::Random(amp) => random_feasible_density(g, &mut trial_rng(self.seed, 0), *amp)?,
            InitialSpec::Steady => steady_state(profiles, &self.params()?.with_c0(0.0)?)?,
            InitialSpec::Profile(p) => FirmDistribution::normalized(g, p.evaluate(&g)?)?,
        })
    }

    /// Key/value pairs written into every output header.
    pub fn meta(&self, command: &str) -> Vec<(&'static str, String)> {
        vec![
            ("command", command.to_string()),
            ("scenario", self.name.clone()),
            ("variant", self.variant.name().to_string()),
            ("beta", self.beta.to_string()),
            ("sigma", self.sigma.to_string()),
            ("eta", self.eta.to_string()),
            ("n", self.n.to_string()),
            ("c0", self.c0.to_string()),
            ("cells", self.cells.to_string()),
            ("seed", self.seed.to_string()),
        ]
    }
}
