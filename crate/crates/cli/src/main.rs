use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use sectorflow::{
    cmd_calibrate, cmd_efficiency, cmd_fixedcost, cmd_jko, cmd_simulate, cmd_steady, cmd_w2, write_w2,
    CalibrateOptions, CliError, Output, Result, ScenarioConfig,
};

#[derive(Parser, Debug)]
#[command(name = "sectorflow", version, about = "Sector reallocation as a Wasserstein gradient flow")]
struct Cli {
    /// Scenario file; repeat to run several scenarios.
    #[arg(long = "config", global = true)]
    configs: Vec<PathBuf>,
    /// Output directory. With several scenarios each gets a subdirectory named after it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the seed in every scenario.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of scenarios run concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the reallocation PDE and fit its convergence rate.
    Simulate,
    /// Closed-form long-run equilibrium.
    Steady,
    /// Proximal (JKO) trajectory and its distance to the PDE run.
    Jko,
    /// Mobile versus immobile labour consumption gap.
    Efficiency,
    /// Singular equilibrium sustained by a fixed reallocation cost.
    Fixedcost,
    /// Regressions and structural parameters from a sector panel.
    Calibrate(CalibrateArgs),
    /// W2 distance between two densities stored as CSV columns.
    W2(W2Args),
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    /// Panel CSV with the standard columns.
    panel: Option<PathBuf>,
    /// Generate a synthetic panel with this many sectors instead.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Published labour elasticity; with --rho2 and --beta skips the regressions.
    #[arg(long)]
    rho1: Option<f64>,
    /// Published profit-rate elasticity, as a magnitude.
    #[arg(long)]
    rho2: Option<f64>,
    /// Also recover sector densities by empirical Bayes.
    #[arg(long)]
    tweedie: bool,
    /// Heteroskedasticity-robust standard errors.
    #[arg(long)]
    robust: bool,
}

#[derive(Args, Debug)]
struct W2Args {
    a: PathBuf,
    b: PathBuf,
    /// Circumference of the circle.
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    /// Column to read when the files have a header.
    #[arg(long)]
    column: Option<String>,
}

fn output_dir(cli: &Cli, cfg: &ScenarioConfig, several: bool) -> PathBuf {
    match (&cli.out, several) {
        (Some(o), false) => o.clone(),
        (Some(o), true) => o.join(&cfg.name),
        (None, _) => cfg.output_dir.clone().unwrap_or_else(|| Path::new("output").join(&cfg.name)),
    }
}

fn run_scenario(cli: &Cli, path: &Path, several: bool) -> Result<PathBuf> {
    let mut cfg = ScenarioConfig::load(path)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let dir = output_dir(cli, &cfg, several);
    let mut out = Output::create(&dir)?;
    match &cli.command {
        Command::Simulate => cmd_simulate(&cfg, &mut out)?,
        Command::Steady => cmd_steady(&cfg, &mut out)?,
        Command::Jko => cmd_jko(&cfg, &mut out)?,
        Command::Efficiency => cmd_efficiency(&cfg, &mut out)?,
        Command::Fixedcost => cmd_fixedcost(&cfg, &mut out)?,
        Command::Calibrate(_) | Command::W2(_) => unreachable!("handled without a scenario loop"),
    }
    Ok(dir)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::W2(a) => {
            let (atoms, hist) = cmd_w2(&a.a, &a.b, a.n, a.column.as_deref())?;
            println!("w2_atoms\t{atoms:.17e}\nw2_histogram\t{hist:.17e}");
            if let Some(o) = &cli.out {
                write_w2(&mut Output::create(o)?, atoms, hist)?;
            }
            Ok(())
        }
        Command::Calibrate(a) => {
            let mut cfg = match cli.configs.as_slice() {
                [] => ScenarioConfig::default(),
                [p] => ScenarioConfig::load(p)?,
                _ => return Err(CliError::Config("calibrate takes at most one --config".into())),
            };
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let opts = CalibrateOptions {
                panel: a.panel.clone(),
                synthetic: a.synthetic,
                beta: a.beta,
                rho1: a.rho1,
                rho2: a.rho2,
                tweedie: a.tweedie,
                robust: a.robust,
            };
            let dir = cli.out.clone().unwrap_or_else(|| Path::new("output").join("calibrate"));
            cmd_calibrate(&opts, &cfg, &mut Output::create(&dir)?)?;
            eprintln!("wrote {}", dir.display());
            Ok(())
        }
        _ => run_scenarios(cli),
    }
}

/// Runs every scenario, `jobs` at a time; the first failure in file order decides the exit status.
fn run_scenarios(cli: &Cli) -> Result<()> {
    if cli.configs.is_empty() {
        return Err(CliError::Config("no scenario given; pass --config <path>".into()));
    }
    let several = cli.configs.len() > 1;
    let results: Mutex<Vec<Option<Result<PathBuf>>>> = Mutex::new((0..cli.configs.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..cli.jobs.clamp(1, cli.configs.len()) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = cli.configs.get(k) else { break };
                let r = run_scenario(cli, path, several);
                results.lock().expect("no worker panicked")[k] = Some(r);
            });
        }
    });
    let mut first_err = None;
    for (path, r) in cli.configs.iter().zip(results.into_inner().expect("no worker panicked")) {
        match r.expect("every scenario ran") {
            Ok(dir) => eprintln!("{}: wrote {}", path.display(), dir.display()),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                first_err.get_or_insert(e);
            }
        }
    }
    first_err.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(cli.command, Command::Simulate | Command::Steady | Command::Jko | Command::Efficiency | Command::Fixedcost) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
