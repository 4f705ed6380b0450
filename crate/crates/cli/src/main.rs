use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aeroslice::baselines::ExhaustiveLimits;
use aeroslice::channel::FadingField;
use aeroslice::fixture::catalog_fixture;
use aeroslice::harness::{self, run_solver, SolverId, SolverOptions, SweepParameter, SweepSpec};
use aeroslice::scenario::{generate_scenario, load_config, Scenario, ScenarioShape, SystemParams};
use aeroslice::slicer::{validate_solution, SliceSolution};
use aeroslice::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aeroslice", version, about = "Energy-efficient multi-UAV network slicing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sweep over one parameter.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// `<parameter>=<v1,v2,...>`
        #[arg(long)]
        sweep: String,
        #[arg(long, default_value = "heuristic,random")]
        solvers: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// `N=7,U=3,Ns=3`
        #[arg(long)]
        exhaustive_limits: Option<String>,
        /// UAVs deployed by the K-means solver (default: all).
        #[arg(long)]
        kmeans_k: Option<usize>,
        /// Sequential execution with zeroed wall times.
        #[arg(long)]
        deterministic: bool,
    },
    /// Check a solution against a scenario.
    Validate {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Solve the built-in catalog instance with every solver.
    Demo {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Draw a random scenario and write it as JSON.
    Generate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a scenario file and write the solution as JSON.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "heuristic")]
        solver: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        exhaustive_limits: Option<String>,
        #[arg(long)]
        kmeans_k: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn config(path: Option<&Path>) -> Result<(SystemParams, ScenarioShape), Error> {
    match path {
        Some(p) => load_config(&read(p)?),
        None => load_config(""),
    }
}

fn parse_sweep(text: &str) -> Result<(SweepParameter, Vec<f64>), Error> {
    let (name, values) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("sweep `{text}` must look like parameter=v1,v2")))?;
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("sweep value `{v}` is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((name.trim().parse()?, values))
}

fn parse_solvers(text: &str) -> Result<Vec<SolverId>, Error> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

fn parse_limits(text: Option<&str>) -> Result<ExhaustiveLimits, Error> {
    let mut limits = ExhaustiveLimits::default();
    let Some(text) = text else { return Ok(limits) };
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("limit `{part}` must look like N=7")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("limit `{part}` needs a whole number")))?;
        match key.trim() {
            "N" => limits.max_users = value,
            "U" => limits.max_uavs = value,
            "Ns" => limits.max_sensing = value,
            other => return Err(Error::Config(format!("unknown limit `{other}` (expected N, U or Ns)"))),
        }
    }
    Ok(limits)
}

fn print_solution(label: &str, sol: &SliceSolution) {
    println!(
        "{label:<11} energy {:>12.2} J  deployed {:?}  active sensing {}",
        sol.objective_j,
        sol.deployed,
        sol.active_sensing()
    );
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run { config: cfg, sweep, solvers, trials, seed, out, exhaustive_limits, kmeans_k, deterministic } => {
            let (params, shape) = config(cfg.as_deref())?;
            let (parameter, values) = parse_sweep(&sweep)?;
            let spec = SweepSpec {
                parameter,
                values,
                trials,
                solvers: parse_solvers(&solvers)?,
                seed,
                options: SolverOptions { exhaustive_limits: parse_limits(exhaustive_limits.as_deref())?, kmeans_k },
                deterministic,
            };
            let results = harness::run_sweep(&spec, &params, &shape)?;
            let summary = harness::write_results(&results, &out)?;
            let infeasible = results.iter().filter(|r| !r.feasible).count();
            println!(
                "{} trials written to {} ({} infeasible); summary in {}",
                results.len(),
                out.display(),
                infeasible,
                summary.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { solution, scenario } => {
            let scenario = Scenario::from_json(&read(&scenario)?)?;
            let solution = SliceSolution::from_json(&read(&solution)?)?;
            let fading = FadingField::for_scenario(&scenario);
            let report = validate_solution(&solution, &scenario, &fading);
            println!("{report}");
            Ok(if report.is_feasible() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Demo { seed } => {
            let params = SystemParams::default();
            let scenario = catalog_fixture(&params, 1, 1, seed)?;
            let fading = FadingField::for_scenario(&scenario);
            println!(
                "catalog instance: {} users ({} content, {} sensing, {} MEC), {} UAVs, {} contents",
                scenario.n_users(),
                scenario.n_content(),
                scenario.n_sensing(),
                scenario.n_mec(),
                scenario.n_uavs(),
                scenario.n_contents()
            );
            let options = SolverOptions::default();
            let mut failed = false;
            for solver in [SolverId::Heuristic, SolverId::Random, SolverId::Exhaustive, SolverId::Kmeans] {
                match run_solver(&scenario, &fading, solver, &options) {
                    Ok(sol) => {
                        print_solution(solver.name(), &sol);
                        let report = validate_solution(&sol, &scenario, &fading);
                        if !report.is_feasible() {
                            println!("  {report}");
                            failed = true;
                        }
                    }
                    Err(e) => {
                        println!("{:<11} failed: {e}", solver.name());
                        failed = true;
                    }
                }
            }
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Generate { config: cfg, seed, out } => {
            let (params, shape) = config(cfg.as_deref())?;
            let scenario = generate_scenario(&params, &shape, seed)?;
            write(&out, &scenario.to_json()?)?;
            println!("scenario with {} users written to {}", scenario.n_users(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { scenario, solver, out, exhaustive_limits, kmeans_k } => {
            let scenario = Scenario::from_json(&read(&scenario)?)?;
            let fading = FadingField::for_scenario(&scenario);
            let solver: SolverId = solver.parse()?;
            let options =
                SolverOptions { exhaustive_limits: parse_limits(exhaustive_limits.as_deref())?, kmeans_k };
            let sol = run_solver(&scenario, &fading, solver, &options)?;
            print_solution(solver.name(), &sol);
            if let Some(out) = out {
                write(&out, &sol.to_json()?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_)
        | Error::Unservable(_)
        | Error::LimitsExceeded(_)
        | Error::ZeroRate { .. }
        | Error::ZeroCompute { .. }
        | Error::NoAssociatedUsers(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
