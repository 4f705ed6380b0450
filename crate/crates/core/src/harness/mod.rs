//! Monte Carlo sweeps over one parameter, comparing solvers trial by trial.

mod output;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use output::{aggregate, read_results, summary_path, write_results, write_summary, SummaryRow};

use crate::baselines::{exhaustive_search, kmeans_solution, random_solution, ExhaustiveLimits};
use crate::channel::FadingField;
use crate::error::{Error, Result};
use crate::scenario::{generate_scenario, Scenario, ScenarioShape, SystemParams};
use crate::seed;
use crate::slicer::{self, validate_solution, SliceSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    ContentSize,
    CorrelationExtent,
    UserCount,
    UavCount,
    ComputeSpeed,
    DeployedK,
    StorageFraction,
    /// Fraction of the instance's maximum attainable information.
    RequiredInfo,
    PathlossExp,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 9] = [
        Self::ContentSize,
        Self::CorrelationExtent,
        Self::UserCount,
        Self::UavCount,
        Self::ComputeSpeed,
        Self::DeployedK,
        Self::StorageFraction,
        Self::RequiredInfo,
        Self::PathlossExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ContentSize => "content_size",
            Self::CorrelationExtent => "correlation_extent",
            Self::UserCount => "user_count",
            Self::UavCount => "uav_count",
            Self::ComputeSpeed => "compute_speed",
            Self::DeployedK => "deployed_k",
            Self::StorageFraction => "storage_fraction",
            Self::RequiredInfo => "required_info",
            Self::PathlossExp => "pathloss_exp",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverId {
    Heuristic,
    Random,
    Exhaustive,
    Kmeans,
}

impl SolverId {
    pub fn name(self) -> &'static str {
        match self {
            Self::Heuristic => "heuristic",
            Self::Random => "random",
            Self::Exhaustive => "exhaustive",
            Self::Kmeans => "kmeans",
        }
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Self::Heuristic, Self::Random, Self::Exhaustive, Self::Kmeans]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown solver `{s}`")))
    }
}

/// Solver settings that are not part of the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolverOptions {
    pub exhaustive_limits: ExhaustiveLimits,
    /// Clusters for the K-means solver; all UAVs when unset.
    pub kmeans_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub trials: usize,
    pub solvers: Vec<SolverId>,
    pub seed: u64,
    pub options: SolverOptions,
    /// Run sequentially and record zero wall time, for byte-identical output.
    pub deterministic: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one value".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.solvers.is_empty() {
            return Err(Error::Config("at least one solver is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub value: f64,
    pub solver: SolverId,
    pub trial: usize,
    pub seed: u64,
    pub objective_j: f64,
    pub deployed: usize,
    pub active_sensing: usize,
    pub feasible: bool,
    pub violations: usize,
    pub wall_time_s: f64,
    pub note: String,
}

fn whole(parameter: SweepParameter, value: f64) -> Result<usize> {
    if value >= 1.0 && value.fract() == 0.0 {
        Ok(value as usize)
    } else {
        Err(Error::Config(format!("{parameter} needs a positive whole number, got {value}")))
    }
}

/// Parameters, shape and solver options for one sweep value.
pub fn apply(
    parameter: SweepParameter,
    value: f64,
    params: &SystemParams,
    shape: &ScenarioShape,
    options: &SolverOptions,
) -> Result<(SystemParams, ScenarioShape, SolverOptions)> {
    let mut p = params.clone();
    let mut s = *shape;
    let mut o = *options;
    match parameter {
        SweepParameter::ContentSize => p.content_size_bits = value,
        SweepParameter::CorrelationExtent => p.correlation_extent_m = value,
        SweepParameter::UserCount => {
            s = ScenarioShape { storage_fraction: shape.storage_fraction, ..ScenarioShape::thirds(whole(parameter, value)?, shape.uavs, shape.contents) }
        }
        SweepParameter::UavCount => s.uavs = whole(parameter, value)?,
        SweepParameter::ComputeSpeed => p.uav_compute_hz = value,
        SweepParameter::DeployedK => o.kmeans_k = Some(whole(parameter, value)?),
        SweepParameter::StorageFraction => s.storage_fraction = value,
        SweepParameter::RequiredInfo => {
            p.required_info_bits = None;
            p.required_info_fraction = value;
        }
        SweepParameter::PathlossExp => p.pathloss_exp = value,
    }
    let mut violations = p.validate();
    violations.extend(s.validate());
    if !violations.is_empty() {
        return Err(Error::Config(format!("{parameter} = {value}: {}", violations.join("; "))));
    }
    Ok((p, s, o))
}

/// Run one solver on one scenario.
pub fn run_solver(
    scenario: &Scenario,
    fading: &FadingField,
    solver: SolverId,
    options: &SolverOptions,
) -> Result<SliceSolution> {
    match solver {
        SolverId::Heuristic => slicer::solve(scenario, fading),
        SolverId::Random => random_solution(scenario, fading, scenario.seed),
        SolverId::Exhaustive => exhaustive_search(scenario, fading, &options.exhaustive_limits),
        SolverId::Kmeans => {
            let k = options.kmeans_k.unwrap_or(scenario.n_uavs());
            kmeans_solution(scenario, fading, k, scenario.seed)
        }
    }
}

/// Solve, validate and summarize. Solver errors become infeasible records.
pub fn run_trial(scenario: &Scenario, solver: SolverId, options: &SolverOptions, deterministic: bool) -> TrialResult {
    let fading = FadingField::for_scenario(scenario);
    let start = Instant::now();
    let outcome = run_solver(scenario, &fading, solver, options);
    let elapsed = if deterministic { 0.0 } else { start.elapsed().as_secs_f64() };
    let mut r = TrialResult {
        value: f64::NAN,
        solver,
        trial: 0,
        seed: scenario.seed,
        objective_j: f64::NAN,
        deployed: 0,
        active_sensing: 0,
        feasible: false,
        violations: 0,
        wall_time_s: elapsed,
        note: String::new(),
    };
    match outcome {
        Ok(sol) => {
            let report = validate_solution(&sol, scenario, &fading);
            r.objective_j = sol.objective_j;
            r.deployed = sol.deployed.len();
            r.active_sensing = sol.active_sensing();
            r.violations = report.violations.len();
            r.feasible = report.is_feasible();
            if !r.feasible {
                r.note = report.to_string().replace('\n', " | ");
            }
        }
        Err(e) => r.note = e.to_string(),
    }
    r
}

/// Seed of trial `trial`; shared by every sweep value so that values are
/// compared on the same user layouts and fading.
pub fn trial_seed(sweep_seed: u64, trial: usize) -> u64 {
    seed::derive(sweep_seed, &[seed::STREAM_TRIAL, trial as u64])
}

/// Every value x trial x solver, in that nesting order.
pub fn run_sweep(spec: &SweepSpec, params: &SystemParams, shape: &ScenarioShape) -> Result<Vec<TrialResult>> {
    spec.validate()?;
    let settings = spec
        .values
        .iter()
        .map(|&v| apply(spec.parameter, v, params, shape, &spec.options))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|v| (0..spec.trials).map(move |t| (v, t)))
        .collect();
    let run = |&(v, t): &(usize, usize)| -> Vec<TrialResult> {
        let (p, s, o) = &settings[v];
        let seed = trial_seed(spec.seed, t);
        let scenario = generate_scenario(p, s, seed);
        spec.solvers
            .iter()
            .map(|&solver| {
                let mut r = match &scenario {
                    Ok(sc) => run_trial(sc, solver, o, spec.deterministic),
                    Err(e) => TrialResult {
                        value: f64::NAN,
                        solver,
                        trial: t,
                        seed,
                        objective_j: f64::NAN,
                        deployed: 0,
                        active_sensing: 0,
                        feasible: false,
                        violations: 0,
                        wall_time_s: 0.0,
                        note: e.to_string(),
                    },
                };
                r.value = spec.values[v];
                r.trial = t;
                r
            })
            .collect()
    };
    let nested: Vec<Vec<TrialResult>> = if spec.deterministic {
        jobs.iter().map(run).collect()
    } else {
        jobs.par_iter().map(run).collect()
    };
    Ok(nested.into_iter().flatten().collect())
}
