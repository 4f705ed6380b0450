//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::time::Instant;

use aeroslice::baselines::{exhaustive_search, ExhaustiveLimits};
use aeroslice::channel::FadingField;
use aeroslice::compute_alloc::{allocate_compute, speed_closed_form, speeds_at};
use aeroslice::harness::{aggregate, run_sweep, SolverId, SolverOptions, SummaryRow, SweepParameter, SweepSpec, TrialResult};
use aeroslice::power_alloc::{allocate_power, power_closed_form};
use aeroslice::scenario::{generate_scenario, ScenarioShape, SystemParams};
use aeroslice::sensing::{gathered_information, marginal_information, max_information};
use aeroslice::slicer;
use aeroslice::geometry::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(name: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome { name, pass, detail }
}

fn sweep(
    parameter: SweepParameter,
    values: &[f64],
    solvers: &[SolverId],
    params: &SystemParams,
    shape: &ScenarioShape,
    options: SolverOptions,
    seed: u64,
) -> Vec<TrialResult> {
    let spec = SweepSpec {
        parameter,
        values: values.to_vec(),
        trials: 100,
        solvers: solvers.to_vec(),
        seed,
        options,
        deterministic: false,
    };
    run_sweep(&spec, params, shape).expect("valid sweep")
}

fn row(rows: &[SummaryRow], value: f64, solver: SolverId) -> &SummaryRow {
    rows.iter().find(|r| r.value == value && r.solver == solver).expect("cell present")
}

/// Standard error of the difference of two cell means.
fn pooled_se(a: &SummaryRow, b: &SummaryRow) -> f64 {
    (a.std_objective_j.powi(2) / a.feasible as f64 + b.std_objective_j.powi(2) / b.feasible as f64).sqrt()
}

fn means(rows: &[&SummaryRow]) -> String {
    rows.iter().map(|r| format!("{:.0}", r.mean_objective_j)).collect::<Vec<_>>().join(", ")
}

fn small_shape() -> ScenarioShape {
    ScenarioShape { content_users: 3, sensing_users: 2, mec_users: 2, uavs: 3, contents: 4, storage_fraction: 0.75 }
}

fn heuristic_vs_baselines(all: &mut Vec<TrialResult>) -> Vec<Outcome> {
    let params = SystemParams::default();
    let shape = small_shape();
    let options = SolverOptions {
        exhaustive_limits: ExhaustiveLimits { max_users: 7, max_uavs: 3, max_sensing: 2 },
        kmeans_k: None,
    };
    let t = Instant::now();
    let fast = sweep(SweepParameter::ContentSize, &[5e8], &[SolverId::Heuristic, SolverId::Random], &params, &shape, options, 1);
    let fast_s = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let exact = sweep(SweepParameter::ContentSize, &[5e8], &[SolverId::Exhaustive], &params, &shape, options, 1);
    let exact_s = t.elapsed().as_secs_f64();

    let by = |v: &[TrialResult], s: SolverId| -> Vec<TrialResult> {
        let mut out: Vec<_> = v.iter().filter(|r| r.solver == s).cloned().collect();
        out.sort_by_key(|r| r.trial);
        out
    };
    let (h, r, x) = (by(&fast, SolverId::Heuristic), by(&fast, SolverId::Random), by(&exact, SolverId::Exhaustive));
    let mean = |v: &[TrialResult]| v.iter().map(|t| t.objective_j).sum::<f64>() / v.len() as f64;
    let all_ok = h.iter().chain(&r).chain(&x).all(|t| t.feasible);
    let wins = h.iter().zip(&r).filter(|(a, b)| a.objective_j < b.objective_j).count();
    let (mh, mr, mx) = (mean(&h), mean(&r), mean(&x));
    let ratio = mh / mx;
    all.extend(fast);
    all.extend(exact);
    vec![
        outcome(
            "heuristic beats random",
            all_ok && mh < mr && wins * 10 >= 9 * h.len() && fast_s < 120.0,
            format!("mean {mh:.0} J vs {mr:.0} J, wins {wins}/{}, {fast_s:.1} s", h.len()),
        ),
        outcome(
            "heuristic near exhaustive optimum",
            all_ok && ratio <= 1.15 && exact_s < 600.0,
            format!("mean {mh:.0} J vs {mx:.0} J, ratio {ratio:.3} (limit 1.15), {exact_s:.1} s"),
        ),
    ]
}

fn correlation_trend(all: &mut Vec<TrialResult>) -> Outcome {
    let values = [1.0, 10.0, 100.0, 1000.0];
    let res = sweep(SweepParameter::CorrelationExtent, &values, &[SolverId::Heuristic], &SystemParams::default(), &ScenarioShape::default(), SolverOptions::default(), 3);
    let rows = aggregate(&res);
    all.extend(res);
    let cells: Vec<&SummaryRow> = values.iter().map(|&v| row(&rows, v, SolverId::Heuristic)).collect();
    let energy_ok = cells.windows(2).all(|w| w[1].mean_objective_j <= w[0].mean_objective_j + pooled_se(w[0], w[1]));
    let sensing_ok = cells.windows(2).all(|w| w[1].mean_active_sensing <= w[0].mean_active_sensing);
    let active: Vec<String> = cells.iter().map(|r| format!("{:.2}", r.mean_active_sensing)).collect();
    outcome(
        "energy falls with correlation extent",
        energy_ok && sensing_ok,
        format!("energy [{}] ok={energy_ok}; active sensing [{}] ok={sensing_ok}", means(&cells), active.join(", ")),
    )
}

fn uav_floor(all: &mut Vec<TrialResult>) -> Outcome {
    let values: Vec<f64> = (2..=8).map(f64::from).collect();
    let res = sweep(SweepParameter::UavCount, &values, &[SolverId::Heuristic], &SystemParams::default(), &ScenarioShape::default(), SolverOptions::default(), 4);
    let rows = aggregate(&res);
    all.extend(res);
    let cells: Vec<&SummaryRow> = values.iter().map(|&v| row(&rows, v, SolverId::Heuristic)).collect();
    let falling = cells.windows(2).all(|w| w[1].mean_objective_j <= w[0].mean_objective_j + pooled_se(w[0], w[1]));
    let (e7, e8) = (cells[5].mean_objective_j, cells[6].mean_objective_j);
    let gain = (e7 - e8) / e7;
    let dk = cells[6].mean_deployed - cells[5].mean_deployed;
    let deployed: Vec<String> = cells.iter().map(|r| format!("{:.2}", r.mean_deployed)).collect();
    outcome(
        "energy floors as UAVs are added",
        falling && gain < 0.05 && dk < 0.5,
        format!(
            "energy [{}] non-increasing={falling}; 7->8 gain {:.2}%; deployed [{}] 7->8 {dk:+.2}",
            means(&cells),
            100.0 * gain,
            deployed.join(", ")
        ),
    )
}

fn info_and_pathloss(all: &mut Vec<TrialResult>) -> Outcome {
    let values = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut by_beta = Vec::new();
    for beta in [2.2, 2.6] {
        let params = SystemParams { pathloss_exp: beta, ..SystemParams::default() };
        let res = sweep(SweepParameter::RequiredInfo, &values, &[SolverId::Heuristic], &params, &ScenarioShape::default(), SolverOptions::default(), 5);
        by_beta.push(aggregate(&res));
        all.extend(res);
    }
    let cells = |rows: &[SummaryRow]| -> Vec<SummaryRow> {
        values.iter().map(|&v| row(rows, v, SolverId::Heuristic).clone()).collect()
    };
    let (low, high) = (cells(&by_beta[0]), cells(&by_beta[1]));
    let rising = |c: &[SummaryRow]| c.windows(2).all(|w| w[1].mean_objective_j + pooled_se(&w[0], &w[1]) >= w[0].mean_objective_j);
    let steeper = low.iter().zip(&high).skip(1).all(|(a, b)| b.mean_objective_j > a.mean_objective_j);
    let (r_low, r_high) = (rising(&low), rising(&high));
    outcome(
        "energy rises with required information and path loss",
        r_low && r_high && steeper,
        format!(
            "beta 2.2 [{}] rising={r_low}; beta 2.6 [{}] rising={r_high}; 2.6 above 2.2 for I>0: {steeper}",
            means(&low.iter().collect::<Vec<_>>()),
            means(&high.iter().collect::<Vec<_>>())
        ),
    )
}

fn kmeans_storage(all: &mut Vec<TrialResult>) -> Outcome {
    let ks = [2.0, 3.0, 4.0, 5.0];
    let fractions = [1.0, 0.5, 0.25];
    let mut tables = Vec::new();
    for g in fractions {
        let shape = ScenarioShape { storage_fraction: g, ..ScenarioShape::default() };
        let res = sweep(SweepParameter::DeployedK, &ks, &[SolverId::Kmeans], &SystemParams::default(), &shape, SolverOptions::default(), 6);
        tables.push(aggregate(&res));
        all.extend(res);
    }
    let full: Vec<&SummaryRow> = ks.iter().map(|&k| row(&tables[0], k, SolverId::Kmeans)).collect();
    let best = (0..full.len()).min_by(|&a, &b| full[a].mean_objective_j.total_cmp(&full[b].mean_objective_j)).expect("cells");
    let beyond = full[best..].windows(2).all(|w| w[1].mean_objective_j >= w[0].mean_objective_j);
    let mut ordered = true;
    let mut notes = Vec::new();
    for &k in &ks {
        let cell: Vec<&SummaryRow> = tables.iter().map(|t| row(t, k, SolverId::Kmeans)).collect();
        for w in cell.windows(2) {
            if w[0].feasible > 0 && w[1].feasible > 0 && w[0].mean_objective_j > w[1].mean_objective_j + pooled_se(w[0], w[1]) {
                ordered = false;
                notes.push(format!("K={k}: {:.0} > {:.0}", w[0].mean_objective_j, w[1].mean_objective_j));
            }
        }
    }
    outcome(
        "K-means energy grows with K and shrinks with storage",
        beyond && ordered,
        format!(
            "full storage [{}] non-decreasing past K={}: {beyond}; storage order holds: {ordered} {}",
            means(&full),
            ks[best],
            notes.join("; ")
        ),
    )
}

/// Lowest hover-plus-transmit energy over a lattice of power vectors.
fn power_grid_oracle(ctx: &aeroslice::context::UavContext, speeds: &[f64]) -> f64 {
    let n = ctx.content.len();
    let steps = match n {
        1 => 400,
        2 => 120,
        _ => 40,
    };
    common::power_lattice(n, ctx.params.uav_max_tx_power_w, steps)
        .iter()
        .map(|p| common::service_energy(ctx, p, speeds))
        .fold(f64::INFINITY, f64::min)
}

/// Lowest service energy over a dense grid of latency levels.
fn compute_grid_oracle(ctx: &aeroslice::context::UavContext, powers: &[f64]) -> f64 {
    let hp = ctx.hover_power();
    let floor = ctx.mec.iter().map(|m| hp * ctx.params.task_bits / m.rate_bps).fold(0.0, f64::max);
    let equal = ctx.equal_compute();
    let top = (hp * ctx.mec_latencies(&equal).into_iter().fold(0.0, f64::max)).max(ctx.e1(powers)) * 2.0;
    let mut best = common::service_energy(ctx, powers, &equal);
    let points = 4000;
    for s in 1..=points {
        let lambda = floor + (top - floor) * s as f64 / points as f64;
        if let Some(f) = speeds_at(ctx, lambda) {
            if f.iter().sum::<f64>() <= ctx.params.uav_compute_hz {
                best = best.min(common::service_energy(ctx, powers, &f));
            }
        }
    }
    best
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn allocator_oracles() -> Outcome {
    let t = Instant::now();
    let (mut budget, mut monotone, mut power_gap, mut cpu_gap) = (0usize, 0usize, 0.0f64, 0.0f64);
    let contexts = 500;
    for seed in 0..contexts {
        let ctx = common::random_context(seed);
        let hp = ctx.hover_power();
        let f0 = ctx.equal_compute();
        let pw = allocate_power(&ctx, &f0);
        let powers: Vec<f64> = ctx.content.iter().map(|c| pw.per_user_w[&c.user]).collect();
        let cpu = allocate_compute(&ctx, &powers);
        let speeds: Vec<f64> = ctx.mec.iter().map(|m| cpu.per_user_hz[&m.user]).collect();
        if pw.total_w() > ctx.params.uav_max_tx_power_w * (1.0 + 1e-6)
            || cpu.total_hz() > ctx.params.uav_compute_hz * (1.0 + 1e-6)
        {
            budget += 1;
        }

        let equal = ctx.equal_power();
        let rates = ctx.downlink_rates(&equal);
        for (i, c) in ctx.content.iter().enumerate() {
            let omega: f64 = ctx.cross[i].iter().zip(&equal).map(|(x, p)| x * p).sum::<f64>() + ctx.params.noise_power_w;
            let base = hp * c.demand_bits / rates[i];
            let ps: Vec<f64> = (0..10)
                .map(|s| base * 1.5f64.powi(s))
                .map(|rho| power_closed_form(rho, omega, c.gain, c.demand_bits, hp, ctx.params.dl_bandwidth_hz).unwrap())
                .collect();
            if !strictly_decreasing(&ps) {
                monotone += 1;
            }
        }
        for m in &ctx.mec {
            let floor = hp * ctx.params.task_bits / m.rate_bps;
            let fs: Vec<f64> = (1..=10)
                .map(|s| floor * (1.0 + 0.5 * s as f64))
                .map(|l| speed_closed_form(l, ctx.params.task_bits, ctx.params.cycles_per_bit, m.rate_bps, hp).unwrap())
                .collect();
            if !strictly_decreasing(&fs) {
                monotone += 1;
            }
        }

        let ours = common::service_energy(&ctx, &powers, &f0);
        let oracle = power_grid_oracle(&ctx, &f0);
        power_gap = power_gap.max(ours / oracle - 1.0);
        if !ctx.mec.is_empty() {
            let ours = common::service_energy(&ctx, &powers, &speeds);
            let oracle = compute_grid_oracle(&ctx, &powers);
            cpu_gap = cpu_gap.max(ours / oracle - 1.0);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        "allocators meet budgets, monotone closed forms and grid oracles",
        budget == 0 && monotone == 0 && power_gap <= 0.02 && cpu_gap <= 0.01 && secs < 60.0,
        format!(
            "{contexts} contexts: budget breaches {budget}, non-monotone closed forms {monotone}, worst excess over oracle power {:.3}% (limit 2%) cpu {:.3}% (limit 1%), {secs:.1} s",
            100.0 * power_gap,
            100.0 * cpu_gap
        ),
    )
}

fn information_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let raw = 1e6;
    let (mut mismatch, mut drops) = (0usize, 0usize);
    for _ in 0..1000 {
        let n = rng.random_range(1..=10);
        let rho = 10f64.powf(rng.random_range(0.0..3.0));
        let pts: Vec<Point2> = (0..n).map(|_| Point2::new(rng.random_range(0.0..1200.0), rng.random_range(0.0..1200.0))).collect();
        let batch = max_information(&pts, raw, rho);
        let mut active = vec![false; n];
        let mut sum = 0.0;
        for i in 0..n {
            sum += marginal_information(&active, i, &pts, raw, rho).unwrap();
            active[i] = true;
        }
        if (sum - batch).abs() > 1e-9 * batch {
            mismatch += 1;
        }
        let mask: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let before = gathered_information(&mask, &pts, raw, rho);
        for i in (0..n).filter(|&i| !mask[i]) {
            let mut with = mask.clone();
            with[i] = true;
            if gathered_information(&with, &pts, raw, rho) < before {
                drops += 1;
            }
        }
    }
    let rho = 100.0;
    let a = Point2::new(0.0, 0.0);
    let one = max_information(&[a], raw, rho);
    let two = max_information(&[a, Point2::new(rho, 0.0)], raw, rho);
    let analytic = one == raw && two == 1.5 * raw;
    outcome(
        "information model matches incremental and analytic values",
        mismatch == 0 && drops == 0 && analytic,
        format!("1000 layouts: mismatches {mismatch}, monotonicity breaks {drops}; H(1)={one}, H(2 at rho)={two}"),
    )
}

fn feasibility(all: &[TrialResult]) -> Outcome {
    let bad: Vec<&TrialResult> = all.iter().filter(|r| r.violations > 0).collect();
    let solved = all.iter().filter(|r| r.feasible).count();
    outcome(
        "every solver output validates",
        bad.is_empty(),
        format!(
            "{} records, {solved} solved, {} with violations{}",
            all.len(),
            bad.len(),
            bad.first().map(|r| format!(" (first: {})", r.note)).unwrap_or_default()
        ),
    )
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn median_time(reps: u64, mut run: impl FnMut(u64)) -> f64 {
    let mut ts: Vec<f64> = (0..reps)
        .map(|r| {
            let t = Instant::now();
            run(r);
            t.elapsed().as_secs_f64()
        })
        .collect();
    ts.sort_by(f64::total_cmp);
    ts[ts.len() / 2]
}

fn complexity() -> Outcome {
    let params = SystemParams::default();
    let sizes = [9usize, 18, 27, 54];
    let heur: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let scs: Vec<_> = (0..5).map(|s| generate_scenario(&params, &ScenarioShape::thirds(n, 5, 4), s).unwrap()).collect();
            median_time(5, |r| {
                let sc = &scs[r as usize];
                slicer::solve(sc, &FadingField::for_scenario(sc)).unwrap();
            })
        })
        .collect();
    let log_n: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let heur_slope = slope(&log_n, &heur.iter().map(|t| t.ln()).collect::<Vec<_>>());

    let exact_params = SystemParams { required_info_fraction: 1.0, ..SystemParams::default() };
    let small = [4usize, 5, 6];
    let uavs = 3;
    let exact: Vec<f64> = small
        .iter()
        .map(|&n| {
            let shape = ScenarioShape { storage_fraction: 1.0, ..ScenarioShape::thirds(n, uavs, 3) };
            let scs: Vec<_> = (0..5).map(|s| generate_scenario(&exact_params, &shape, s).unwrap()).collect();
            median_time(5, |r| {
                let sc = &scs[r as usize];
                exhaustive_search(sc, &FadingField::for_scenario(sc), &ExhaustiveLimits::default()).unwrap();
            })
        })
        .collect();
    let n_small: Vec<f64> = small.iter().map(|&n| n as f64).collect();
    let exact_slope = slope(&n_small, &exact.iter().map(|t| t.ln()).collect::<Vec<_>>());
    let expected = (uavs as f64).ln();
    let rel = (exact_slope - expected).abs() / expected;
    outcome(
        "heuristic scales polynomially, exhaustive exponentially",
        heur_slope <= 3.5 && rel <= 0.3,
        format!(
            "heuristic log-log slope {heur_slope:.2} (limit 3.5); exhaustive log-time slope {exact_slope:.3} vs ln U = {expected:.3} ({:.0}% off, limit 30%)",
            100.0 * rel
        ),
    )
}

fn main() {
    let mut all = Vec::new();
    let mut outcomes = heuristic_vs_baselines(&mut all);
    outcomes.push(correlation_trend(&mut all));
    outcomes.push(uav_floor(&mut all));
    outcomes.push(info_and_pathloss(&mut all));
    outcomes.push(kmeans_storage(&mut all));
    outcomes.push(allocator_oracles());
    outcomes.push(information_oracle());
    outcomes.push(feasibility(&all));
    outcomes.push(complexity());

    for (n, o) in outcomes.iter().enumerate() {
        println!("{} {:>2} {}: {}", if o.pass { "PASS" } else { "FAIL" }, n + 1, o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
