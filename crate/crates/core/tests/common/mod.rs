#![allow(dead_code)]

use aeroslice::channel::FadingField;
use aeroslice::context::UavContext;
use aeroslice::scenario::{generate_scenario, ScenarioShape, SystemParams};
use aeroslice::slicer::place;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One UAV serving a random mix of 1-3 content, 0-2 sensing and 0-3 MEC
/// users from the centroid of its users, with a random content size and CPU.
pub fn random_context(seed: u64) -> UavContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = SystemParams {
        content_size_bits: 10f64.powf(rng.random_range(5.0..8.7)),
        uav_compute_hz: 10f64.powf(rng.random_range(8.0..9.6)),
        ..SystemParams::default()
    };
    let shape = ScenarioShape {
        content_users: rng.random_range(1..=3),
        sensing_users: rng.random_range(0..=2),
        mec_users: rng.random_range(0..=3),
        uavs: 1,
        contents: 2,
        storage_fraction: 1.0,
    };
    let sc = generate_scenario(&params, &shape, seed).expect("full storage always covers");
    let fading = FadingField::for_scenario(&sc);
    let users: Vec<usize> = (0..sc.n_users()).collect();
    let at = place(&sc, 0, &users).expect("users present");
    UavContext::build(&sc, &fading, 0, at, &users).expect("distinct positions")
}

/// Hover plus transmit energy of one UAV; the terms the allocators trade.
pub fn service_energy(ctx: &UavContext, powers: &[f64], speeds: &[f64]) -> f64 {
    let e = ctx.energy(ctx.placement, powers, speeds).expect("positive speeds");
    e.hover_j + e.transmit_j + e.compute_j
}

/// Every power vector on a lattice of step `P_k / steps` within the budget.
pub fn power_lattice(n: usize, budget: f64, steps: usize) -> Vec<Vec<f64>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for a in 1..=left {
            prefix.push(a);
            rec(n, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, steps, &mut Vec::new(), &mut raw);
    raw.into_iter().map(|v| v.into_iter().map(|a| budget * a as f64 / steps as f64).collect()).collect()
}
