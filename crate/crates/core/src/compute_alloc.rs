//! CPU-speed allocation among the MEC users of one UAV.
//!
//! The latency-energy level `lambda` is bisected; each MEC user receives the
//! speed at which its offload latency costs exactly `lambda` hover energy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::UavContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComputeAllocation {
    pub per_user_hz: BTreeMap<usize, f64>,
    pub lambda_star: f64,
    /// False when the bracket held no feasible level and the equal split was
    /// returned instead.
    pub feasible: bool,
    pub iterations: usize,
}

impl ComputeAllocation {
    pub fn total_hz(&self) -> f64 {
        self.per_user_hz.values().fold(0.0, |acc, e| acc + e)
    }
}

/// Speed at which an offloaded task's latency costs `lambda` hover energy.
pub fn speed_closed_form(
    lambda: f64,
    task_bits: f64,
    cycles_per_bit: f64,
    uplink_bps: f64,
    hover_power: f64,
) -> Result<f64> {
    let denom = lambda - hover_power * task_bits / uplink_bps;
    if denom > 0.0 {
        Ok(task_bits * cycles_per_bit * hover_power / denom)
    } else {
        Err(Error::InfeasibleMultiplier)
    }
}

pub fn speeds_at(ctx: &UavContext, lambda: f64) -> Option<Vec<f64>> {
    let p = &ctx.params;
    ctx.mec
        .iter()
        .map(|m| speed_closed_form(lambda, p.task_bits, p.cycles_per_bit, m.rate_bps, ctx.hover_power()).ok())
        .collect()
}

fn within_budget(ctx: &UavContext, speeds: &[f64]) -> bool {
    speeds.iter().sum::<f64>() <= ctx.params.uav_compute_hz * (1.0 + 1e-9)
}

fn to_map(ctx: &UavContext, speeds: &[f64]) -> BTreeMap<usize, f64> {
    ctx.mec.iter().map(|m| m.user).zip(speeds.iter().copied()).collect()
}

/// Minimum feasible latency level and its speeds, given the downlink powers
/// (which fix the download-side floor).
pub fn allocate_compute(ctx: &UavContext, powers: &[f64]) -> ComputeAllocation {
    let e1 = ctx.e1(powers);
    if ctx.mec.is_empty() {
        return ComputeAllocation { per_user_hz: BTreeMap::new(), lambda_star: e1, feasible: true, iterations: 0 };
    }
    let hp = ctx.hover_power();
    let eps = ctx.params.compute_tol();
    let feasible_at = |l: f64| speeds_at(ctx, l).filter(|f| within_budget(ctx, f));

    let upload_floor = ctx
        .mec
        .iter()
        .map(|m| hp * ctx.params.task_bits / m.rate_bps)
        .fold(0.0, f64::max);
    let mut lo = e1.max(upload_floor);
    if let Some(f) = feasible_at(lo) {
        return ComputeAllocation { per_user_hz: to_map(ctx, &f), lambda_star: lo, feasible: true, iterations: 0 };
    }

    let equal = ctx.equal_compute();
    let lambda_equal = hp * ctx.mec_latencies(&equal).into_iter().fold(0.0, f64::max);
    let mut hi = lambda_equal.max(e1);
    let mut best = match feasible_at(hi) {
        Some(f) => f,
        None => {
            return ComputeAllocation {
                per_user_hz: to_map(ctx, &equal),
                lambda_star: hi,
                feasible: false,
                iterations: 0,
            }
        }
    };
    let mut iterations = 0;
    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        match feasible_at(mid) {
            Some(f) => {
                hi = mid;
                best = f;
            }
            None => lo = mid,
        }
    }
    ComputeAllocation { per_user_hz: to_map(ctx, &best), lambda_star: hi, feasible: true, iterations }
}

/// Equal split of the CPU, used by the random comparator.
pub fn equal_split(ctx: &UavContext) -> ComputeAllocation {
    let f = ctx.equal_compute();
    let lambda = ctx.hover_power() * ctx.mec_latencies(&f).into_iter().fold(0.0, f64::max);
    ComputeAllocation { per_user_hz: to_map(ctx, &f), lambda_star: lambda, feasible: true, iterations: 0 }
}
