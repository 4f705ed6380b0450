//! Downlink power allocation among the content users of one UAV.
//!
//! The common download-energy level `rho` (hover power times the slowest
//! download time) is bisected. For a given `rho` each content user needs
//! SINR `2^(P_hov D / (rho B)) - 1`; the powers meeting all targets at once
//! solve a linear system because the interference is linear in the powers.
//! A level is feasible when that system has a positive solution within the
//! power budget.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::context::UavContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAllocation {
    pub per_user_w: BTreeMap<usize, f64>,
    /// Energy level of the returned allocation, joules.
    pub rho_star: f64,
    /// False when no level in the bracket was feasible and the equal split
    /// was returned instead.
    pub feasible: bool,
    pub iterations: usize,
}

impl PowerAllocation {
    pub fn total_w(&self) -> f64 {
        self.per_user_w.values().fold(0.0, |acc, e| acc + e)
    }
}

/// Power a content user needs so that its download energy equals `rho`,
/// given interference-plus-noise `omega` and own gain `gain`.
pub fn power_closed_form(
    rho: f64,
    omega: f64,
    gain: f64,
    demand_bits: f64,
    hover_power: f64,
    bandwidth: f64,
) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InfeasibleMultiplier);
    }
    let target = (hover_power * demand_bits / (rho * bandwidth)).exp2() - 1.0;
    let p = omega / gain * target;
    if p.is_finite() {
        Ok(p)
    } else {
        Err(Error::InfeasibleMultiplier)
    }
}

/// Powers meeting every user's target at level `rho` simultaneously.
pub fn powers_at(ctx: &UavContext, rho: f64) -> Option<Vec<f64>> {
    let n = ctx.content.len();
    if !(rho > 0.0) {
        return None;
    }
    let hp = ctx.hover_power();
    let bw = ctx.params.dl_bandwidth_hz;
    let noise = ctx.params.noise_power_w;
    let scale: Vec<f64> = ctx
        .content
        .iter()
        .map(|c| ((hp * c.demand_bits / (rho * bw)).exp2() - 1.0) / c.gain)
        .collect();
    if scale.iter().any(|s| !s.is_finite()) {
        return None;
    }
    if n == 1 {
        return Some(vec![scale[0] * noise]);
    }
    // (I - diag(scale) C) p = diag(scale) noise
    let a = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            -scale[i] * ctx.cross[i][j]
        }
    });
    let b = DVector::from_iterator(n, scale.iter().map(|s| s * noise));
    let p = a.lu().solve(&b)?;
    p.iter().all(|v| v.is_finite() && *v > 0.0).then(|| p.iter().copied().collect())
}

fn within_budget(ctx: &UavContext, powers: &[f64]) -> bool {
    // slack absorbs rounding when the level equals the equal-split level
    powers.iter().sum::<f64>() <= ctx.params.uav_max_tx_power_w * (1.0 + 1e-9)
}

fn to_map(ctx: &UavContext, powers: &[f64]) -> BTreeMap<usize, f64> {
    ctx.content.iter().map(|c| c.user).zip(powers.iter().copied()).collect()
}

/// Minimum feasible download-energy level and its powers, given the CPU
/// speeds of the UAV's MEC users (which fix the uplink-side floor).
pub fn allocate_power(ctx: &UavContext, speeds: &[f64]) -> PowerAllocation {
    let e2 = ctx.e2(speeds);
    if ctx.content.is_empty() {
        return PowerAllocation { per_user_w: BTreeMap::new(), rho_star: e2, feasible: true, iterations: 0 };
    }
    let eps = ctx.params.bisect_tol;
    let feasible_at = |rho: f64| powers_at(ctx, rho).filter(|p| within_budget(ctx, p));

    if let Some(p) = feasible_at(e2) {
        return PowerAllocation { per_user_w: to_map(ctx, &p), rho_star: e2, feasible: true, iterations: 0 };
    }

    let equal = ctx.equal_power();
    let rho_equal = ctx.hover_power()
        * ctx.download_times(&equal).into_iter().fold(0.0, f64::max);
    let mut hi = rho_equal.max(e2);
    let mut best = match feasible_at(hi) {
        Some(p) => p,
        None => {
            return PowerAllocation {
                per_user_w: to_map(ctx, &equal),
                rho_star: hi,
                feasible: false,
                iterations: 0,
            }
        }
    };
    let mut lo = e2;
    let mut iterations = 0;
    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        match feasible_at(mid) {
            Some(p) => {
                hi = mid;
                best = p;
            }
            None => lo = mid,
        }
    }
    PowerAllocation { per_user_w: to_map(ctx, &best), rho_star: hi, feasible: true, iterations }
}

/// Equal split of the power budget, used by the random comparator.
pub fn equal_split(ctx: &UavContext) -> PowerAllocation {
    let p = ctx.equal_power();
    let rho = ctx.hover_power() * ctx.download_times(&p).into_iter().fold(0.0, f64::max);
    PowerAllocation { per_user_w: to_map(ctx, &p), rho_star: rho, feasible: true, iterations: 0 }
}
