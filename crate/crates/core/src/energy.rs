//! Rotary-wing propulsion, hover, computation and transmission energy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::channel::FadingField;
use crate::context::UavContext;
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::scenario::{Scenario, SystemParams};
use crate::slicer::SliceSolution;

/// Propulsion power at forward speed `v`.
pub fn movement_power(v: f64, p: &SystemParams) -> Result<f64> {
    if v < 0.0 || v.is_nan() {
        return Err(Error::NegativeSpeed(v));
    }
    let v2 = v * v;
    let v0sq = p.induced_velocity_mps * p.induced_velocity_mps;
    let blade = p.profile_power_w * (1.0 + 3.0 * v2 / (p.tip_speed_mps * p.tip_speed_mps));
    let induced = p.induced_power_w
        * ((1.0 + v2 * v2 / (4.0 * v0sq * v0sq)).sqrt() - v2 / (2.0 * v0sq)).sqrt();
    let parasite =
        0.5 * p.fuselage_drag_ratio * p.air_density_kgm3 * p.rotor_solidity * p.rotor_disc_area_m2 * v2 * v;
    Ok(blade + induced + parasite)
}

/// Energy spent flying from the dock to the placement at the cruise speed.
pub fn movement_energy(docking: Point3, placement: Point3, p: &SystemParams) -> f64 {
    let v = p.uav_speed_mps;
    let power = movement_power(v, p).expect("validated speed is positive");
    power / v * docking.distance(&placement)
}

/// Hover energy over the longest of the given per-user service times.
pub fn hover_energy(service_times: impl IntoIterator<Item = f64>, p: &SystemParams) -> f64 {
    p.hover_power_w() * service_times.into_iter().fold(0.0, f64::max)
}

/// Upload plus on-board execution time of one offloaded task.
pub fn offload_latency(task_bits: f64, cycles_per_bit: f64, uplink_bps: f64, cpu_hz: f64) -> Option<f64> {
    (cpu_hz > 0.0 && uplink_bps > 0.0).then(|| task_bits / uplink_bps + task_bits * cycles_per_bit / cpu_hz)
}

/// CPU energy of the given per-task speeds.
pub fn compute_energy(speeds_hz: impl IntoIterator<Item = f64>, p: &SystemParams) -> f64 {
    speeds_hz
        .into_iter()
        .map(|f| p.switched_capacitance * p.task_bits * p.cycles_per_bit * f * f)
        .fold(0.0, |acc, e| acc + e)
}

/// Transmitter energy over `(power, demand bits, rate)` per content user.
pub fn transmission_energy(links: impl IntoIterator<Item = (usize, f64, f64, f64)>, uav: usize) -> Result<f64> {
    let mut total = 0.0;
    for (user, power, bits, rate) in links {
        if bits > 0.0 && !(rate > 0.0) {
            return Err(Error::ZeroRate { user, uav });
        }
        if bits > 0.0 {
            total += power * bits / rate;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct UavEnergy {
    pub movement_j: f64,
    pub hover_j: f64,
    pub compute_j: f64,
    pub transmit_j: f64,
}

impl UavEnergy {
    pub fn total(&self) -> f64 {
        self.movement_j + self.hover_j + self.compute_j + self.transmit_j
    }
}

/// Per-UAV energy of the deployed fleet and the system total.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub per_uav: BTreeMap<usize, UavEnergy>,
    pub total_j: f64,
}

impl EnergyBreakdown {
    pub fn from_parts(per_uav: BTreeMap<usize, UavEnergy>) -> Self {
        let total_j = per_uav.values().map(UavEnergy::total).fold(0.0, |acc, e| acc + e);
        Self { per_uav, total_j }
    }
}

/// Price a complete solution from its decisions and stored allocations.
pub fn total_energy(sol: &SliceSolution, scenario: &Scenario, fading: &FadingField) -> Result<EnergyBreakdown> {
    let mut per_uav = BTreeMap::new();
    for &k in &sol.deployed {
        let placement = sol.placements[&k];
        let users: Vec<usize> = sol
            .users_of(k)
            .into_iter()
            .filter(|&i| scenario.sensing_slot(i).is_none_or(|s| sol.activation[s]))
            .collect();
        let ctx = UavContext::build(scenario, fading, k, placement, &users)?;
        let lookup = |m: Option<&BTreeMap<usize, f64>>, i: usize| m.and_then(|m| m.get(&i)).copied().unwrap_or(0.0);
        let powers: Vec<f64> = ctx
            .content
            .iter()
            .map(|c| lookup(sol.power.get(&k).map(|a| &a.per_user_w), c.user))
            .collect();
        let speeds: Vec<f64> = ctx
            .mec
            .iter()
            .map(|m| lookup(sol.compute.get(&k).map(|a| &a.per_user_hz), m.user))
            .collect();
        per_uav.insert(k, ctx.energy(scenario.uavs[k].docking_position, &powers, &speeds)?);
    }
    Ok(EnergyBreakdown::from_parts(per_uav))
}
