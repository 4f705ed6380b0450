//! Slicing decisions: the solution type, the shared placement rule, and
//! the greedy association-graph heuristic.

mod graph;
mod greedy;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use graph::{edge_weight, AssociationGraph, EdgeInputs};
pub use greedy::{greedy_pass, solve, solve_with_restarts};
pub use validate::{validate_solution, Constraint, ValidationReport, Violation};

use crate::channel::FadingField;
use crate::compute_alloc::{self, ComputeAllocation};
use crate::context::UavContext;
use crate::energy::EnergyBreakdown;
use crate::error::{Error, Result};
use crate::geometry::{centroid, Point2, Point3};
use crate::power_alloc::{self, PowerAllocation};
use crate::scenario::{Scenario, SystemParams};

/// Association, activation and placement, before resources are allocated.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub deployed: Vec<usize>,
    pub placements: BTreeMap<usize, Point3>,
    /// `association[i][k]`: user `i` is served by UAV `k`.
    pub association: Vec<Vec<bool>>,
    /// One flag per sensing user.
    pub activation: Vec<bool>,
}

impl Layout {
    pub fn users_of(&self, uav: usize) -> Vec<usize> {
        (0..self.association.len()).filter(|&i| self.association[i][uav]).collect()
    }
}

/// Full decision with its allocations and energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSolution {
    pub deployed: Vec<usize>,
    pub placements: BTreeMap<usize, Point3>,
    pub association: Vec<Vec<bool>>,
    pub activation: Vec<bool>,
    pub power: BTreeMap<usize, PowerAllocation>,
    pub compute: BTreeMap<usize, ComputeAllocation>,
    pub energy: EnergyBreakdown,
    pub objective_j: f64,
}

impl SliceSolution {
    pub fn users_of(&self, uav: usize) -> Vec<usize> {
        (0..self.association.len()).filter(|&i| self.association[i][uav]).collect()
    }

    pub fn active_sensing(&self) -> usize {
        self.activation.iter().filter(|&&a| a).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Hover altitude covering the farthest served user at the target
/// elevation angle, clamped to the altitude window.
pub fn optimal_altitude(uav: usize, horizontal: Point2, users: &[Point2], params: &SystemParams) -> Result<f64> {
    let reach = users
        .iter()
        .map(|u| horizontal.distance(u))
        .reduce(f64::max)
        .ok_or(Error::NoAssociatedUsers(uav))?;
    let z = reach * params.elevation_angle_deg.to_radians().tan();
    Ok(z.clamp(params.altitude_min_m, params.altitude_max_m))
}

/// Placement rule shared by every solver: centroid of the served users
/// (ascending index) at the covering altitude.
pub fn place(scenario: &Scenario, uav: usize, users: &[usize]) -> Result<Point3> {
    let pts: Vec<Point2> = users.iter().map(|&i| scenario.users[i].position).collect();
    let c = centroid(&pts).ok_or(Error::NoAssociatedUsers(uav))?;
    let z = optimal_altitude(uav, c, &pts, &scenario.params)?;
    Ok(c.at_altitude(z))
}

/// How per-UAV resources are split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocation {
    /// Power bisection with equal-split CPU, then CPU bisection with the
    /// resulting powers.
    Optimized,
    EqualSplit,
}

/// Allocate resources for every deployed UAV of `layout` and price it.
pub fn assemble(scenario: &Scenario, fading: &FadingField, layout: &Layout, mode: Allocation) -> Result<SliceSolution> {
    let mut power = BTreeMap::new();
    let mut compute = BTreeMap::new();
    let mut per_uav = BTreeMap::new();
    for &k in &layout.deployed {
        let placement = *layout
            .placements
            .get(&k)
            .ok_or_else(|| Error::Infeasible(format!("deployed UAV {k} has no placement")))?;
        let users: Vec<usize> = layout
            .users_of(k)
            .into_iter()
            .filter(|&i| scenario.sensing_slot(i).is_none_or(|s| layout.activation[s]))
            .collect();
        let ctx = UavContext::build(scenario, fading, k, placement, &users)?;
        let (p, f) = match mode {
            Allocation::Optimized => {
                let p = power_alloc::allocate_power(&ctx, &ctx.equal_compute());
                let powers: Vec<f64> = p.per_user_w.values().copied().collect();
                (p, compute_alloc::allocate_compute(&ctx, &powers))
            }
            Allocation::EqualSplit => (power_alloc::equal_split(&ctx), compute_alloc::equal_split(&ctx)),
        };
        let powers: Vec<f64> = ctx.content.iter().map(|c| p.per_user_w[&c.user]).collect();
        let speeds: Vec<f64> = ctx.mec.iter().map(|m| f.per_user_hz[&m.user]).collect();
        let e = ctx.energy(scenario.uavs[k].docking_position, &powers, &speeds)?;
        per_uav.insert(k, e);
        power.insert(k, p);
        compute.insert(k, f);
    }
    let energy = EnergyBreakdown::from_parts(per_uav);
    Ok(SliceSolution {
        deployed: layout.deployed.clone(),
        placements: layout.placements.clone(),
        association: layout.association.clone(),
        activation: layout.activation.clone(),
        power,
        compute,
        objective_j: energy.total_j,
        energy,
    })
}
