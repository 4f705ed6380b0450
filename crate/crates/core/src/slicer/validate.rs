use std::fmt;

use serde::{Deserialize, Serialize};

use super::SliceSolution;
use crate::channel::FadingField;
use crate::energy;
use crate::scenario::Scenario;
use crate::sensing;

const BUDGET_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Every content user is served by UAVs storing its demand.
    ContentCoverage,
    /// Active sensing users have exactly one UAV, inactive ones none.
    SensingAssociation,
    /// Gathered information meets the requirement.
    InformationRequirement,
    PowerBudget,
    /// Every MEC user has exactly one UAV.
    MecAssociation,
    ComputeBudget,
    AltitudeLimits,
    /// Shapes, binary decisions, deployed set and stored objective.
    Structure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub description: String,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, constraint: Constraint, magnitude: f64, description: String) {
        self.violations.push(Violation { constraint, description, magnitude });
    }

    pub fn count(&self, constraint: Constraint) -> usize {
        self.violations.iter().filter(|v| v.constraint == constraint).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "feasible");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{:?}: {} (magnitude {:.6e})", v.constraint, v.description, v.magnitude)?;
        }
        Ok(())
    }
}

/// Check every constraint of the slicing problem and re-price the solution.
pub fn validate_solution(sol: &SliceSolution, scenario: &Scenario, fading: &FadingField) -> ValidationReport {
    let mut r = ValidationReport::default();
    let n = scenario.n_users();
    let u = scenario.n_uavs();
    let p = &scenario.params;

    if sol.association.len() != n || sol.association.iter().any(|row| row.len() != u) {
        r.push(Constraint::Structure, 1.0, format!("association must be {n} x {u}"));
        return r;
    }
    if sol.activation.len() != scenario.n_sensing() {
        r.push(Constraint::Structure, 1.0, format!("activation must have {} entries", scenario.n_sensing()));
        return r;
    }
    let mut deployed = vec![false; u];
    for &k in &sol.deployed {
        if k >= u || deployed[k] {
            r.push(Constraint::Structure, 1.0, format!("deployed set lists UAV {k} invalidly"));
            return r;
        }
        deployed[k] = true;
        if !sol.placements.contains_key(&k) {
            r.push(Constraint::Structure, 1.0, format!("deployed UAV {k} has no placement"));
        }
    }
    for (i, row) in sol.association.iter().enumerate() {
        for k in (0..u).filter(|&k| row[k] && !deployed[k]) {
            r.push(Constraint::Structure, 1.0, format!("user {i} is served by undeployed UAV {k}"));
        }
    }
    if !r.is_feasible() {
        return r;
    }
    let serving = |i: usize| (0..u).filter(move |&k| sol.association[i][k]);

    for i in scenario.content_range() {
        let uavs: Vec<usize> = serving(i).collect();
        if uavs.is_empty() {
            r.push(Constraint::ContentCoverage, 1.0, format!("content user {i} is not served"));
            continue;
        }
        for (j, _) in scenario.demand.rows[i].iter().enumerate().filter(|(_, d)| **d) {
            if !uavs.iter().any(|&k| scenario.storage.stored(j, k)) {
                r.push(Constraint::ContentCoverage, 1.0, format!("content {j} of user {i} is not stored on its UAVs"));
            }
        }
        for &k in &uavs {
            let w = sol.power.get(&k).and_then(|a| a.per_user_w.get(&i)).copied().unwrap_or(0.0);
            if !(w > 0.0) {
                r.push(Constraint::ContentCoverage, 1.0, format!("content user {i} receives no power from UAV {k}"));
            }
        }
    }

    for i in scenario.sensing_range() {
        let active = sol.activation[scenario.sensing_slot(i).expect("sensing range")];
        let count = serving(i).count();
        let expected = usize::from(active);
        if count != expected {
            r.push(
                Constraint::SensingAssociation,
                count.abs_diff(expected) as f64,
                format!("sensing user {i} (active: {active}) is served by {count} UAVs"),
            );
        }
    }

    let info = sensing::gathered_information(
        &sol.activation,
        &scenario.sensing_positions(),
        p.raw_data_bits,
        p.correlation_extent_m,
    );
    let required = scenario.required_info_bits();
    if info < required * (1.0 - 1e-12) {
        r.push(
            Constraint::InformationRequirement,
            required - info,
            format!("gathered information {info} is below the requirement {required}"),
        );
    }

    for i in scenario.mec_range() {
        let count = serving(i).count();
        if count != 1 {
            r.push(
                Constraint::MecAssociation,
                count.abs_diff(1) as f64,
                format!("MEC user {i} is served by {count} UAVs"),
            );
            continue;
        }
        let k = serving(i).next().expect("one UAV");
        let f = sol.compute.get(&k).and_then(|a| a.per_user_hz.get(&i)).copied().unwrap_or(0.0);
        if !(f > 0.0) {
            r.push(Constraint::ComputeBudget, 1.0, format!("MEC user {i} has no CPU at UAV {k}"));
        }
    }

    for &k in &sol.deployed {
        if let Some(a) = sol.power.get(&k) {
            if a.per_user_w.values().any(|w| *w < 0.0 || !w.is_finite()) {
                r.push(Constraint::PowerBudget, 1.0, format!("UAV {k} has a negative or non-finite power"));
            }
            let total = a.total_w();
            if total > p.uav_max_tx_power_w * (1.0 + BUDGET_SLACK) {
                r.push(
                    Constraint::PowerBudget,
                    total - p.uav_max_tx_power_w,
                    format!("UAV {k} transmits {total} W over its {} W budget", p.uav_max_tx_power_w),
                );
            }
        }
        if let Some(a) = sol.compute.get(&k) {
            if a.per_user_hz.values().any(|f| *f < 0.0 || !f.is_finite()) {
                r.push(Constraint::ComputeBudget, 1.0, format!("UAV {k} has a negative or non-finite CPU speed"));
            }
            let total = a.total_hz();
            if total > p.uav_compute_hz * (1.0 + BUDGET_SLACK) {
                r.push(
                    Constraint::ComputeBudget,
                    total - p.uav_compute_hz,
                    format!("UAV {k} runs {total} Hz over its {} Hz budget", p.uav_compute_hz),
                );
            }
        }
        let z = sol.placements[&k].z;
        let tol = 1e-9 * p.altitude_max_m;
        if z < p.altitude_min_m - tol || z > p.altitude_max_m + tol {
            let excess = (p.altitude_min_m - z).max(z - p.altitude_max_m);
            r.push(Constraint::AltitudeLimits, excess, format!("UAV {k} hovers at {z} m"));
        }
    }

    if r.is_feasible() {
        match energy::total_energy(sol, scenario, fading) {
            Ok(e) => {
                let gap = (e.total_j - sol.objective_j).abs();
                if !(gap <= 1e-6 * e.total_j.abs().max(1.0)) {
                    r.push(
                        Constraint::Structure,
                        gap,
                        format!("stored objective {} differs from recomputed {}", sol.objective_j, e.total_j),
                    );
                }
            }
            Err(e) => r.push(Constraint::Structure, 1.0, format!("energy cannot be evaluated: {e}")),
        }
    }
    r
}
