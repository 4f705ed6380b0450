use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::channel::FadingField;
use crate::error::{Error, Result};
use crate::scenario::{Role, Scenario};
use crate::sensing;
use crate::slicer::{assemble, place, Allocation, Layout, SliceSolution};

/// Largest instance the exhaustive search accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveLimits {
    pub max_users: usize,
    pub max_uavs: usize,
    pub max_sensing: usize,
}

impl Default for ExhaustiveLimits {
    fn default() -> Self {
        Self { max_users: 7, max_uavs: 3, max_sensing: 3 }
    }
}

impl ExhaustiveLimits {
    pub fn admits(&self, scenario: &Scenario) -> Result<()> {
        let (n, u, s) = (scenario.n_users(), scenario.n_uavs(), scenario.n_sensing());
        if n > self.max_users || u > self.max_uavs || s > self.max_sensing {
            return Err(Error::LimitsExceeded(format!(
                "instance has N={n}, U={u}, Ns={s}; limits are N={}, U={}, Ns={}",
                self.max_users, self.max_uavs, self.max_sensing
            )));
        }
        Ok(())
    }
}

/// Minimum-energy solution over every sensing activation meeting the
/// information requirement and every association, with UAVs placed by the
/// shared centroid rule.
pub fn exhaustive_search(scenario: &Scenario, fading: &FadingField, limits: &ExhaustiveLimits) -> Result<SliceSolution> {
    limits.admits(scenario)?;
    let n = scenario.n_users();
    let u = scenario.n_uavs();
    let ns = scenario.n_sensing();
    let p = &scenario.params;
    let positions = scenario.sensing_positions();
    let required = scenario.required_info_bits();

    let mut best: Option<SliceSolution> = None;
    let mut last_error = None;
    for mask in 0u32..(1 << ns) {
        let activation: Vec<bool> = (0..ns).map(|s| mask & (1 << s) != 0).collect();
        let info = sensing::gathered_information(&activation, &positions, p.raw_data_bits, p.correlation_extent_m);
        if info < required {
            continue;
        }
        let options: Vec<Vec<usize>> = (0..n)
            .map(|i| match scenario.role(i) {
                Role::Content => (0..u).filter(|&k| scenario.covers(i, k)).collect(),
                Role::Sensing if !activation[scenario.sensing_slot(i).expect("sensing")] => vec![usize::MAX],
                _ => (0..u).collect(),
            })
            .collect();
        if let Some(i) = options.iter().position(Vec::is_empty) {
            return Err(Error::Unservable(i));
        }
        let mut digits = vec![0usize; n];
        loop {
            let mut association = vec![vec![false; u]; n];
            for i in 0..n {
                let k = options[i][digits[i]];
                if k != usize::MAX {
                    association[i][k] = true;
                }
            }
            match evaluate(scenario, fading, association, activation.clone()) {
                Ok(sol) => {
                    if best.as_ref().is_none_or(|b| sol.objective_j < b.objective_j) {
                        best = Some(sol);
                    }
                }
                Err(e) => last_error = Some(e),
            }
            // mixed-radix increment
            let mut i = 0;
            while i < n {
                digits[i] += 1;
                if digits[i] < options[i].len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    best.ok_or_else(|| {
        Error::Infeasible(match last_error {
            Some(e) => format!("no candidate could be evaluated: {e}"),
            None => "no sensing activation meets the information requirement".into(),
        })
    })
}

fn evaluate(
    scenario: &Scenario,
    fading: &FadingField,
    association: Vec<Vec<bool>>,
    activation: Vec<bool>,
) -> Result<SliceSolution> {
    let u = scenario.n_uavs();
    let mut placements = BTreeMap::new();
    let mut deployed = Vec::new();
    for k in 0..u {
        let users: Vec<usize> = (0..association.len()).filter(|&i| association[i][k]).collect();
        if !users.is_empty() {
            placements.insert(k, place(scenario, k, &users)?);
            deployed.push(k);
        }
    }
    let layout = Layout { deployed, placements, association, activation };
    assemble(scenario, fading, &layout, Allocation::Optimized)
}
