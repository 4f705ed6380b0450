use std::ops::Range;

use rand::Rng;

use crate::energy::movement_power;
use crate::error::{Error, Result};
use crate::scenario::{Scenario, SystemParams};

/// Per-edge quantities entering the weight of one user-UAV pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeInputs {
    Content {
        distance_m: f64,
        /// Number of requested contents the UAV stores.
        overlap: usize,
        /// Bits of those contents.
        overlap_bits: f64,
        rate_bps: f64,
        power_w: f64,
    },
    Sensing {
        distance_m: f64,
        /// More information is still required.
        delta: bool,
        rate_bps: f64,
    },
    Mec {
        distance_m: f64,
        rate_bps: f64,
        cpu_hz: f64,
    },
}

/// Reciprocal of the marginal energy of serving `user` from `uav`; larger
/// weight means cheaper association.
pub fn edge_weight(user: usize, uav: usize, inputs: &EdgeInputs, params: &SystemParams) -> Result<f64> {
    let per_metre = movement_power(params.uav_speed_mps, params)? / params.uav_speed_mps;
    let hover = params.hover_power_w();
    let (numerator, denominator) = match *inputs {
        EdgeInputs::Content { distance_m, overlap, overlap_bits, rate_bps, power_w } => {
            if overlap == 0 {
                return Ok(0.0);
            }
            (overlap as f64, per_metre * distance_m + (hover + power_w) * overlap_bits / rate_bps)
        }
        EdgeInputs::Sensing { distance_m, delta, rate_bps } => {
            if !delta {
                return Ok(0.0);
            }
            (1.0, per_metre * distance_m + hover * params.raw_data_bits / rate_bps)
        }
        EdgeInputs::Mec { distance_m, rate_bps, cpu_hz } => {
            let latency = params.task_bits / rate_bps + params.task_bits * params.cycles_per_bit / cpu_hz;
            (1.0, per_metre * distance_m + hover * latency)
        }
    };
    if denominator == 0.0 {
        return Err(Error::ZeroDenominator { user, uav });
    }
    // an unreachable pair (zero rate) has infinite cost
    Ok(if denominator.is_finite() { numerator / denominator } else { 0.0 })
}

/// Weighted user-UAV graph; rows are users, columns UAVs.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationGraph {
    pub weights: Vec<Vec<f64>>,
    pub content: Range<usize>,
    pub sensing: Range<usize>,
    pub mec: Range<usize>,
}

impl AssociationGraph {
    pub fn new(scenario: &Scenario) -> Self {
        Self {
            weights: vec![vec![0.0; scenario.n_uavs()]; scenario.n_users()],
            content: scenario.content_range(),
            sensing: scenario.sensing_range(),
            mec: scenario.mec_range(),
        }
    }

    pub fn zero_row(&mut self, user: usize) {
        self.weights[user].iter_mut().for_each(|w| *w = 0.0);
    }

    /// Heaviest positive edge. Ties go to the lowest (user, UAV) pair, or to
    /// a uniformly drawn one when `rng` is given.
    pub fn argmax<R: Rng + ?Sized>(&self, rng: Option<&mut R>) -> Option<(usize, usize)> {
        let mut best = 0.0;
        let mut ties: Vec<(usize, usize)> = Vec::new();
        for (i, row) in self.weights.iter().enumerate() {
            for (k, &w) in row.iter().enumerate() {
                if w > best {
                    best = w;
                    ties.clear();
                    ties.push((i, k));
                } else if w == best && w > 0.0 {
                    ties.push((i, k));
                }
            }
        }
        match (ties.len(), rng) {
            (0, _) => None,
            (1, _) | (_, None) => Some(ties[0]),
            (n, Some(r)) => Some(ties[r.random_range(0..n)]),
        }
    }
}
