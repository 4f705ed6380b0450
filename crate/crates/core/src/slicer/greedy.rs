use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::graph::{edge_weight, AssociationGraph, EdgeInputs};
use super::{assemble, place, validate_solution, Allocation, Layout, SliceSolution};
use crate::channel::{projected_gain, ChannelRealization, FadingField};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::scenario::{Role, Scenario};
use crate::seed;
use crate::sensing;

struct CachedChannel {
    channel: ChannelRealization,
    beam: Vec<Complex64>,
}

struct Pass<'a> {
    scenario: &'a Scenario,
    fading: &'a FadingField,
    positions: Vec<Point3>,
    members: Vec<Vec<usize>>,
    cache: Vec<Vec<Option<CachedChannel>>>,
    activation: Vec<bool>,
    info: f64,
    required: f64,
    delta: bool,
    /// Content users each UAV could serve; sets the equal power share.
    servable: Vec<usize>,
    graph: AssociationGraph,
}

impl<'a> Pass<'a> {
    fn new(scenario: &'a Scenario, fading: &'a FadingField, positions: Vec<Point3>) -> Self {
        let u = scenario.n_uavs();
        let n = scenario.n_users();
        let servable = (0..u)
            .map(|k| scenario.content_range().map(|i| scenario.overlap(i, k)).sum())
            .collect();
        let required = scenario.required_info_bits();
        Self {
            scenario,
            fading,
            positions,
            members: vec![Vec::new(); u],
            cache: (0..u).map(|_| (0..n).map(|_| None).collect()).collect(),
            activation: vec![false; scenario.n_sensing()],
            info: 0.0,
            required,
            delta: 0.0 < required,
            servable,
            graph: AssociationGraph::new(scenario),
        }
    }

    fn channel(&mut self, user: usize, uav: usize) -> Result<&CachedChannel> {
        if self.cache[uav][user].is_none() {
            let channel = self.fading.channel(self.scenario, user, uav, self.positions[uav])?;
            let beam = channel.beamformer();
            self.cache[uav][user] = Some(CachedChannel { channel, beam });
        }
        Ok(self.cache[uav][user].as_ref().expect("filled above"))
    }

    /// Rate of `user` joining `uav` alongside the co-channel users already
    /// there, all transmitting at `power`.
    fn joining_rate(&mut self, user: usize, uav: usize, peers: &[usize], power: f64, bandwidth: f64) -> Result<f64> {
        for &j in peers {
            self.channel(j, uav)?;
        }
        let me = &self.channel(user, uav)?.channel;
        let own = power * me.norm_sqr();
        let me = me.gains.clone();
        let interference: f64 = peers
            .iter()
            .map(|&j| {
                let beam = &self.cache[uav][j].as_ref().expect("cached above").beam;
                power * projected_gain(&me, beam)
            })
            .sum();
        let noise = self.scenario.params.noise_power_w;
        Ok(bandwidth * (1.0 + own / (interference + noise)).log2())
    }

    fn weight(&mut self, user: usize, uav: usize) -> Result<f64> {
        let s = self.scenario;
        let p = &s.params;
        let distance_m = self.positions[uav].horizontal().distance(&s.users[user].position);
        let inputs = match s.role(user) {
            Role::Content => {
                let overlap = if s.covers(user, uav) { s.overlap(user, uav) } else { 0 };
                if overlap == 0 {
                    return Ok(0.0);
                }
                let power_w = p.uav_max_tx_power_w / self.servable[uav].max(1) as f64;
                let peers: Vec<usize> =
                    self.members[uav].iter().copied().filter(|&j| s.role(j) == Role::Content).collect();
                let rate_bps = self.joining_rate(user, uav, &peers, power_w, p.dl_bandwidth_hz)?;
                EdgeInputs::Content { distance_m, overlap, overlap_bits: s.overlap_bits(user, uav), rate_bps, power_w }
            }
            Role::Sensing | Role::Mec => {
                if s.role(user) == Role::Sensing && !self.delta {
                    return Ok(0.0);
                }
                let peers: Vec<usize> =
                    self.members[uav].iter().copied().filter(|&j| s.role(j) != Role::Content).collect();
                let rate_bps = self.joining_rate(user, uav, &peers, p.user_tx_power_w, p.ul_bandwidth_hz)?;
                if s.role(user) == Role::Sensing {
                    EdgeInputs::Sensing { distance_m, delta: true, rate_bps }
                } else {
                    let cpu_hz = p.uav_compute_hz / s.n_mec().max(1) as f64;
                    EdgeInputs::Mec { distance_m, rate_bps, cpu_hz }
                }
            }
        };
        edge_weight(user, uav, &inputs, p)
    }

    fn refresh_column(&mut self, uav: usize, done: &[bool]) -> Result<()> {
        for i in 0..self.scenario.n_users() {
            if !done[i] {
                self.graph.weights[i][uav] = self.weight(i, uav)?;
            }
        }
        Ok(())
    }

    fn run(mut self, mut rng: Option<&mut ChaCha8Rng>) -> Result<Layout> {
        let s = self.scenario;
        let n = s.n_users();
        let u = s.n_uavs();
        let mut done = vec![false; n];
        for k in 0..u {
            self.refresh_column(k, &done)?;
        }
        while let Some((i, k)) = self.graph.argmax(rng.as_deref_mut()) {
            let pos = self.members[k].partition_point(|&j| j < i);
            self.members[k].insert(pos, i);
            done[i] = true;
            self.graph.zero_row(i);
            if let Some(slot) = s.sensing_slot(i) {
                self.activation[slot] = true;
                self.info = sensing::gathered_information(
                    &self.activation,
                    &s.sensing_positions(),
                    s.params.raw_data_bits,
                    s.params.correlation_extent_m,
                );
                self.delta = self.info < self.required;
                if !self.delta {
                    for j in s.sensing_range() {
                        self.graph.zero_row(j);
                    }
                }
            }
            self.positions[k] = place(s, k, &self.members[k])?;
            self.cache[k].iter_mut().for_each(|c| *c = None);
            self.refresh_column(k, &done)?;
        }

        if let Some(i) = s.content_range().chain(s.mec_range()).find(|&i| !done[i]) {
            return Err(Error::Infeasible(format!("user {i} was left unassociated")));
        }
        if self.delta {
            return Err(Error::Infeasible(format!(
                "gathered information {} below requirement {}",
                self.info, self.required
            )));
        }

        let deployed: Vec<usize> = (0..u).filter(|&k| !self.members[k].is_empty()).collect();
        let mut association = vec![vec![false; u]; n];
        for (k, users) in self.members.iter().enumerate() {
            for &i in users {
                association[i][k] = true;
            }
        }
        Ok(Layout {
            placements: deployed.iter().map(|&k| (k, self.positions[k])).collect(),
            deployed,
            association,
            activation: self.activation,
        })
    }
}

/// One greedy association pass. Restart 0 starts every UAV above its dock
/// and breaks ties by lowest index; later restarts start from uniformly
/// random positions and break ties at random.
pub fn greedy_pass(scenario: &Scenario, fading: &FadingField, restart: usize) -> Result<Layout> {
    if let Some(i) = scenario.content_range().find(|&i| !(0..scenario.n_uavs()).any(|k| scenario.covers(i, k))) {
        return Err(Error::Unservable(i));
    }
    let p = &scenario.params;
    let z = p.altitude_min_m;
    if restart == 0 {
        let positions = scenario
            .uavs
            .iter()
            .map(|uav| uav.docking_position.horizontal().at_altitude(z))
            .collect();
        Pass::new(scenario, fading, positions).run(None)
    } else {
        let mut rng = seed::rng(scenario.seed, &[seed::STREAM_RESTART, restart as u64]);
        let side = p.area_side_m;
        let positions = (0..scenario.n_uavs())
            .map(|_| Point3::new(rng.random::<f64>() * side, rng.random::<f64>() * side, z))
            .collect();
        Pass::new(scenario, fading, positions).run(Some(&mut rng))
    }
}

/// Best valid solution over `restarts` greedy passes.
pub fn solve_with_restarts(scenario: &Scenario, fading: &FadingField, restarts: usize) -> Result<SliceSolution> {
    let mut best: Option<SliceSolution> = None;
    let mut first_failure: Option<String> = None;
    for q in 0..restarts {
        let attempt = greedy_pass(scenario, fading, q)
            .and_then(|layout| assemble(scenario, fading, &layout, Allocation::Optimized));
        match attempt {
            Ok(sol) => {
                let report = validate_solution(&sol, scenario, fading);
                if !report.is_feasible() {
                    first_failure.get_or_insert_with(|| report.to_string());
                } else if best.as_ref().is_none_or(|b| sol.objective_j < b.objective_j) {
                    best = Some(sol);
                }
            }
            Err(e @ Error::Unservable(_)) => return Err(e),
            Err(e) => {
                first_failure.get_or_insert_with(|| e.to_string());
            }
        }
    }
    best.ok_or_else(|| Error::Infeasible(first_failure.unwrap_or_else(|| "no restarts were run".into())))
}

/// Greedy heuristic with the configured number of restarts.
pub fn solve(scenario: &Scenario, fading: &FadingField) -> Result<SliceSolution> {
    solve_with_restarts(scenario, fading, scenario.params.restarts)
}
