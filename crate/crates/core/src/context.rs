//! Per-UAV view of a layout: served users, their channels and rates.

use crate::channel::{projected_gain, ChannelRealization, FadingField};
use crate::energy::{self, UavEnergy};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::scenario::{Role, Scenario, SystemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct ContentLink {
    pub user: usize,
    pub demand_bits: f64,
    /// `‖h‖²`, the MRT-aligned own gain.
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UplinkLink {
    pub user: usize,
    pub rate_bps: f64,
}

/// Everything the allocators need about one deployed UAV.
#[derive(Debug, Clone)]
pub struct UavContext {
    pub uav: usize,
    pub placement: Point3,
    pub params: SystemParams,
    pub content: Vec<ContentLink>,
    /// `cross[i][j] = |h_i^H w_j|²` between content links `i != j`.
    pub cross: Vec<Vec<f64>>,
    /// Active sensing users.
    pub sensing: Vec<UplinkLink>,
    pub mec: Vec<UplinkLink>,
}

/// `cross[i][j] = |h_i^H w_j|²` with MRT/MRC vectors `w_j`; zero diagonal.
pub fn cross_gains(channels: &[&ChannelRealization]) -> Vec<Vec<f64>> {
    let beams: Vec<_> = channels.iter().map(|h| h.beamformer()).collect();
    channels
        .iter()
        .enumerate()
        .map(|(i, h)| {
            beams
                .iter()
                .enumerate()
                .map(|(j, w)| if i == j { 0.0 } else { projected_gain(&h.gains, w) })
                .collect()
        })
        .collect()
}

/// Rates `B log2(1 + SINR)` of co-channel users with given powers.
pub fn rates(gains: &[f64], cross: &[Vec<f64>], powers: &[f64], noise: f64, bandwidth: f64) -> Vec<f64> {
    (0..gains.len())
        .map(|i| {
            let interference: f64 = cross[i].iter().zip(powers).map(|(c, p)| c * p).sum();
            bandwidth * (1.0 + powers[i] * gains[i] / (interference + noise)).log2()
        })
        .collect()
}

impl UavContext {
    /// Context of UAV `uav` at `placement` serving `users`. Sensing users in
    /// `users` are taken as active.
    pub fn build(
        scenario: &Scenario,
        fading: &FadingField,
        uav: usize,
        placement: Point3,
        users: &[usize],
    ) -> Result<Self> {
        let params = scenario.params.clone();
        let mut content_ch = Vec::new();
        let mut content = Vec::new();
        let mut up_ch = Vec::new();
        let mut up_users = Vec::new();
        for &i in users {
            let h = fading.channel(scenario, i, uav, placement)?;
            match scenario.role(i) {
                Role::Content => {
                    content.push(ContentLink { user: i, demand_bits: scenario.demand_bits(i), gain: h.norm_sqr() });
                    content_ch.push(h);
                }
                Role::Sensing | Role::Mec => {
                    up_users.push(i);
                    up_ch.push(h);
                }
            }
        }
        let cross = cross_gains(&content_ch.iter().collect::<Vec<_>>());

        let up_gains: Vec<f64> = up_ch.iter().map(ChannelRealization::norm_sqr).collect();
        let up_cross = cross_gains(&up_ch.iter().collect::<Vec<_>>());
        let up_power = vec![params.user_tx_power_w; up_users.len()];
        let up_rates = rates(&up_gains, &up_cross, &up_power, params.noise_power_w, params.ul_bandwidth_hz);

        let mut sensing = Vec::new();
        let mut mec = Vec::new();
        for (&user, rate_bps) in up_users.iter().zip(up_rates) {
            let link = UplinkLink { user, rate_bps };
            if scenario.role(user) == Role::Sensing {
                sensing.push(link);
            } else {
                mec.push(link);
            }
        }
        Ok(Self { uav, placement, params, content, cross, sensing, mec })
    }

    pub fn hover_power(&self) -> f64 {
        self.params.hover_power_w()
    }

    pub fn users(&self) -> impl Iterator<Item = usize> + '_ {
        self.content
            .iter()
            .map(|c| c.user)
            .chain(self.sensing.iter().map(|s| s.user))
            .chain(self.mec.iter().map(|m| m.user))
    }

    pub fn equal_power(&self) -> Vec<f64> {
        let n = self.content.len();
        vec![self.params.uav_max_tx_power_w / n.max(1) as f64; n]
    }

    pub fn equal_compute(&self) -> Vec<f64> {
        let n = self.mec.len();
        vec![self.params.uav_compute_hz / n.max(1) as f64; n]
    }

    pub fn content_gains(&self) -> Vec<f64> {
        self.content.iter().map(|c| c.gain).collect()
    }

    pub fn downlink_rates(&self, powers: &[f64]) -> Vec<f64> {
        rates(
            &self.content_gains(),
            &self.cross,
            powers,
            self.params.noise_power_w,
            self.params.dl_bandwidth_hz,
        )
    }

    pub fn download_times(&self, powers: &[f64]) -> Vec<f64> {
        self.content
            .iter()
            .zip(self.downlink_rates(powers))
            .map(|(c, r)| if r > 0.0 { c.demand_bits / r } else { f64::INFINITY })
            .collect()
    }

    pub fn sensing_times(&self) -> Vec<f64> {
        self.sensing.iter().map(|s| self.params.raw_data_bits / s.rate_bps).collect()
    }

    pub fn mec_latencies(&self, speeds: &[f64]) -> Vec<f64> {
        self.mec
            .iter()
            .zip(speeds)
            .map(|(m, &f)| {
                energy::offload_latency(self.params.task_bits, self.params.cycles_per_bit, m.rate_bps, f)
                    .unwrap_or(f64::INFINITY)
            })
            .collect()
    }

    fn scaled_max(&self, times: impl IntoIterator<Item = f64>) -> f64 {
        self.hover_power() * times.into_iter().fold(0.0, f64::max)
    }

    /// Hover-energy floor set by downloads and sensing uploads.
    pub fn e1(&self, powers: &[f64]) -> f64 {
        self.scaled_max(self.download_times(powers).into_iter().chain(self.sensing_times()))
    }

    /// Hover-energy floor set by sensing uploads and offloaded tasks.
    pub fn e2(&self, speeds: &[f64]) -> f64 {
        self.scaled_max(self.sensing_times().into_iter().chain(self.mec_latencies(speeds)))
    }

    /// Four-way energy of this UAV under the given allocations.
    pub fn energy(&self, dock: Point3, powers: &[f64], speeds: &[f64]) -> Result<UavEnergy> {
        for (m, &f) in self.mec.iter().zip(speeds) {
            if !(f > 0.0) {
                return Err(Error::ZeroCompute { user: m.user, uav: self.uav });
            }
        }
        let rates = self.downlink_rates(powers);
        let downloads = self.content.iter().zip(&rates).map(|(c, r)| c.demand_bits / r);
        let times: Vec<f64> = downloads
            .chain(self.sensing_times())
            .chain(self.mec_latencies(speeds))
            .collect();
        let transmit_j = energy::transmission_energy(
            self.content
                .iter()
                .zip(powers)
                .zip(&rates)
                .map(|((c, &p), &r)| (c.user, p, c.demand_bits, r)),
            self.uav,
        )?;
        Ok(UavEnergy {
            movement_j: energy::movement_energy(dock, self.placement, &self.params),
            hover_j: energy::hover_energy(times, &self.params),
            compute_j: energy::compute_energy(speeds.iter().copied(), &self.params),
            transmit_j,
        })
    }
}
