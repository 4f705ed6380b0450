//! Rician channels, MRT/MRC beamforming, SINR and achievable rates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};
use crate::scenario::{Scenario, SystemParams};
use crate::seed;

/// Rician factors at or above this are treated as pure line of sight.
pub const PURE_LOS_FACTOR: f64 = 1e9;

/// Complex gain vector between one user and one UAV placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRealization {
    pub gains: Vec<Complex64>,
    pub distance_m: f64,
}

impl ChannelRealization {
    pub fn norm_sqr(&self) -> f64 {
        self.gains.iter().map(|g| g.norm_sqr()).sum()
    }

    /// Unit-norm MRT/MRC vector aligned with the channel.
    pub fn beamformer(&self) -> Vec<Complex64> {
        let n = self.norm_sqr().sqrt();
        self.gains.iter().map(|g| g / n).collect()
    }
}

/// `|h^H w|^2`.
pub fn projected_gain(h: &[Complex64], w: &[Complex64]) -> f64 {
    h.iter().zip(w).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
}

/// Uniform linear array response toward the user.
pub fn los_steering(user: Point3, uav: Point3, antennas: usize) -> Result<Vec<Complex64>> {
    let d = user.distance(&uav);
    if d == 0.0 {
        return Err(Error::CoincidentPositions);
    }
    let cos_phi = (uav.x - user.x) / d;
    Ok((0..antennas)
        .map(|a| Complex64::from_polar(1.0, -PI * a as f64 * cos_phi))
        .collect())
}

/// One circularly-symmetric complex Gaussian vector with unit variance per entry.
pub fn sample_nlos<R: Rng + ?Sized>(antennas: usize, rng: &mut R) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..antennas)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect()
}

/// Combine path loss, line of sight and a given scattering vector.
pub fn compose_channel(
    user: Point2,
    uav: Point3,
    params: &SystemParams,
    nlos: &[Complex64],
) -> Result<ChannelRealization> {
    let u = user.ground();
    let los = los_steering(u, uav, params.antennas_per_uav)?;
    let d = u.distance(&uav);
    let amp = (params.pathloss_ref_linear() * d.powf(-params.pathloss_exp)).sqrt();
    let f = params.rician_factor;
    let (a_los, a_nlos) = if f >= PURE_LOS_FACTOR {
        (1.0, 0.0)
    } else {
        ((f / (f + 1.0)).sqrt(), (1.0 / (f + 1.0)).sqrt())
    };
    let gains = los
        .iter()
        .zip(nlos)
        .map(|(l, n)| amp * (l * a_los + n * a_nlos))
        .collect();
    Ok(ChannelRealization { gains, distance_m: d })
}

pub fn sample_channel<R: Rng + ?Sized>(
    user: Point2,
    uav: Point3,
    params: &SystemParams,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let nlos = sample_nlos(params.antennas_per_uav, rng);
    compose_channel(user, uav, params, &nlos)
}

/// Scattering components of one trial, one vector per (user, UAV) pair.
///
/// Drawn once per scenario and held fixed while solvers move UAVs, so every
/// solver sees the same channel for the same placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingField {
    uavs: usize,
    draws: Vec<Vec<Complex64>>,
}

impl FadingField {
    pub fn sample<R: Rng + ?Sized>(users: usize, uavs: usize, antennas: usize, rng: &mut R) -> Self {
        let draws = (0..users * uavs).map(|_| sample_nlos(antennas, rng)).collect();
        Self { uavs, draws }
    }

    /// The field implied by a scenario's seed.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        let mut rng = seed::rng(scenario.seed, &[seed::STREAM_FADING]);
        Self::sample(
            scenario.n_users(),
            scenario.n_uavs(),
            scenario.params.antennas_per_uav,
            &mut rng,
        )
    }

    pub fn nlos(&self, user: usize, uav: usize) -> &[Complex64] {
        &self.draws[user * self.uavs + uav]
    }

    /// Channel of `user` toward UAV `uav` hovering at `placement`.
    pub fn channel(&self, scenario: &Scenario, user: usize, uav: usize, placement: Point3) -> Result<ChannelRealization> {
        compose_channel(
            scenario.users[user].position,
            placement,
            &scenario.params,
            self.nlos(user, uav),
        )
    }
}

/// Transmitter or receiver sharing one UAV's orthogonal channel.
#[derive(Debug, Clone, Copy)]
pub struct Link<'a> {
    pub user: usize,
    pub channel: &'a ChannelRealization,
    pub power_w: f64,
}

fn sinr(links: &[Link<'_>], target: usize, noise: f64) -> Option<f64> {
    let me = links.iter().find(|l| l.user == target)?;
    let own = me.power_w * me.channel.norm_sqr();
    let interference: f64 = links
        .iter()
        .filter(|l| l.user != target)
        .map(|l| l.power_w * projected_gain(&me.channel.gains, &l.channel.beamformer()))
        .sum();
    Some(own / (interference + noise))
}

/// Downlink SINR and rate of `target` among the content users served by one UAV.
pub fn downlink_rate(links: &[Link<'_>], target: usize, uav: usize, params: &SystemParams) -> Result<(f64, f64)> {
    let g = sinr(links, target, params.noise_power_w).ok_or(Error::NotAssociated { user: target, uav })?;
    Ok((g, params.dl_bandwidth_hz * (1.0 + g).log2()))
}

/// Uplink SINR and rate of `target` among the transmitting users (MEC and
/// active sensing) of one UAV.
pub fn uplink_rate(links: &[Link<'_>], target: usize, params: &SystemParams) -> Result<(f64, f64)> {
    let g = sinr(links, target, params.noise_power_w).ok_or(Error::NotTransmitting(target))?;
    Ok((g, params.ul_bandwidth_hz * (1.0 + g).log2()))
}
