use serde::{Deserialize, Serialize};

use crate::geometry::Point3;

/// Physical, radio, energy and solver constants of one experiment.
///
/// Defaults reproduce the reference simulation table; constants the table
/// does not list (noise, user power, antenna count, rotor powers, altitude
/// window, elevation angle, restarts) use common urban-UAV values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemParams {
    /// Path loss at 1 m, dB.
    pub pathloss_ref_db: f64,
    pub pathloss_exp: f64,
    /// Rician K-factor, linear.
    pub rician_factor: f64,
    pub dl_bandwidth_hz: f64,
    pub ul_bandwidth_hz: f64,
    pub uav_max_tx_power_w: f64,
    pub uav_compute_hz: f64,
    pub antennas_per_uav: usize,
    pub user_tx_power_w: f64,
    pub noise_power_w: f64,
    pub switched_capacitance: f64,
    /// Raw bits produced by one sensing user.
    pub raw_data_bits: f64,
    pub correlation_extent_m: f64,
    /// Absolute information requirement; overrides `required_info_fraction`.
    pub required_info_bits: Option<f64>,
    /// Requirement as a fraction of the instance's maximum attainable information.
    pub required_info_fraction: f64,
    pub content_size_bits: f64,
    pub task_bits: f64,
    pub cycles_per_bit: f64,
    pub uav_speed_mps: f64,
    pub tip_speed_mps: f64,
    pub induced_velocity_mps: f64,
    pub fuselage_drag_ratio: f64,
    pub rotor_solidity: f64,
    pub air_density_kgm3: f64,
    pub rotor_disc_area_m2: f64,
    pub profile_power_w: f64,
    pub induced_power_w: f64,
    pub altitude_min_m: f64,
    pub altitude_max_m: f64,
    pub elevation_angle_deg: f64,
    /// Bisection tolerance of the power allocator (joule-scaled multiplier).
    pub bisect_tol: f64,
    /// Bisection tolerance of the CPU allocator; falls back to `bisect_tol`.
    pub compute_bisect_tol: Option<f64>,
    pub restarts: usize,
    pub area_side_m: f64,
    pub dock_x_m: f64,
    pub dock_y_m: f64,
    pub dock_z_m: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            pathloss_ref_db: -30.0,
            pathloss_exp: 2.2,
            rician_factor: 10.0,
            dl_bandwidth_hz: 1e6,
            ul_bandwidth_hz: 1e6,
            uav_max_tx_power_w: 1.0,
            uav_compute_hz: 4e9,
            antennas_per_uav: 8,
            user_tx_power_w: 0.1,
            // -100 dBm
            noise_power_w: 1e-13,
            switched_capacitance: 1e-28,
            raw_data_bits: 1e6,
            correlation_extent_m: 1e2,
            required_info_bits: None,
            required_info_fraction: 0.75,
            content_size_bits: 5e8,
            task_bits: 1e6,
            cycles_per_bit: 700.0,
            uav_speed_mps: 12.0,
            tip_speed_mps: 120.0,
            induced_velocity_mps: 4.03,
            fuselage_drag_ratio: 0.6,
            rotor_solidity: 0.05,
            air_density_kgm3: 1.225,
            rotor_disc_area_m2: 0.503,
            profile_power_w: 79.86,
            induced_power_w: 88.63,
            altitude_min_m: 50.0,
            altitude_max_m: 300.0,
            elevation_angle_deg: 42.44,
            bisect_tol: 0.01,
            compute_bisect_tol: None,
            restarts: 20,
            area_side_m: 1200.0,
            dock_x_m: 0.0,
            dock_y_m: 0.0,
            dock_z_m: 0.0,
        }
    }
}

impl SystemParams {
    pub fn pathloss_ref_linear(&self) -> f64 {
        10f64.powf(self.pathloss_ref_db / 10.0)
    }

    /// Hover power: the movement model evaluated at zero speed.
    pub fn hover_power_w(&self) -> f64 {
        self.profile_power_w + self.induced_power_w
    }

    pub fn compute_tol(&self) -> f64 {
        self.compute_bisect_tol.unwrap_or(self.bisect_tol)
    }

    pub fn docking_position(&self) -> Point3 {
        Point3::new(self.dock_x_m, self.dock_y_m, self.dock_z_m)
    }

    /// Every violated invariant, one message each. Empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let positive = [
            ("pathloss_exp", self.pathloss_exp),
            ("dl_bandwidth_hz", self.dl_bandwidth_hz),
            ("ul_bandwidth_hz", self.ul_bandwidth_hz),
            ("uav_max_tx_power_w", self.uav_max_tx_power_w),
            ("uav_compute_hz", self.uav_compute_hz),
            ("user_tx_power_w", self.user_tx_power_w),
            ("noise_power_w", self.noise_power_w),
            ("switched_capacitance", self.switched_capacitance),
            ("raw_data_bits", self.raw_data_bits),
            ("correlation_extent_m", self.correlation_extent_m),
            ("content_size_bits", self.content_size_bits),
            ("task_bits", self.task_bits),
            ("cycles_per_bit", self.cycles_per_bit),
            ("uav_speed_mps", self.uav_speed_mps),
            ("tip_speed_mps", self.tip_speed_mps),
            ("induced_velocity_mps", self.induced_velocity_mps),
            ("fuselage_drag_ratio", self.fuselage_drag_ratio),
            ("rotor_solidity", self.rotor_solidity),
            ("air_density_kgm3", self.air_density_kgm3),
            ("rotor_disc_area_m2", self.rotor_disc_area_m2),
            ("profile_power_w", self.profile_power_w),
            ("induced_power_w", self.induced_power_w),
            ("altitude_min_m", self.altitude_min_m),
            ("altitude_max_m", self.altitude_max_m),
            ("bisect_tol", self.bisect_tol),
            ("area_side_m", self.area_side_m),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                out.push(format!("{name} must be finite and > 0 (got {v})"));
            }
        }
        if !self.pathloss_ref_db.is_finite() {
            out.push(format!("pathloss_ref_db must be finite (got {})", self.pathloss_ref_db));
        }
        if !(self.rician_factor.is_finite() && self.rician_factor >= 0.0) {
            out.push(format!("rician_factor must be finite and >= 0 (got {})", self.rician_factor));
        }
        if self.antennas_per_uav == 0 {
            out.push("antennas_per_uav must be >= 1".into());
        }
        if self.restarts == 0 {
            out.push("restarts must be >= 1".into());
        }
        if let Some(t) = self.compute_bisect_tol {
            if !(t.is_finite() && t > 0.0) {
                out.push(format!("compute_bisect_tol must be finite and > 0 (got {t})"));
            }
        }
        if self.altitude_min_m >= self.altitude_max_m {
            out.push(format!(
                "altitude_min_m ({}) must be below altitude_max_m ({})",
                self.altitude_min_m, self.altitude_max_m
            ));
        }
        if !(self.elevation_angle_deg > 0.0 && self.elevation_angle_deg < 90.0) {
            out.push(format!(
                "elevation_angle_deg must lie in (0, 90) (got {})",
                self.elevation_angle_deg
            ));
        }
        if !(0.0..=1.0).contains(&self.required_info_fraction) {
            out.push(format!(
                "required_info_fraction must lie in [0, 1] (got {})",
                self.required_info_fraction
            ));
        }
        if let Some(bits) = self.required_info_bits {
            if !(bits.is_finite() && bits >= 0.0) {
                out.push(format!("required_info_bits must be finite and >= 0 (got {bits})"));
            }
        }
        for (name, v) in [("dock_x_m", self.dock_x_m), ("dock_y_m", self.dock_y_m)] {
            if !v.is_finite() {
                out.push(format!("{name} must be finite (got {v})"));
            }
        }
        if !(self.dock_z_m.is_finite() && self.dock_z_m >= 0.0) {
            out.push(format!("dock_z_m must be finite and >= 0 (got {})", self.dock_z_m));
        }
        out
    }
}

/// Population sizes of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioShape {
    pub content_users: usize,
    pub sensing_users: usize,
    pub mec_users: usize,
    pub uavs: usize,
    pub contents: usize,
    /// Fraction of the catalog each UAV stores.
    pub storage_fraction: f64,
}

impl Default for ScenarioShape {
    fn default() -> Self {
        Self::thirds(27, 5, 4)
    }
}

impl ScenarioShape {
    /// One third of the users per tenant; remainders go to content first,
    /// then sensing.
    pub fn thirds(users: usize, uavs: usize, contents: usize) -> Self {
        let base = users / 3;
        let rem = users % 3;
        Self {
            content_users: base + usize::from(rem >= 1),
            sensing_users: base + usize::from(rem >= 2),
            mec_users: base,
            uavs,
            contents,
            storage_fraction: 0.75,
        }
    }

    pub fn users(&self) -> usize {
        self.content_users + self.sensing_users + self.mec_users
    }

    /// Contents stored by each UAV.
    pub fn contents_per_uav(&self) -> usize {
        // guard against 0.75 * 4 landing a hair above 3
        ((self.storage_fraction * self.contents as f64) - 1e-9).ceil().max(0.0) as usize
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.users() == 0 {
            out.push("at least one user is required".into());
        }
        if self.uavs == 0 {
            out.push("at least one UAV is required".into());
        }
        if self.content_users > 0 && self.contents == 0 {
            out.push("content users require a non-empty catalog".into());
        }
        if !(self.storage_fraction > 0.0 && self.storage_fraction <= 1.0) {
            out.push(format!(
                "storage_fraction must lie in (0, 1] (got {})",
                self.storage_fraction
            ));
        }
        out
    }
}
