//! Flat `key = value` configuration documents.
//!
//! Keys are the [`SystemParams`] / [`ScenarioShape`] field names, plus a
//! few short aliases (`beta`, `rho`, `z_min`, `z_max`, `n_c`, ...). Lines
//! starting with `#` are comments. Unspecified keys keep their defaults.

use toml::Value;

use super::params::{ScenarioShape, SystemParams};
use crate::error::{Error, Result};

fn canonical(key: &str) -> &str {
    match key {
        "beta" => "pathloss_exp",
        "lambda0_db" => "pathloss_ref_db",
        "rician_k" => "rician_factor",
        "rho" => "correlation_extent_m",
        "z_min" => "altitude_min_m",
        "z_max" => "altitude_max_m",
        "theta_opt" => "elevation_angle_deg",
        "epsilon" => "bisect_tol",
        "q" => "restarts",
        "n" => "users",
        "n_c" => "content_users",
        "n_s" => "sensing_users",
        "n_m" => "mec_users",
        "u" => "uavs",
        "c" => "contents",
        "gamma" => "storage_fraction",
        other => other,
    }
}

fn number(key: &str, value: &Value) -> Result<f64> {
    match value {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        other => Err(Error::Config(format!(
            "`{key}` must be numeric, got {}",
            other.type_str()
        ))),
    }
}

fn count(key: &str, value: &Value) -> Result<usize> {
    let v = number(key, value)?;
    if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
        return Err(Error::Config(format!(
            "`{key}` must be a non-negative integer, got {v}"
        )));
    }
    Ok(v as usize)
}

fn param_slot<'a>(p: &'a mut SystemParams, key: &str) -> Option<&'a mut f64> {
    Some(match key {
        "pathloss_ref_db" => &mut p.pathloss_ref_db,
        "pathloss_exp" => &mut p.pathloss_exp,
        "rician_factor" => &mut p.rician_factor,
        "dl_bandwidth_hz" => &mut p.dl_bandwidth_hz,
        "ul_bandwidth_hz" => &mut p.ul_bandwidth_hz,
        "uav_max_tx_power_w" => &mut p.uav_max_tx_power_w,
        "uav_compute_hz" => &mut p.uav_compute_hz,
        "user_tx_power_w" => &mut p.user_tx_power_w,
        "noise_power_w" => &mut p.noise_power_w,
        "switched_capacitance" => &mut p.switched_capacitance,
        "raw_data_bits" => &mut p.raw_data_bits,
        "correlation_extent_m" => &mut p.correlation_extent_m,
        "required_info_fraction" => &mut p.required_info_fraction,
        "content_size_bits" => &mut p.content_size_bits,
        "task_bits" => &mut p.task_bits,
        "cycles_per_bit" => &mut p.cycles_per_bit,
        "uav_speed_mps" => &mut p.uav_speed_mps,
        "tip_speed_mps" => &mut p.tip_speed_mps,
        "induced_velocity_mps" => &mut p.induced_velocity_mps,
        "fuselage_drag_ratio" => &mut p.fuselage_drag_ratio,
        "rotor_solidity" => &mut p.rotor_solidity,
        "air_density_kgm3" => &mut p.air_density_kgm3,
        "rotor_disc_area_m2" => &mut p.rotor_disc_area_m2,
        "profile_power_w" => &mut p.profile_power_w,
        "induced_power_w" => &mut p.induced_power_w,
        "altitude_min_m" => &mut p.altitude_min_m,
        "altitude_max_m" => &mut p.altitude_max_m,
        "elevation_angle_deg" => &mut p.elevation_angle_deg,
        "bisect_tol" => &mut p.bisect_tol,
        "area_side_m" => &mut p.area_side_m,
        "dock_x_m" => &mut p.dock_x_m,
        "dock_y_m" => &mut p.dock_y_m,
        "dock_z_m" => &mut p.dock_z_m,
        _ => return None,
    })
}

/// Parse a configuration document into fully populated parameters and
/// population sizes. Any invariant violation is reported as a config error.
pub fn load_config(text: &str) -> Result<(SystemParams, ScenarioShape)> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.message().trim().to_string()))?;

    let mut params = SystemParams::default();
    let mut shape = ScenarioShape::default();

    // `users` sets the role split first; explicit role counts then override it.
    let mut entries: Vec<(&str, &Value)> =
        table.iter().map(|(k, v)| (canonical(k.as_str()), v)).collect();
    entries.sort_by_key(|(k, _)| *k != "users");

    for (key, value) in entries {
        if let Some(slot) = param_slot(&mut params, key) {
            *slot = number(key, value)?;
            continue;
        }
        match key {
            "antennas_per_uav" => params.antennas_per_uav = count(key, value)?,
            "restarts" => params.restarts = count(key, value)?,
            "required_info_bits" => params.required_info_bits = Some(number(key, value)?),
            "compute_bisect_tol" => params.compute_bisect_tol = Some(number(key, value)?),
            "users" => {
                let n = count(key, value)?;
                let s = ScenarioShape::thirds(n, shape.uavs, shape.contents);
                shape.content_users = s.content_users;
                shape.sensing_users = s.sensing_users;
                shape.mec_users = s.mec_users;
            }
            "content_users" => shape.content_users = count(key, value)?,
            "sensing_users" => shape.sensing_users = count(key, value)?,
            "mec_users" => shape.mec_users = count(key, value)?,
            "uavs" => shape.uavs = count(key, value)?,
            "contents" => shape.contents = count(key, value)?,
            "storage_fraction" => shape.storage_fraction = number(key, value)?,
            unknown => return Err(Error::Config(format!("unknown key `{unknown}`"))),
        }
    }

    let mut violations = params.validate();
    violations.extend(shape.validate());
    if !violations.is_empty() {
        return Err(Error::Config(violations.join("; ")));
    }
    Ok((params, shape))
}
