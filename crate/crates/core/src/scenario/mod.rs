//! World model: users, UAVs, content catalog and system constants.

mod config;
mod generate;
mod params;

use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use config::load_config;
pub use generate::generate_scenario;
pub use params::{ScenarioShape, SystemParams};

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3};
use crate::sensing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Content,
    Sensing,
    Mec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct User {
    pub id: usize,
    pub role: Role,
    pub position: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Uav {
    pub id: usize,
    pub docking_position: Point3,
}

/// `rows[i][j]`: content user `i` requests content `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandMatrix {
    pub rows: Vec<Vec<bool>>,
}

/// `rows[j][k]`: content `j` is stored on UAV `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageMatrix {
    pub rows: Vec<Vec<bool>>,
}

impl StorageMatrix {
    pub fn stored(&self, content: usize, uav: usize) -> bool {
        self.rows[content][uav]
    }

    /// Contents held by one UAV.
    pub fn column_count(&self, uav: usize) -> usize {
        self.rows.iter().filter(|r| r[uav]).count()
    }
}

/// Immutable world state of one instance.
///
/// Users are ordered by role: content users first, then sensing users,
/// then MEC users. User and UAV ids equal their positions in the vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub params: SystemParams,
    pub users: Vec<User>,
    pub uavs: Vec<Uav>,
    pub demand: DemandMatrix,
    pub storage: StorageMatrix,
    /// Size of each catalog item, bits.
    pub content_sizes: Vec<f64>,
    pub seed: u64,
}

impl Scenario {
    /// Assemble and validate a scenario.
    pub fn new(
        params: SystemParams,
        users: Vec<User>,
        uavs: Vec<Uav>,
        demand: DemandMatrix,
        storage: StorageMatrix,
        content_sizes: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        let s = Self { params, users, uavs, demand, storage, content_sizes, seed };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        let violations = self.params.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidParams(violations));
        }
        let bad = |m: String| Err(Error::InvalidScenario(m));
        for (i, u) in self.users.iter().enumerate() {
            if u.id != i {
                return bad(format!("user at position {i} has id {}", u.id));
            }
            let side = self.params.area_side_m;
            let p = u.position;
            if !(0.0..=side).contains(&p.x) || !(0.0..=side).contains(&p.y) {
                return bad(format!("user {i} at ({}, {}) lies outside the area", p.x, p.y));
            }
        }
        let ranks: Vec<u8> = self
            .users
            .iter()
            .map(|u| match u.role {
                Role::Content => 0,
                Role::Sensing => 1,
                Role::Mec => 2,
            })
            .collect();
        if ranks.windows(2).any(|w| w[0] > w[1]) {
            return bad("users must be ordered content, sensing, MEC".into());
        }
        for (k, uav) in self.uavs.iter().enumerate() {
            if uav.id != k {
                return bad(format!("UAV at position {k} has id {}", uav.id));
            }
            if uav.docking_position.z < 0.0 {
                return bad(format!("UAV {k} docks below ground"));
            }
        }
        let c = self.content_sizes.len();
        if self.content_sizes.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
            return bad("content sizes must be positive".into());
        }
        if self.demand.rows.len() != self.n_content() {
            return bad(format!(
                "demand has {} rows for {} content users",
                self.demand.rows.len(),
                self.n_content()
            ));
        }
        for (i, row) in self.demand.rows.iter().enumerate() {
            if row.len() != c {
                return bad(format!("demand row {i} has {} columns for {c} contents", row.len()));
            }
            if !row.iter().any(|&r| r) {
                return bad(format!("content user {i} requests nothing"));
            }
        }
        if self.storage.rows.len() != c {
            return bad(format!("storage has {} rows for {c} contents", self.storage.rows.len()));
        }
        for (j, row) in self.storage.rows.iter().enumerate() {
            if row.len() != self.uavs.len() {
                return bad(format!("storage row {j} has {} columns", row.len()));
            }
            if !row.iter().any(|&s| s) {
                return bad(format!("content {j} is not stored on any UAV"));
            }
        }
        if let Some(bits) = self.params.required_info_bits {
            let h = self.max_information();
            if bits > h * (1.0 + 1e-12) {
                return bad(format!("required information {bits} exceeds attainable {h}"));
            }
        }
        Ok(())
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn n_uavs(&self) -> usize {
        self.uavs.len()
    }

    pub fn n_contents(&self) -> usize {
        self.content_sizes.len()
    }

    fn count(&self, role: Role) -> usize {
        self.users.iter().filter(|u| u.role == role).count()
    }

    pub fn n_content(&self) -> usize {
        self.count(Role::Content)
    }

    pub fn n_sensing(&self) -> usize {
        self.count(Role::Sensing)
    }

    pub fn n_mec(&self) -> usize {
        self.count(Role::Mec)
    }

    pub fn content_range(&self) -> Range<usize> {
        0..self.n_content()
    }

    pub fn sensing_range(&self) -> Range<usize> {
        let start = self.n_content();
        start..start + self.n_sensing()
    }

    pub fn mec_range(&self) -> Range<usize> {
        let start = self.n_content() + self.n_sensing();
        start..self.n_users()
    }

    pub fn role(&self, user: usize) -> Role {
        self.users[user].role
    }

    /// Index of a sensing user inside the activation vector.
    pub fn sensing_slot(&self, user: usize) -> Option<usize> {
        self.sensing_range().contains(&user).then(|| user - self.n_content())
    }

    /// Total requested bits of a content user.
    pub fn demand_bits(&self, user: usize) -> f64 {
        self.demand.rows[user]
            .iter()
            .zip(&self.content_sizes)
            .filter(|(r, _)| **r)
            .map(|(_, m)| m)
            .sum()
    }

    /// Number of requested contents stored on `uav`.
    pub fn overlap(&self, user: usize, uav: usize) -> usize {
        self.demand.rows[user]
            .iter()
            .enumerate()
            .filter(|(j, r)| **r && self.storage.stored(*j, uav))
            .count()
    }

    /// Requested bits that `uav` can deliver.
    pub fn overlap_bits(&self, user: usize, uav: usize) -> f64 {
        self.demand.rows[user]
            .iter()
            .enumerate()
            .filter(|(j, r)| **r && self.storage.stored(*j, uav))
            .map(|(j, _)| self.content_sizes[j])
            .sum()
    }

    /// `uav` stores every content requested by content user `user`.
    pub fn covers(&self, user: usize, uav: usize) -> bool {
        self.demand.rows[user]
            .iter()
            .enumerate()
            .all(|(j, r)| !*r || self.storage.stored(j, uav))
    }

    pub fn sensing_positions(&self) -> Vec<Point2> {
        self.users[self.sensing_range()].iter().map(|u| u.position).collect()
    }

    /// Information gathered when every sensing user is active.
    pub fn max_information(&self) -> f64 {
        sensing::max_information(
            &self.sensing_positions(),
            self.params.raw_data_bits,
            self.params.correlation_extent_m,
        )
    }

    /// The sensing tenant's requirement for this instance, bits.
    pub fn required_info_bits(&self) -> f64 {
        self.params
            .required_info_bits
            .unwrap_or_else(|| self.params.required_info_fraction * self.max_information())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.check()?;
        Ok(s)
    }
}
