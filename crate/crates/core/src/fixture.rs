//! A small hand-specified catalog instance: three UAVs, four contents and
//! five content users with fixed demand and storage.

use rand::Rng;

use crate::error::Result;
use crate::geometry::Point2;
use crate::scenario::{DemandMatrix, Role, Scenario, StorageMatrix, SystemParams, Uav, User};
use crate::seed;

/// Requested content of each content user.
pub const DEMAND: [usize; 5] = [2, 3, 0, 3, 1];

/// `STORAGE[j][k]`: content `j` is stored on UAV `k`.
pub const STORAGE: [[bool; 3]; 4] = [
    [true, true, true],
    [false, true, false],
    [true, true, false],
    [true, false, true],
];

/// The catalog instance with the given numbers of sensing and MEC users.
/// User positions are drawn uniformly from `seed`.
pub fn catalog_fixture(params: &SystemParams, sensing_users: usize, mec_users: usize, seed: u64) -> Result<Scenario> {
    let mut rng = seed::rng(seed, &[seed::STREAM_SCENARIO]);
    let side = params.area_side_m;
    let roles = std::iter::repeat_n(Role::Content, DEMAND.len())
        .chain(std::iter::repeat_n(Role::Sensing, sensing_users))
        .chain(std::iter::repeat_n(Role::Mec, mec_users));
    let users = roles
        .enumerate()
        .map(|(id, role)| User {
            id,
            role,
            position: Point2::new(rng.random::<f64>() * side, rng.random::<f64>() * side),
        })
        .collect();
    let demand = DemandMatrix {
        rows: DEMAND.iter().map(|&c| (0..STORAGE.len()).map(|j| j == c).collect()).collect(),
    };
    let storage = StorageMatrix { rows: STORAGE.iter().map(|r| r.to_vec()).collect() };
    let uavs = (0..3).map(|id| Uav { id, docking_position: params.docking_position() }).collect();
    Scenario::new(
        params.clone(),
        users,
        uavs,
        demand,
        storage,
        vec![params.content_size_bits; STORAGE.len()],
        seed,
    )
}
