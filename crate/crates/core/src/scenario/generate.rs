use rand::seq::SliceRandom;
use rand::Rng;

use super::{DemandMatrix, Role, Scenario, ScenarioShape, StorageMatrix, SystemParams, Uav, User};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::seed;

/// Draw a random instance: users uniform over the square area, one requested
/// content per content user, and a storage matrix where every UAV holds
/// `ceil(storage_fraction * contents)` items and every item is stored
/// somewhere. Pure function of its arguments.
pub fn generate_scenario(params: &SystemParams, shape: &ScenarioShape, seed: u64) -> Result<Scenario> {
    let violations = params.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations));
    }
    let violations = shape.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidScenario(violations.join("; ")));
    }

    let per_uav = shape.contents_per_uav().min(shape.contents);
    if shape.contents > 0 && per_uav * shape.uavs < shape.contents {
        return Err(Error::StorageInfeasible {
            per_uav,
            uavs: shape.uavs,
            contents: shape.contents,
        });
    }

    let mut rng = seed::rng(seed, &[seed::STREAM_SCENARIO]);
    let side = params.area_side_m;

    let roles = std::iter::repeat_n(Role::Content, shape.content_users)
        .chain(std::iter::repeat_n(Role::Sensing, shape.sensing_users))
        .chain(std::iter::repeat_n(Role::Mec, shape.mec_users));
    let users: Vec<User> = roles
        .enumerate()
        .map(|(id, role)| {
            let position = Point2::new(rng.random::<f64>() * side, rng.random::<f64>() * side);
            User { id, role, position }
        })
        .collect();

    let demand = DemandMatrix {
        rows: (0..shape.content_users)
            .map(|_| {
                let pick = rng.random_range(0..shape.contents);
                (0..shape.contents).map(|j| j == pick).collect()
            })
            .collect(),
    };

    let mut storage = vec![vec![false; shape.uavs]; shape.contents];
    if shape.contents > 0 {
        // Coverage first: deal shuffled contents round-robin over shuffled UAVs.
        let mut contents: Vec<usize> = (0..shape.contents).collect();
        contents.shuffle(&mut rng);
        let mut order: Vec<usize> = (0..shape.uavs).collect();
        order.shuffle(&mut rng);
        for (t, &j) in contents.iter().enumerate() {
            storage[j][order[t % shape.uavs]] = true;
        }
        // Then top every UAV up to its capacity.
        for k in 0..shape.uavs {
            let mut missing: Vec<usize> = (0..shape.contents).filter(|&j| !storage[j][k]).collect();
            missing.shuffle(&mut rng);
            let held = shape.contents - missing.len();
            for &j in missing.iter().take(per_uav.saturating_sub(held)) {
                storage[j][k] = true;
            }
        }
    }

    let dock = params.docking_position();
    let uavs = (0..shape.uavs).map(|id| Uav { id, docking_position: dock }).collect();

    Scenario::new(
        params.clone(),
        users,
        uavs,
        demand,
        StorageMatrix { rows: storage },
        vec![params.content_size_bits; shape.contents],
        seed,
    )
}
