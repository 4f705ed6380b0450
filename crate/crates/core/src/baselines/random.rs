use rand::seq::index;
use rand::Rng;

use crate::channel::FadingField;
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::scenario::{Role, Scenario};
use crate::seed;
use crate::slicer::{assemble, optimal_altitude, Allocation, Layout, SliceSolution};

/// Every UAV hovers above a randomly drawn user; users join the nearest UAV
/// able to serve them; every sensing user is active; resources are split
/// equally.
pub fn random_solution(scenario: &Scenario, fading: &FadingField, seed: u64) -> Result<SliceSolution> {
    let mut rng = seed::rng(seed, &[seed::STREAM_RANDOM_SOLVER]);
    let n = scenario.n_users();
    let u = scenario.n_uavs();
    let anchors: Vec<usize> = if u <= n {
        index::sample(&mut rng, n, u).into_vec()
    } else {
        (0..u).map(|_| rng.random_range(0..n)).collect()
    };
    let spots: Vec<_> = anchors.iter().map(|&i| scenario.users[i].position).collect();

    let mut association = vec![vec![false; u]; n];
    for (i, user) in scenario.users.iter().enumerate() {
        let candidates = (0..u).filter(|&k| user.role != Role::Content || scenario.covers(i, k));
        let nearest = candidates
            .min_by(|&a, &b| user.position.distance(&spots[a]).total_cmp(&user.position.distance(&spots[b])))
            .ok_or(Error::Unservable(i))?;
        association[i][nearest] = true;
    }

    let p = &scenario.params;
    let mut placements = std::collections::BTreeMap::new();
    for k in 0..u {
        let served: Vec<_> = (0..n).filter(|&i| association[i][k]).map(|i| scenario.users[i].position).collect();
        let z = if served.is_empty() { p.altitude_min_m } else { optimal_altitude(k, spots[k], &served, p)? };
        placements.insert(k, Point3::new(spots[k].x, spots[k].y, z));
    }
    let layout = Layout {
        deployed: (0..u).collect(),
        placements,
        association,
        activation: vec![true; scenario.n_sensing()],
    };
    assemble(scenario, fading, &layout, Allocation::EqualSplit)
}
