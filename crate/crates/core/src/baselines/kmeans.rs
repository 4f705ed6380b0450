use std::collections::BTreeMap;

use rand::seq::index;

use crate::channel::FadingField;
use crate::error::{Error, Result};
use crate::geometry::{centroid, Point2};
use crate::scenario::{Role, Scenario};
use crate::seed;
use crate::slicer::{assemble, optimal_altitude, Allocation, Layout, SliceSolution};

const MAX_ITERATIONS: usize = 100;
const MOVE_TOL_M: f64 = 1.0;

fn nearest(p: &Point2, centers: &[Point2]) -> usize {
    let mut best = 0;
    for (c, q) in centers.iter().enumerate().skip(1) {
        if p.distance(q) < p.distance(&centers[best]) {
            best = c;
        }
    }
    best
}

/// Lloyd iterations from `k` distinct seeded starting points. Returns the
/// centers and each point's cluster.
pub fn lloyd(points: &[Point2], k: usize, seed: u64) -> (Vec<Point2>, Vec<usize>) {
    assert!(k >= 1 && k <= points.len(), "need 1 <= k <= number of points");
    let mut rng = seed::rng(seed, &[seed::STREAM_KMEANS]);
    let mut centers: Vec<Point2> = index::sample(&mut rng, points.len(), k).iter().map(|i| points[i]).collect();
    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
    for _ in 0..MAX_ITERATIONS {
        let mut next = Vec::with_capacity(k);
        for c in 0..k {
            let members = points.iter().zip(&labels).filter(|(_, l)| **l == c).map(|(p, _)| p);
            next.push(centroid(members));
        }
        // an empty cluster restarts at the point farthest from its center
        let mut new_centers = Vec::with_capacity(k);
        for (c, m) in next.into_iter().enumerate() {
            new_centers.push(match m {
                Some(p) => p,
                None => {
                    let far = (0..points.len())
                        .max_by(|&a, &b| {
                            let da = points[a].distance(&centers[labels[a]]);
                            let db = points[b].distance(&centers[labels[b]]);
                            da.total_cmp(&db).then(b.cmp(&a))
                        })
                        .expect("non-empty");
                    labels[far] = c;
                    points[far]
                }
            });
        }
        let shift = centers.iter().zip(&new_centers).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
        centers = new_centers;
        labels = points.iter().map(|p| nearest(p, &centers)).collect();
        if shift < MOVE_TOL_M {
            break;
        }
    }
    (centers, labels)
}

/// Contents requested by any content user that the chosen UAVs store, and
/// content users whose own cluster UAV stores their demand.
fn coverage(scenario: &Scenario, labels: &[usize], uav_of: &[usize]) -> (usize, usize) {
    let demanded: Vec<usize> = (0..scenario.n_contents())
        .filter(|&j| scenario.content_range().any(|i| scenario.demand.rows[i][j]))
        .collect();
    let covered = demanded
        .iter()
        .filter(|&&j| uav_of.iter().any(|&k| scenario.storage.stored(j, k)))
        .count();
    let matched = scenario
        .content_range()
        .filter(|&i| scenario.covers(i, uav_of[labels[i]]))
        .count();
    (covered, matched)
}

/// Injective cluster-to-UAV maps in lexicographic order.
fn injections(k: usize, u: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, u: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..u {
            if !cur.contains(&v) {
                cur.push(v);
                rec(k, u, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, u, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Deploy `k` UAVs at the K-means centers of all users. Content users whose
/// cluster UAV lacks their demand move to the nearest deployed UAV that has
/// it; every sensing user is active.
pub fn kmeans_solution(scenario: &Scenario, fading: &FadingField, k: usize, seed: u64) -> Result<SliceSolution> {
    let n = scenario.n_users();
    let u = scenario.n_uavs();
    if k == 0 || k > u || k > n {
        return Err(Error::Infeasible(format!("cannot deploy {k} UAVs for {n} users and {u} UAVs")));
    }
    let points: Vec<Point2> = scenario.users.iter().map(|x| x.position).collect();
    let (centers, labels) = lloyd(&points, k, seed);

    // first maximum wins, keeping the choice deterministic
    let mut uav_of = Vec::new();
    let mut best_score = None;
    for cand in injections(k, u) {
        let score = coverage(scenario, &labels, &cand);
        if best_score.is_none_or(|b| score > b) {
            best_score = Some(score);
            uav_of = cand;
        }
    }

    let mut association = vec![vec![false; u]; n];
    for i in 0..n {
        let mut cluster = labels[i];
        if scenario.role(i) == Role::Content && !scenario.covers(i, uav_of[cluster]) {
            cluster = (0..k)
                .filter(|&c| scenario.covers(i, uav_of[c]))
                .min_by(|&a, &b| points[i].distance(&centers[a]).total_cmp(&points[i].distance(&centers[b])))
                .ok_or_else(|| Error::Infeasible(format!("no deployed UAV stores the demand of user {i}")))?;
        }
        association[i][uav_of[cluster]] = true;
    }

    let p = &scenario.params;
    let mut placements = BTreeMap::new();
    for (c, &uav) in uav_of.iter().enumerate() {
        let served: Vec<Point2> = (0..n).filter(|&i| association[i][uav]).map(|i| points[i]).collect();
        let z = if served.is_empty() { p.altitude_min_m } else { optimal_altitude(uav, centers[c], &served, p)? };
        placements.insert(uav, centers[c].at_altitude(z));
    }
    let mut deployed = uav_of.clone();
    deployed.sort_unstable();
    let layout = Layout { deployed, placements, association, activation: vec![true; scenario.n_sensing()] };
    assemble(scenario, fading, &layout, Allocation::Optimized)
}
