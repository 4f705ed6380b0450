//! Spatially-correlated information gathered by active sensing users.
//!
//! Users are taken in ascending index order. The first active user
//! contributes `raw_bits`; each later one contributes
//! `raw_bits * (1 - 1 / (d / rho + 1))`, where `d` is its distance to the
//! nearest earlier active user.

use crate::error::{Error, Result};
use crate::geometry::Point2;

fn contribution(d: f64, raw_bits: f64, rho: f64) -> f64 {
    raw_bits * (1.0 - 1.0 / (d / rho + 1.0))
}

fn accumulate<'a>(active: impl Iterator<Item = &'a Point2>, raw_bits: f64, rho: f64) -> f64 {
    let mut seen: Vec<&Point2> = Vec::new();
    let mut total = 0.0;
    for p in active {
        total += match seen.iter().map(|q| p.distance(q)).reduce(f64::min) {
            None => raw_bits,
            Some(d) => contribution(d, raw_bits, rho),
        };
        seen.push(p);
    }
    total
}

/// Information with every sensing user active. Zero when there are none.
pub fn max_information(positions: &[Point2], raw_bits: f64, rho: f64) -> f64 {
    accumulate(positions.iter(), raw_bits, rho)
}

/// Information of the active subset.
pub fn gathered_information(activation: &[bool], positions: &[Point2], raw_bits: f64, rho: f64) -> f64 {
    assert_eq!(activation.len(), positions.len(), "activation length mismatch");
    accumulate(
        positions.iter().zip(activation).filter(|(_, a)| **a).map(|(p, _)| p),
        raw_bits,
        rho,
    )
}

/// Change in gathered information from activating `candidate`. Can be
/// negative when the candidate precedes active users in index order, since
/// it may shorten their nearest-earlier distances.
pub fn marginal_information(
    activation: &[bool],
    candidate: usize,
    positions: &[Point2],
    raw_bits: f64,
    rho: f64,
) -> Result<f64> {
    if activation[candidate] {
        return Err(Error::AlreadyActive(candidate));
    }
    let before = gathered_information(activation, positions, raw_bits, rho);
    let mut with = activation.to_vec();
    with[candidate] = true;
    let after = gathered_information(&with, positions, raw_bits, rho);
    Ok(after - before)
}
