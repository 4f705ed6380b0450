//! Energy-efficient network slicing over a shared fleet of UAVs.
//!
//! Three tenants share the fleet: content delivery, spatially-correlated
//! sensing, and mobile edge computing (MEC). The crate provides the world
//! model, Rician channels with MRT/MRC beamforming, the rotary-wing energy
//! model, per-UAV power and CPU allocators (bisection over KKT closed
//! forms), the quadripartite-graph greedy slicer, comparator solvers and a
//! Monte Carlo sweep harness.

pub mod baselines;
pub mod channel;
pub mod compute_alloc;
pub mod context;
pub mod energy;
pub mod error;
pub mod fixture;
pub mod geometry;
pub mod harness;
pub mod power_alloc;
pub mod scenario;
pub mod seed;
pub mod sensing;
pub mod slicer;

pub use error::{Error, Result};
