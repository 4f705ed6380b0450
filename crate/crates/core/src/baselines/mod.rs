//! Comparator solvers: random layouts, exhaustive enumeration and
//! K-means placement.

mod exhaustive;
mod kmeans;
mod random;

pub use exhaustive::{exhaustive_search, ExhaustiveLimits};
pub use kmeans::{kmeans_solution, lloyd};
pub use random::random_solution;
