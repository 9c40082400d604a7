pub mod baselines;
pub mod bench;
pub mod collection;
pub mod commands;
pub mod distance;
pub mod embedding;
pub mod error;
pub mod io;
pub mod model;
pub mod netstats;
pub mod rng;
pub mod smoother;
pub mod stats;
