//! Training and analysis of MLP autoencoders that learn embeddings
//! invariant to consistent subvector permutation.
//!
//! A vector of dimension 24 is built from six subvectors of length four.
//! Reordering the within-subvector positions the same way in every
//! subvector produces 24 equivalent vectors (one permutation point set).
//! A standard autoencoder trained on reconstruction error alone scatters
//! such a set across the embedding space; adding a triplet loss whose
//! positives share the anchor's point set pulls each set into a tight
//! cluster, making the embedding a permutation invariant up to a small
//! error epsilon.
//!
//! The crate covers the whole experiment:
//!
//! - [`dataset`]: seeded generation of unique permutation point sets,
//!   canonicalization, scaling, 80/20 splitting, CSV persistence
//! - [`model`]: the 24-16-8-16-24 tanh/sigmoid MLP with exact forward and
//!   analytic backward passes and binary checkpoints
//! - [`losses`]: reconstruction MSE, triplet loss, numeric accuracy
//! - [`training`]: standard and triplet-enhanced runs with Adam,
//!   anchor-once triplet schedules, and steady-state statistics
//! - [`analysis`]: centroid/distance statistics, empirical CDFs, the 95%
//!   centroid separation ratio, and JSON reports
//! - [`pipeline`]: the filesystem commands behind the `permvec` CLI
//!
//! Everything is deterministic given a seed: the [`rng`] module carries
//! its own xoshiro256** implementation so reruns are byte-identical.

pub mod analysis;
pub mod config;
pub mod dataset;
pub mod error;
pub mod losses;
pub mod math;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod training;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use rng::Rng;
