//! Evolving tree-shaped arrangements of sub-panels cut from a flat solar
//! panel.
//!
//! A [`Genome`](fitness::Genome) describes where a 10 × 6-cell panel is cut
//! and how each resulting plate is mounted on a tree (height, tilt,
//! orientation). [`FitnessModel`](fitness::FitnessModel) scores a genome
//! with a clear-sky irradiance model over a window of daylight hours, and
//! the engines in [`evolution`] search for high-scoring trees. The
//! [`stats`] module aggregates repeated runs and compares methods with a
//! Welch t-test.
//!
//! ```
//! use solartree::fitness::{FitnessModel, Genome};
//! use solartree::geometry::{CutMask, Placement};
//! use solartree::solar::Scenario;
//!
//! let model = FitnessModel::new(Scenario::default()).unwrap();
//! let flat = Genome::uniform(CutMask::EMPTY, Placement::new(50.0, 0.0, 180.0));
//! let result = model.evaluate(&flat).unwrap();
//! assert_eq!(result.conflict_count, 0);
//! assert!(result.fitness > 0.0);
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod evolution;
pub mod fitness;
pub mod geometry;
pub mod output;
pub mod solar;
pub mod stats;

pub use error::{Error, Result};

// The guide's code listings are compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/solar.md")]
    mod solar {}
    #[doc = include_str!("../../../book/src/fitness.md")]
    mod fitness {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    mod evolution {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
