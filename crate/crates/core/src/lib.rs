//! Fair rankings under position-based exposure models.
//!
//! The set of expected exposure vectors reachable by distributions over
//! rankings is a permutahedron (the expohedron). This crate traces the exact
//! utility/unfairness Pareto front inside it, decomposes any of its points
//! into at most `n` rankings, and delivers such distributions over time as a
//! balanced word.
//!
//! ```
//! use expohedron::{feasible_target, gls_decompose, pareto_front, PbmModel, RelevanceVector};
//!
//! let model = PbmModel::dcg(4)?;
//! let rho = RelevanceVector::new(vec![0.2, 0.9, 0.4, 0.6])?;
//! let target = feasible_target(&model, &rho)?.exposure;
//! let front = pareto_front(&model, &target, &rho)?;
//! let dist = gls_decompose(&front.first().exposure, &model)?;
//! assert!(dist.len() <= 4);
//! # Ok::<(), expohedron::ExpoError>(())
//! ```

pub mod baselines;
pub mod bench;
pub mod caratheodory;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod pareto;
pub mod scheduler;
pub mod simulation;
mod types;

pub use caratheodory::{gls_decompose, gls_trace};
pub use error::{ExpoError, Result};
pub use geometry::{face_of, majorizes, FaceDescriptor};
pub use pareto::{feasible_target, pareto_front, scalarization_match};
pub use scheduler::{deliver, BalancedWordState, DeliveryMode};
pub use types::{
    ExposureVector, FrontPoint, ParetoFront, PbmModel, Ranking, RankingDistribution, RelevanceVector,
    WeightedRanking,
};
