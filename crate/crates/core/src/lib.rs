//! Many-objective evolutionary optimization with edge-rotated cone orders.
//!
//! The rotated cone is a strict extension of the Pareto cone. Ranking a
//! population with it splits a single Pareto front into several layers,
//! restoring selection pressure when many objectives make almost every
//! solution mutually nondominated. The engines switch to the rotated cone
//! exactly in that situation.

pub mod cone_order;
pub mod evolution;
pub mod harness;
pub mod metrics;
pub mod problems;
pub mod ranking;
pub mod simplex;

pub use cone_order::{ConeError, ConeOrder, DominanceRelation, ObjectiveVector};
pub use evolution::{Algorithm, AlgorithmConfig, Engine, EngineState};
pub use metrics::{hypervolume, igd, NormalizationSpec};
pub use problems::{ProblemDefinition, ProblemId};
pub use ranking::{nondominated_sort, FrontPartition, OrderSelector};
