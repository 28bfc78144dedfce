//! Sorting-style heuristics for the minimum feedback arc set problem on
//! tournaments, with exact solvers, closed-form average-case values,
//! enumeration oracles that check them, and a rank-aggregation front-end.

pub mod error;
pub mod exact;
pub mod formulas;
pub mod harness;
pub mod method;
pub mod rank;
pub mod rng;
pub mod sorts;
pub mod tournament;

pub use error::{Error, Result};
pub use method::{Method, Solution};
pub use sorts::{Algorithm, HeuristicResult, PivotRule};
pub use tournament::{
    backward_count, backward_edges, is_locally_minimal, Cost, Ordering, Tournament, VertexId,
};
