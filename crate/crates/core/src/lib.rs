//! Divisor theory on finite graphs via chip-firing, with emphasis on the
//! complete graph `K_d`: reduced divisors, exact rank, the gonality
//! sequence, lower-bound certificates, and integer-length metric graphs
//! modelled by edge subdivision.

pub mod cli;
pub mod error;
pub mod gonality;
pub mod graph;
pub mod io;
pub mod metric;
pub mod rank;
pub mod reduction;
pub mod rng;
pub mod sequences;

pub use error::{Error, Result};
pub use graph::{
    canonical_divisor, complete_graph, genus, linearly_equivalent, principal_divisor, Divisor,
    FiringScript, Graph,
};
pub use rank::{rank_complete_fast, rank_oracle, RankResult};
pub use reduction::{is_v_reduced, reduce, reduced_witness_ordering, ReducedForm};
