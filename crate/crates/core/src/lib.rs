//! Girth-maximum bipartite graphs built from unions of perfect matchings.
//!
//! An `(m, r)` BTU is an `m×m` 0/1 matrix with `r` ones per row and column,
//! stored as `r` pairwise-compatible permutations. Its Tanner graph is the
//! bipartite graph on rows and columns. This crate factors `(m, r)`, derives
//! the partitions that separate adjacent matchings in a girth-optimal
//! arrangement, and searches that family stage by stage. A brute-force oracle
//! is included for checking the search at small sizes.

mod backtrack;
pub mod btu;
pub mod engine;
pub mod error;
pub mod format;
pub mod oracle;
pub mod params;
pub mod perm;
pub mod searchspace;

pub use btu::{girth, Btu, GirthReport, Matrix, Vertex};
pub use engine::{
    admissible_rotations, coprime_rotations, enumerate_z, search, RotationPolicy, SearchConfig,
    SearchMode, SearchResult, SlotSource, StageTrace,
};
pub use error::{Error, Result};
pub use format::SearchReport;
pub use oracle::{max_girth, phi_census, verify_search, EngineOutcome, OracleReport, VerifyReport};
pub use params::{factorize, optimal_partitions, Factorization, OptimalPartitionSet};
pub use perm::{PartitionP2, Permutation};
pub use searchspace::{
    candidate_count, cayley_stats, enumerate_candidates, rank_candidate, unrank_candidate,
    CandidateStream, CandidateWord, CayleyStats,
};
