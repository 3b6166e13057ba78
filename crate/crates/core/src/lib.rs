//! Sparse-paving matroids: (**)-families, the diagonal partition of
//! `r`-subsets, the injections into sparse-paving tuples, and exhaustive
//! censuses on small ground sets.

pub mod census;
pub mod error;
pub mod maps;
pub mod matroid;
pub mod partition;
pub mod starstar;
pub mod subset;

pub use census::{
    census_export, census_import, enumerate_matroids, enumerate_sparse, verify_bounds, CensusCache,
    CensusConfig, CensusRow, ExportFormat,
};
pub use error::{Error, Result};
pub use maps::{gamma_map, iota, psi, psi_bar, unzeta, zeta, Injector, TaggedImage, Which};
pub use matroid::{sparse_from_circuits, validate_exchange, Matroid, MatroidSpec};
pub use partition::{build_partition, gamma_count, StarPartition};
pub use starstar::{
    greedy_star_star, max_star_star_exact, satisfies_star_star, sparse_count_lower_bound,
    star_star_upper_bound,
};
pub use subset::{binomial, enumerate_rsubsets, Family, GroundSet, Subset};
