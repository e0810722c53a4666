//! Singularities of quotients `X = V/(Z/p)` of linear representations of the
//! cyclic group of order `p` in characteristic `p`.
//!
//! - [`rep`]: representations as multisets of indecomposable sizes, and
//!   their elementary invariants (`d`, `l`, `D_V`, Cohen-Macaulayness).
//! - [`shift`]: shift numbers `sht_V(j)` and strata dimensions `ν(M_j)`.
//! - [`discrepancy`]: `δ(X)`, the terminal/canonical/log-canonical
//!   classification and the accompanying bounds.
//! - [`explorer`]: enumeration of all representations, searches and tables.
//! - [`verify`]: an exhaustive property sweep.
//!
//! All arithmetic is exact; overflow of the 128-bit working width is
//! reported as [`Error::Overflow`].

pub mod arith;
pub mod discrepancy;
pub mod error;
pub mod explorer;
pub mod rep;
pub mod shift;
pub mod verify;

pub use discrepancy::{
    bounds, center_bounds, classify, delta, delta_oracle, format_rational, Bounds, CenterBounds, DeltaValue,
    LowerBoundPolicy, Rational, SingularityClass, SingularityReport,
};
pub use error::{Error, Result};
pub use explorer::{
    build_table, enumerate_reps, restricted_partition_count, run_search, ExplorerConfig, Objective, Predicate,
    SearchQuery, TableRow,
};
pub use rep::{parse_representation, Invariants, Prime, Representation};
pub use shift::{
    check_lemma_sht, check_lemma_upper, floor_sum, nu_stratum, shift_profile, shift_profile_with_cap, sht, JumpIndex,
    ShiftProfile,
};
pub use verify::{verify_sweep, VerifyReport};
