//! Exact character theory for small pi-separable permutation groups.
//!
//! Everything is computed in exact arithmetic: group elements are
//! permutations, character values live in cyclotomic fields over
//! arbitrary-precision rationals. The crate builds irreducible character
//! tables (Dixon-Schneider), pi-partial character tables, character towers
//! and self-stabilizing pairs along normal pi-series, and runs the
//! verification suites exposed by the `pilift` binary.

pub mod builtins;
pub mod chartab;
pub mod cli;
pub mod cyclotomic;
pub mod fp;
pub mod group;
pub mod lift_analysis;
pub mod perm;
pub mod pi_theory;
pub mod primes;
pub mod series;
pub mod towers;
pub mod verification;

pub use chartab::{character_table, CharTable, Character, ClassFunction};
pub use cyclotomic::Cyc;
pub use group::{Group, Subgroup};
pub use perm::Perm;
pub use primes::PrimeSet;
pub use series::NormalPiSeries;

use thiserror::Error;

/// Errors surfaced by the engine. Verification anomalies are *not* errors:
/// they are recorded in reports so batch runs always complete.
#[derive(Debug, Error)]
pub enum Error {
    #[error("bad permutation: {0}")]
    BadPerm(String),
    #[error("group order exceeds the configured cap of {cap}")]
    OrderCap { cap: usize },
    #[error("set of elements is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("class functions belong to different groups")]
    GroupMismatch,
    #[error("group is not pi-separable for pi = {0}")]
    NotPiSeparable(String),
    #[error("action does not define a semidirect product: {0}")]
    BadAction(String),
    #[error("character table construction failed: {0}")]
    Table(String),
    #[error("engine invariant violated: {0}")]
    Internal(String),
    #[error("invalid argument: {0}")]
    InvalidArg(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
