//! Nested coset coding over rank-metric codes.
//!
//! Everything is exact: arithmetic happens in small extension fields
//! `F_{q^m}` (q = p prime), subspace scans enumerate the family
//! `Γ(F_{q^m}^n)` of Frobenius-invariant subspaces, and security /
//! error-correction parameters are computed both from their defining
//! formulas and from independent exhaustive oracles so the two routes can
//! be compared in tests.
//!
//! Module map:
//! - [`fields`]: `F_p` and `F_{q^m}` arithmetic, Frobenius, base-field expansion.
//! - [`linalg`]: exact matrices over both fields, rank over `F_q`, Galois
//!   closure, enumeration of `Γ` by dimension.
//! - [`codes`]: linear codes over `F_{q^m}`, duals, Gabidulin codes,
//!   puncturing/shortening, brute-force minimum rank distance.
//! - [`rparams`]: the relative dimension/intersection profile and the
//!   relative generalized rank weight of a nested code pair.
//! - [`coset`]: the nested coset encoder/decoder and the extended-code
//!   constructions behind strong security.
//! - [`security`]: universal equivocation, leakage thresholds, strong
//!   security order, exhaustive entropy oracles.
//! - [`netcode`]: transfer-matrix network model, discrepancy decoding,
//!   exhaustive adversarial sweeps.
//! - [`io`]: JSON file formats for fields, pairs, networks, distributions.
//! - [`fixtures`]: the built-in desk-scale reference instances.

use thiserror::Error;

pub mod codes;
pub mod coset;
pub mod fields;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod netcode;
pub mod rparams;
pub mod security;

/// Default cap on scan work (subspaces visited plus codewords enumerated).
pub const DEFAULT_BUDGET_OPS: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("codes are not strictly nested")]
    NotNested,
    #[error("vector not in the expected code")]
    NotInCode,
    #[error("scan budget exceeded: needs {needed} ops, budget {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
