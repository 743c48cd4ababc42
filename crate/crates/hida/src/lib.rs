//! Finite-dimensional white-noise calculus.
//!
//! This crate works with truncated Wiener chaos expansions over N
//! independent standard Gaussian coordinates: formal sums
//! `sum_alpha c_alpha H_alpha` where `H_alpha(x) = prod_i He_{alpha_i}(x_i)`
//! is a product of probabilists' Hermite polynomials and the total degree
//! `|alpha|` is capped. On that representation it provides
//!
//! * the Wick product, Wick exponential and Wick inverse ([`wick`]),
//! * S- and T-transforms with Gauss-Hermite quadrature oracles
//!   ([`transforms`], [`quadrature`]),
//! * annihilation/creation operators, the canonical commutation relation
//!   and the chaos pairing ([`ccr`]),
//! * growth-order diagnostics for candidate S-transforms ([`growth`]),
//! * Skorohod integration and a Wick-type SDE solver on a time grid
//!   ([`stochastic`]),
//! * exact one-dimensional Hermite polynomial arithmetic ([`poly1d`]),
//! * a deterministic JSON interchange format ([`json`]) and seeded random
//!   expansion generators ([`sample`]).
//!
//! All term storage is ordered canonically (graded lexicographic), so every
//! computation is deterministic: equal inputs give bit-identical outputs,
//! independent of threading.

pub mod ccr;
pub mod chaos;
pub mod error;
pub mod growth;
pub mod json;
pub mod multi_index;
pub mod poly1d;
pub mod probe;
pub mod quadrature;
pub mod sample;
pub mod stochastic;
pub mod transforms;
pub mod wick;

pub use chaos::ChaosExpansion;
pub use error::{Error, Result};
pub use multi_index::{MultiIndex, DEGREE_CAP};
