//! Exact combinatorics for cohomologically induced `A_q(λ)` modules of `U(p,q)`.
//!
//! Modules are encoded as chains of consecutive integers tagged with block
//! sizes `(p_i, q_i)`. From a chain this crate computes range flags, the
//! infinitesimal character, the multiplicity condition on repeated entries
//! and the Dirac index, the latter by two independent routes:
//!
//! * [`dirac::brute_force_index`] sums signed regularised K̃-types over every
//!   tuple of per-block shuffles;
//! * [`dirac::structured_index`] solves the small integer system that
//!   distributes repeated entries between the two blocks of `K` and assigns
//!   closed-form binomial multiplicities.
//!
//! The [`spin`] module carries the spin-module and u-small utilities.
//!
//! All arithmetic is exact. Weight coordinates are half-integers stored as
//! doubled `i64` values.

pub mod chains;
pub mod dirac;
mod error;
pub mod sample;
pub mod spin;
pub mod weights;

pub use chains::{AqChain, HalfSums, HpCheck, RangeFlags, SignedChain};
pub use dirac::{ETilde, SolutionMatrix, VirtualKSum};
pub use error::{Error, Result};
pub use spin::SpinDecomposition;
pub use weights::{BiWeight, BlockSort, HalfRat, Shuffle, Sign};
