//! Exact enumeration of 132-avoiding permutations by the number of
//! occurrences of the increasing pattern `12...k`.
//!
//! Every count is available by three independent routes:
//!
//! - [`permcore`]: brute-force enumeration of the permutations themselves,
//! - [`cfengine`]: continued fractions evaluated as truncated bivariate
//!   series ([`bigseries::BiSeries`]),
//! - [`chebgf`]: rational closed forms built from Chebyshev polynomials of
//!   the second kind, cleared to integer polynomials.
//!
//! [`verify`] cross-checks the routes against each other.

pub mod bigseries;
pub mod binom;
pub mod cfengine;
pub mod chebgf;
pub mod error;
pub mod permcore;
pub mod verify;

pub use bigseries::BiSeries;
pub use chebgf::{RationalGF, XPolynomial};
pub use error::{Error, Result};
pub use permcore::{OccurrenceProfile, Permutation};
