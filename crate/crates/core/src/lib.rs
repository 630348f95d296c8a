//! Finite-blocklength confusion and erasure bounds for error-bounded
//! maximum-likelihood block decoders over AWGN.
//!
//! A decoder that is only allowed a total block error rate `ε` accepts the
//! nearest codeword when the received vector lies within the decision radius
//! `R(ε)` of it, and declares an erasure otherwise. Block errors then split
//! into *confusions* (the received vector lands inside a wrong codeword's
//! decision sphere) and *erasures* (it lands outside every sphere). This crate
//! computes analytic lower and upper bounds on both rates and a Monte Carlo
//! simulator that checks them.
//!
//! Module map:
//!
//! * [`specfun`]: log-gamma, incomplete gamma/beta, chi distribution,
//!   log-binomials and the [`Probability`] value type.
//! * [`quadrature`]: adaptive Gauss-Legendre integration.
//! * [`geometry`]: cap angle and hypersphere cap fraction.
//! * [`distance`]: system configuration, Hamming-distance bounds and
//!   the M-ary entropy machinery.
//! * [`bounds`]: decision radius, pairwise confusion probability and the
//!   confusion/erasure rate bounds.
//! * [`sim`]: codebooks, bounded ML decoding and Monte Carlo estimators.
//! * [`verify`]: executable monotonicity/convexity/discontinuity checks.

pub mod bounds;
pub mod distance;
mod error;
pub mod geometry;
pub mod quadrature;
pub mod sim;
pub mod specfun;
pub mod verify;

pub use bounds::{OperatingPoint, PairProbability, RateBounds};
pub use distance::{DistanceBounds, DistanceUnit, EnergySpec, SystemConfig};
pub use error::{Error, Result};
pub use geometry::CapAngle;
pub use sim::{Codebook, Constellation, DecodeOutcome, OutcomeKind, RateEstimate, TrialSummary};
pub use specfun::Probability;
