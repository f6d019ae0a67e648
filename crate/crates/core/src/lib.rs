//! Exact symbolic toolkit for jet differentials and effective hyperbolicity bounds.
//!
//! The crate is organized bottom-up:
//!
//! - [`scalar`], [`poly`], [`series`]: exact rationals, sparse multivariate
//!   polynomials, truncated power series and curve germs.
//! - [`jet`]: jet polynomials, weighted degree and the canonical derivation.
//! - [`wronskian`]: Wronskian operators, jets of sections and the identities
//!   they satisfy on germs.
//! - [`fermat`]: Fermat-type sections, complete-intersection families and a
//!   finite-field smoothness probe.
//! - [`bounds`]: big-integer degree bounds, the degree decomposition and the
//!   hypothesis checker for jet ampleness.
//! - [`incidence`]: local intersection lengths, Plücker degrees and fiber
//!   finiteness on the universal incidence family.
//! - [`selftest`]: the acceptance criteria as runnable checks.
//! - [`cli`]: the command-line front end used by the `hyperjet` binary.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fermat;
pub mod ffield;
pub mod incidence;
pub mod jet;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod selftest;
pub mod series;
pub mod wronskian;

pub use error::{Error, Result};
pub use jet::{JetPoly, JetSpace, Weight};
pub use poly::MultiPoly;
pub use scalar::Scalar;
pub use series::{CurveGerm, ReparamGerm, TruncatedSeries};
