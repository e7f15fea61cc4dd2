//! Exact symbolic computation for cluster algebras of geometric type.
//!
//! The crate provides, over arbitrary-precision rational arithmetic:
//!
//! - sparse multivariate Laurent polynomials ([`laurent`]);
//! - exchange matrices, seeds, classical mutation, and bounded
//!   mutation-class enumeration ([`seed`]);
//! - log-canonical Poisson brackets, compatible pairs and their mutation,
//!   monomial extraction, and descent certificates ([`poisson`]);
//! - the quantum torus, toric frames, quantum seed mutation, and the
//!   quantum analogues of the extraction and descent arguments
//!   ([`quantum`]);
//! - JSON/DOT serialization of seeds, certificates, and traces ([`io`]).
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything can be shared freely across threads.

pub mod exponent;
pub mod intmat;
pub mod io;
pub mod laurent;
pub mod poisson;
pub mod quantum;
pub mod sample;
pub mod seed;

pub use exponent::Exponent;
pub use laurent::LaurentPolynomial;
pub use poisson::PoissonMatrix;
pub use seed::{ExchangeMatrix, Seed};
