//! Noncommutative polynomials in `x, y` over the rationals, the shuffle and
//! harmonic products, truncated parameter series, the operators acting on
//! them, and the derivation-relation machinery for the restricted sum formula
//! for multiple zeta values.

pub mod composition;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod numeric;
pub mod operators;
pub mod poly;
pub mod products;
pub mod relations;
pub mod series;
pub mod suites;
pub mod word;

pub type Rational = num_rational::BigRational;

pub use composition::Composition;
pub use error::{Error, Result};
pub use identities::{IdentityName, IdentityReport};
pub use numeric::{EvalResult, ZetaEvaluator};
pub use poly::NCPoly;
pub use products::Product;
pub use relations::{decompose, Certificate, CertificateTerm, Decomposer};
pub use series::{Param, ParamSeries};
pub use suites::{run_suite, Suite, SuiteConfig};
pub use word::{Letter, Word};
