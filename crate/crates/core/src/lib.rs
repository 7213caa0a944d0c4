//! Numerical tools for the Chebyshev-Halley family of root-finding operators
//! applied to `z^n - 1`.

pub mod connectivity;
pub mod error;
pub mod landmarks;
pub mod operator;
pub mod orbits;
pub mod parallel;
pub mod parse;
pub mod polyroots;
pub mod render;
pub mod sphere;

pub use error::{Error, Result};
pub use operator::{FamilyParams, Operator, OperatorForm};
pub use sphere::{Complex, SpherePoint};
