//! Exact symbolic calculus for Jacobi manifolds and Dirac structures.
//!
//! Everything is computed on a single coordinate chart with polynomial
//! coefficients over the rationals, so every identity check is an exact
//! normal-form comparison.

pub mod cli;
pub mod courant;
pub mod dirac;
pub mod error;
pub mod extbundle;
pub mod exterior;
pub mod linalg;
pub mod poly;
pub mod reduce;
pub mod report;
pub mod sampling;

pub use error::{Error, Result};
pub use extbundle::{BracketMode, JacobiStructure};
pub use exterior::{ExtForm, ExtVec, Field, Form, MultiVec};
pub use poly::{rat, Chart, Poly, Rational};
pub use report::{Check, CheckReport};
