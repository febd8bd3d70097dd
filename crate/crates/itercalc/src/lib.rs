//! Exact symbolic algebra for words over the rational function field Q(z):
//! shuffle and generalized stuffle products, bracket-weighted derivations,
//! Mobius pullbacks and the duality map, exhaustive identity sweeps, and a
//! floating-point evaluator for the associated iterated integrals.

pub mod derivations;
pub mod error;
pub mod ncalgebra;
pub mod numeric;
pub mod parse;
pub mod products;
pub mod ratfield;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use ncalgebra::{NcPoly, Word};
pub use ratfield::{GradingMap, MobiusMap, ProjPoint, RatFun};
