//! Propositional, multivalued and fuzzy logic as commuting diagonal
//! observables, and Braitenberg vehicles controlled by them.
//!
//! Truth values are eigenvalues, interpretations are canonical basis states,
//! and the Born-rule mean value on a superposition of interpretations is a
//! fuzzy degree of truth.

pub mod basis;
pub mod binary;
pub mod braitenberg;
mod error;
pub mod formula;
pub mod fuzzy;
pub mod linop;
pub mod multivalued;
pub mod observable;
pub mod world;

pub use error::{Error, Result};
pub use linop::{ComplexVector, DensityMatrix, DiagonalOperator};
pub use observable::{Alphabet, LogicalObservable, TruthTable};
