//! Exact computations with chains, cobar constructions and simplicial
//! localization of reduced simplicial sets over ℚ and prime fields.

pub mod appendix;
pub mod chains;
pub mod coalgebra;
pub mod cobar;
pub mod equivalence;
pub mod error;
pub mod exec;
pub mod field;
pub mod homology;
pub mod simplicial;
pub mod sparse;
pub mod verdict;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
