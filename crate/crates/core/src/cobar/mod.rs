//! Cobar and bar constructions, presentations of degree-0 homology and the
//! localized cobar construction.

pub mod algebra;
pub mod bar;
pub mod free;
pub mod localize;
pub mod poly;

pub use algebra::{
    fundamental_bialgebra, h0_presentation, ideal_membership, presentation_map_check, tau_algebra, AlgebraOracle, AlgebraPresentation,
    MapCheck, PolyTensor,
};
pub use bar::{bar, FiniteDgAlgebra};
pub use free::{
    cobar, cobar_complex_slice, cobar_homology, cobar_map, lambda, CobarSlice, FreeDgAlgebra, FreeDgMap, Generator, TruncationSpec,
};
pub use localize::{localized_cobar, monoidlike_reps};
pub use poly::{Monomial, NcPolynomial};
