//! Germs of execution paths in finite flows.
//!
//! `germ` models concurrent systems as *flows*: a finite set of states, a
//! finite simplicial set of nonconstant execution paths between each
//! ordered pair of states, and an associative composition. On top of that
//! model it computes the branching and merging spaces (the spaces of germs
//! of paths that start, or end, the same way), branching homology with its
//! long exact sequence for a cone, and the graded dihomotopy equivalence
//! checks used to compare models of the same system.
//!
//! Everything is exact: spaces are finite simplicial sets, homology is
//! integral via Smith normal form, and every claimed identification is a
//! literal colimit computation. See the `book/` directory for a guided
//! tour.

pub mod matrix;
pub mod simplicial;
pub mod chains;
pub mod constructions;
pub mod flow;
pub mod branching;
pub mod homology;
pub mod dihomotopy;
pub mod fixtures;
pub mod documents;
pub mod cli;
pub mod book;

pub use branching::{branching_space, merging_space, GermSpace, Mode, Side};
pub use chains::{is_homology_point, normalized_chains, pi0, AbelianGroup, ChainComplex};
pub use cli::cli_main;
pub use constructions::{
    boundary_simplex, cone, mapping_cone, nerve_of_poset, point, product, product_many, quotient,
    standard_simplex, ProductComplex,
};
pub use flow::{Flow, FlowError, FlowMorphism};
pub use matrix::{smith_normal_form, IntegerMatrix, Smith};
pub use simplicial::{ComplexBuilder, FiniteSimplicialSet, SimplexId, SimplexRef, SimplicialMap};
