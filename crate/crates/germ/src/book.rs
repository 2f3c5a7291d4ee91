//! Keeps the book honest: every fenced Rust block in `book/src/` is
//! compiled and run as a doctest of this module, one module per chapter
//! so failures name their chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/simplicial-sets.md")]
pub mod simplicial_sets {}

#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology_chapter {}

#[doc = include_str!("../../../book/src/flows.md")]
pub mod flows_chapter {}

#[doc = include_str!("../../../book/src/branching.md")]
pub mod branching_chapter {}

#[doc = include_str!("../../../book/src/branching-homology.md")]
pub mod branching_homology_chapter {}

#[doc = include_str!("../../../book/src/equivalences.md")]
pub mod equivalences_chapter {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_chapter {}
