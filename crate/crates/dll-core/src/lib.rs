//! Proof engine for the multi-type display calculus of lattice logic.
//!
//! The crate is organised bottom-up:
//!
//! * [`syntax`]: formulas, sorted terms and structures, parsing and printing.
//! * [`calculus`]: the rule set as data, with matching and instantiation.
//! * [`kernel`]: derivations, the checker, the display engine and proof files.
//! * [`reconstruct`]: rebuilding derivations from sequent skeletons.
//! * [`translate`]: translations of lattice formulas and derivation generators.
//! * [`cutelim`]: principal reductions and a cut-elimination driver.
//! * [`semantics`]: finite lattices, their heterogeneous representation and validity.
//! * [`search`]: bounded backward proof search and deadlock reports.
//! * [`render`]: text and LaTeX rendering of derivations.

pub mod calculus;
pub mod cutelim;
pub mod error;
pub mod kernel;
pub mod reconstruct;
pub mod render;
pub mod search;
pub mod semantics;
pub mod syntax;
pub mod translate;

pub use error::{ParseError, PathError, SortError, SyntaxError};
