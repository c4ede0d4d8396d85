//! Workbench for symbolic dynamics over finitely generated groups:
//! group oracles, pattern codings and cylinder scans, a vertex shift on
//! the free group encoding rooted-tree structure, layered tiling rules
//! with a simulated machine layer, counting certificates for
//! non-sofic-ness, and substitutive Toeplitz codings.
//!
//! The crate is data-parallel by default via the `parallel` feature;
//! every parallel entry point has a sequential twin so results can be
//! compared exactly.

pub mod cert;
pub mod group;
pub mod lab;
pub mod par;
pub mod rooted;
pub mod subshift;
pub mod toeplitz;
pub mod tree;

pub use group::{Element, GenSym, GroupError, GroupOracle, GroupSpec, TranslationAction};
pub use rooted::{CellView, LayeredPatch, RuleViolation, Word};
pub use subshift::{Alphabet, Coding, MatchVerdict, Pattern, ScanReport, SubshiftError, Sym};
