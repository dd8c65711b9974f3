//! Tropical determinantal varieties in exact arithmetic.
//!
//! Matrices live in the min-plus semiring. The crate decides membership in the
//! determinantal prevarieties, brackets the Kapranov rank, and produces
//! combinatorial certificates of (non-)positivity: sign data of optimal
//! permutations, cartoons of Birkhoff edges, bipartite labels, bicolored trees
//! and starships on tropical planes.

pub mod birkhoff_positivity;
pub mod budget;
pub mod dot;
pub mod error;
pub mod label_graphs;
pub mod plane_toolkit;
pub mod random;
pub mod rank_engine;
pub mod semiring_core;
pub mod tree_space;

pub use budget::Budget;
pub use error::{Error, Result};
pub use semiring_core::{
    canonicalize_mod_lineality, is_birkhoff_edge, is_tropically_singular, perm_sign, submatrix, tropical_det,
    MinorIndex, Permutation, Rational, SignPattern, TropicalDet, TropicalMatrix,
};
