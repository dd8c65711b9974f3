//! Exact min-plus arithmetic, matrices, permutations and minors.

mod det;
mod matrix;
pub mod perm;
mod rational;

pub use det::{
    canonicalize_mod_lineality, det_by_potentials, is_tropically_singular, tropical_det, tropical_det_with, TropicalDet,
};
pub use matrix::{MinorIndex, SignPattern, TropicalMatrix};
pub use perm::{all_permutations, is_birkhoff_edge, perm_sign, single_cycles, Permutation};
pub use rational::Rational;

use crate::error::Result;

pub fn submatrix(a: &TropicalMatrix, ij: &MinorIndex) -> Result<TropicalMatrix> {
    a.submatrix(ij)
}

/// All `k`-subsets of `{0..n-1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

/// All `k x k` minor indices of a `d x n` matrix, ordered lexicographically by `(I, J)`.
pub fn minor_indices(d: usize, n: usize, k: usize) -> Vec<MinorIndex> {
    let rows = subsets(d, k);
    let cols = subsets(n, k);
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for i in &rows {
        for j in &cols {
            out.push(MinorIndex { rows: i.clone(), cols: j.clone() });
        }
    }
    out
}
