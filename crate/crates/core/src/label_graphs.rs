//! Bipartite labels of cones in the determinantal prevariety.
//!
//! The label of a matrix collects, over all `(r+1)`-minors, the row/column
//! pairs used by some optimal permutation of that minor.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rank_engine::prevariety_member_with;
use crate::semiring_core::{minor_indices, tropical_det_with, MinorIndex, Permutation, TropicalMatrix};

/// `σ^{IJ}`: the map `i_k ↦ j_{σ(k)}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EmbeddedPermutation {
    pub index: MinorIndex,
    pub sigma: Permutation,
}

impl EmbeddedPermutation {
    pub fn new(index: MinorIndex, sigma: Permutation) -> Result<Self> {
        if sigma.len() != index.size() {
            return Err(Error::Dimension(format!("permutation on {} points for a {}-minor", sigma.len(), index.size())));
        }
        Ok(EmbeddedPermutation { index, sigma })
    }

    /// The pairs `(i_k, j_{σ(k)})`, 0-based.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.index.rows.iter().enumerate().map(|(k, &i)| (i, self.index.cols[self.sigma.apply(k)])).collect()
    }
}

impl fmt::Display for EmbeddedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.sigma, self.index)
    }
}

/// The argmin set `Λ(I, J)` of the minor, as embedded permutations.
pub fn minor_argmin_face(a: &TropicalMatrix, ij: &MinorIndex) -> Result<Vec<EmbeddedPermutation>> {
    ij.check_bounds(a.rows(), a.cols())?;
    let det = tropical_det_with(&a.submatrix_unchecked(&ij.rows, &ij.cols), &Budget::default())?;
    Ok(det.optima.into_iter().map(|sigma| EmbeddedPermutation { index: ij.clone(), sigma }).collect())
}

/// Bipartite graph on rows `r_1..r_d` and columns `g_1..g_n`; edges are 0-based `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteLabel {
    pub d: usize,
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Serialize for BipartiteLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            d: usize,
            n: usize,
            edges: Vec<String>,
        }
        Json { d: self.d, n: self.n, edges: self.edges.iter().map(|&(i, j)| format!("r{}g{}", i + 1, j + 1)).collect() }
            .serialize(s)
    }
}

impl BipartiteLabel {
    pub fn new(d: usize, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= d || j >= n) {
            return Err(Error::IndexOutOfRange(format!("edge r{}g{} outside {d}+{n} vertices", i + 1, j + 1)));
        }
        Ok(BipartiteLabel { d, n, edges })
    }

    /// Builds a label from 1-based `(i, j)` pairs.
    pub fn one_based(d: usize, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(Error::IndexOutOfRange("label vertices are 1-based".into()));
        }
        BipartiteLabel::new(d, n, edges.iter().map(|&(i, j)| (i - 1, j - 1)))
    }

    pub fn complete(d: usize, n: usize) -> Self {
        BipartiteLabel { d, n, edges: (0..d).cartesian_product(0..n).collect() }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn red_degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == i).count()
    }

    pub fn green_degree(&self, j: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == j).count()
    }
}

pub fn label_graph(a: &TropicalMatrix, r: usize) -> Result<BipartiteLabel> {
    label_graph_with(a, r, &Budget::default())
}

/// Union over all `(r+1)`-minors of the pairs used by their optimal permutations.
pub fn label_graph_with(a: &TropicalMatrix, r: usize, budget: &Budget) -> Result<BipartiteLabel> {
    let pv = prevariety_member_with(a, r, budget)?;
    if let Some(w) = pv.witness {
        return Err(Error::NotInPrevariety(w));
    }
    let (d, n) = (a.rows(), a.cols());
    if r == d.min(n) {
        // No (r+1)-minors; the union is empty.
        return Ok(BipartiteLabel { d, n, edges: BTreeSet::new() });
    }
    let parts: Vec<BTreeSet<(usize, usize)>> = minor_indices(d, n, r + 1)
        .par_iter()
        .map(|ij| {
            let det = tropical_det_with(&a.submatrix_unchecked(&ij.rows, &ij.cols), budget)?;
            let mut used = BTreeSet::new();
            for sigma in det.optima {
                used.extend(EmbeddedPermutation { index: ij.clone(), sigma }.pairs());
            }
            Ok(used)
        })
        .collect::<Result<_>>()?;
    Ok(BipartiteLabel { d, n, edges: parts.into_iter().flatten().collect() })
}

pub fn bipartite_complement(g: &BipartiteLabel) -> BipartiteLabel {
    let edges = (0..g.d).cartesian_product(0..g.n).filter(|&(i, j)| !g.has_edge(i, j)).collect();
    BipartiteLabel { d: g.d, n: g.n, edges }
}

/// Rows have degree at least `n - r`, columns at least `d - r`.
pub fn label_degree_check(g: &BipartiteLabel, r: usize) -> bool {
    (0..g.d).all(|i| g.red_degree(i) + r >= g.n) && (0..g.n).all(|j| g.green_degree(j) + r >= g.d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelCycleCheck {
    pub holds: bool,
    /// First `(I, J)` whose induced subgraph has no even-length witness.
    pub violation: Option<MinorIndex>,
}

/// Whether the reds `rs` and greens `gs` (same size) admit a perfect matching.
fn has_perfect_matching(g: &BipartiteLabel, rs: &[usize], gs: &[usize]) -> bool {
    gs.iter().copied().permutations(gs.len()).any(|p| rs.iter().zip(&p).all(|(&i, &j)| g.has_edge(i, j)))
}

/// Whether `rs ⊔ gs` (both of size `l >= 2`) carry a Hamiltonian cycle.
fn has_hamiltonian_cycle(g: &BipartiteLabel, rs: &[usize], gs: &[usize]) -> bool {
    let l = rs.len();
    // Cycle r_0 g_{p0} r_{q0} g_{p1} r_{q1} ... back to r_0.
    rs[1..].iter().copied().permutations(l - 1).any(|tail| {
        let order: Vec<usize> = std::iter::once(rs[0]).chain(tail).collect();
        gs.iter().copied().permutations(l).any(|p| {
            (0..l).all(|k| g.has_edge(order[k], p[k]) && g.has_edge(order[(k + 1) % l], p[k]))
        })
    })
}

/// A `2l`-cycle with `l` even plus a perfect matching on the rest of `I ⊔ J`.
fn has_even_witness(g: &BipartiteLabel, rows: &[usize], cols: &[usize]) -> bool {
    let k = rows.len();
    (2..=k).step_by(2).any(|l| {
        rows.iter().copied().combinations(l).any(|rs| {
            let rest_r: Vec<usize> = rows.iter().copied().filter(|x| !rs.contains(x)).collect();
            cols.iter().copied().combinations(l).any(|gs| {
                let rest_g: Vec<usize> = cols.iter().copied().filter(|x| !gs.contains(x)).collect();
                has_hamiltonian_cycle(g, &rs, &gs) && has_perfect_matching(g, &rest_r, &rest_g)
            })
        })
    })
}

/// Necessary condition for positivity: every `(r+1) + (r+1)` induced subgraph
/// contains an even-`l` cycle-plus-matching.
pub fn label_positivity_necessary(g: &BipartiteLabel, r: usize) -> Result<LabelCycleCheck> {
    if r == 0 || r >= g.d.min(g.n) {
        return Err(Error::InvalidArgument(format!("rank {r} outside 1..{}", g.d.min(g.n))));
    }
    if r + 1 > 6 {
        return Err(Error::Budget(format!("{}-minors exceed the cycle search bound", r + 1)));
    }
    let violation = minor_indices(g.d, g.n, r + 1).into_par_iter().find_first(|ij| !has_even_witness(g, &ij.rows, &ij.cols));
    Ok(LabelCycleCheck { holds: violation.is_none(), violation })
}

/// For labels of maximal rank-2 cones: positive iff the complement is two
/// vertex-disjoint paths with two edges each.
pub fn rank2_label_is_positive(g: &BipartiteLabel) -> bool {
    let c = bipartite_complement(g);
    if c.edges.len() != 4 {
        return false;
    }
    // Vertices: reds 0..d, greens d..d+n.
    let deg = |v: usize| if v < c.d { c.red_degree(v) } else { c.green_degree(v - c.d) };
    let centers: Vec<usize> = (0..c.d + c.n).filter(|&v| deg(v) == 2).collect();
    let touched: Vec<usize> = (0..c.d + c.n).filter(|&v| deg(v) > 0).collect();
    centers.len() == 2 && touched.len() == 6 && touched.iter().all(|&v| deg(v) <= 2) && {
        let adjacent = |u: usize, v: usize| {
            let (r, gr) = if u < c.d { (u, v) } else { (v, u) };
            r < c.d && gr >= c.d && c.has_edge(r, gr - c.d)
        };
        !adjacent(centers[0], centers[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m<R: AsRef<[i64]>>(rows: &[R]) -> TropicalMatrix {
        TropicalMatrix::from_ints(rows)
    }

    fn label_example() -> TropicalMatrix {
        m(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])
    }

    #[test]
    fn argmin_faces() {
        let a = label_example();
        let face = minor_argmin_face(&a, &MinorIndex::one_based(&[1, 2, 3], &[1, 2, 3]).unwrap()).unwrap();
        let names: Vec<String> = face.iter().map(|e| e.sigma.to_string()).collect();
        assert_eq!(names, vec!["(123)", "(132)"]);
        let face = minor_argmin_face(&a, &MinorIndex::one_based(&[1, 2, 3], &[1, 3, 4]).unwrap()).unwrap();
        let names: Vec<String> = face.iter().map(|e| e.sigma.to_string()).collect();
        assert_eq!(names, vec!["(123)", "(13)"]);
        assert_eq!(face[1].pairs(), vec![(0, 3), (1, 2), (2, 0)]);
        let zero = TropicalMatrix::zeros(3, 3);
        assert_eq!(minor_argmin_face(&zero, &MinorIndex::full(3)).unwrap().len(), 6);
    }

    #[test]
    fn label_of_the_example_cone() {
        let g = label_graph(&label_example(), 2).unwrap();
        let expected = BipartiteLabel::one_based(3, 4, &[(1, 1), (2, 2), (3, 3), (3, 4)]).unwrap();
        assert_eq!(bipartite_complement(&g), expected);
        assert!(label_degree_check(&g, 2));
        let degrees: Vec<usize> = (0..3).map(|i| g.red_degree(i)).collect();
        assert_eq!(degrees, vec![3, 3, 2]);
        assert!(!rank2_label_is_positive(&g));
        assert_eq!(label_graph(&TropicalMatrix::zeros(3, 4), 2).unwrap(), BipartiteLabel::complete(3, 4));
        assert!(matches!(label_graph(&m(&[[0, 1], [1, 0]]), 1), Err(Error::NotInPrevariety(_))));
    }

    #[test]
    fn difference_example_fails_the_cycle_condition() {
        let a = m(&[[1, 0, 0], [0, 1, 0], [0, 0, 2], [0, 0, 1]]);
        let g = label_graph(&a, 2).unwrap();
        let expected = BipartiteLabel::one_based(
            4,
            3,
            &[(1, 2), (3, 2), (3, 1), (2, 1), (2, 3), (1, 3), (4, 1), (4, 2)],
        )
        .unwrap();
        assert_eq!(g, expected);
        let check = label_positivity_necessary(&g, 2).unwrap();
        assert!(!check.holds);
        assert_eq!(check.violation, Some(MinorIndex::one_based(&[1, 2, 3], &[1, 2, 3]).unwrap()));
    }

    #[test]
    fn cycle_condition_passes_on_positive_input() {
        let g = label_graph(&m(&[[0, 0, 2], [0, 0, 1], [3, 1, 0]]), 2).unwrap();
        assert!(label_positivity_necessary(&g, 2).unwrap().holds);
        assert!(label_positivity_necessary(&BipartiteLabel::complete(3, 3), 2).unwrap().holds);
    }

    #[test]
    fn degree_checks() {
        assert!(!label_degree_check(&BipartiteLabel::new(3, 3, []).unwrap(), 2));
        assert!(label_degree_check(&BipartiteLabel::complete(3, 5), 1));
    }

    #[test]
    fn rank_two_shapes() {
        let comp = |edges: &[(usize, usize)]| {
            bipartite_complement(&BipartiteLabel::one_based(3, 3, edges).unwrap())
        };
        // g1 r1 g2 and r2 g3 r3.
        assert!(rank2_label_is_positive(&comp(&[(1, 1), (1, 2), (2, 3), (3, 3)])));
        assert!(!rank2_label_is_positive(&comp(&[(1, 1), (2, 2), (3, 3)])));
        // One path of length four is not two paths.
        assert!(!rank2_label_is_positive(&comp(&[(1, 1), (1, 2), (2, 2), (2, 3)])));
        assert!(!rank2_label_is_positive(&comp(&[(1, 1), (1, 2), (1, 3), (2, 1)])));
    }

    #[test]
    fn complement_is_an_involution() {
        let g = BipartiteLabel::one_based(2, 3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(bipartite_complement(&bipartite_complement(&g)), g);
        assert!(bipartite_complement(&BipartiteLabel::complete(2, 3)).edges.is_empty());
    }
}
