use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::semiring_core::{all_permutations, single_cycles, Permutation, SignPattern};

/// Two-colouring of the Birkhoff graph induced by a sign pattern. Edges are
/// pairs of positions in `vertices` (lexicographic order), smaller first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthantColoring {
    pub n: usize,
    pub sign_pattern: SignPattern,
    pub vertices: Vec<Permutation>,
    pub green_edges: Vec<(usize, usize)>,
    pub red_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub holds: bool,
    /// Connected components of the red subgraph, each sorted, by smallest member.
    pub components: Vec<Vec<usize>>,
}

/// All edges `(σ, π)` of the Birkhoff graph on `S_n` as lexicographic ranks, sorted.
pub fn birkhoff_edges(n: usize) -> Vec<(usize, usize)> {
    let vertices: Vec<Permutation> = all_permutations(n).collect();
    let cycles = single_cycles(n);
    let mut edges: Vec<(usize, usize)> = vertices
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, sigma)| {
            cycles.iter().filter_map(move |c| {
                let b = c.compose(sigma).expect("same length").lex_rank();
                (a < b).then_some((a, b))
            })
        })
        .collect();
    edges.sort_unstable();
    edges
}

fn twisted_sign(sigma: &Permutation, s: &SignPattern) -> i8 {
    (0..sigma.len()).fold(sigma.sign(), |acc, i| acc * s.get(i, sigma.apply(i)))
}

pub fn orthant_coloring(n: usize, s: &SignPattern) -> Result<OrthantColoring> {
    orthant_coloring_with(n, s, &Budget::default())
}

/// Edge `(σ, π)` is green iff `sgn(σ) Π s[i][σ(i)] != sgn(π) Π s[i][π(i)]`.
pub fn orthant_coloring_with(n: usize, s: &SignPattern, budget: &Budget) -> Result<OrthantColoring> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > budget.max_birkhoff_n {
        return Err(Error::Budget(format!("n = {n} exceeds the Birkhoff graph bound {}", budget.max_birkhoff_n)));
    }
    if (s.rows(), s.cols()) != (n, n) {
        return Err(Error::Dimension(format!("{}x{} sign pattern for n = {n}", s.rows(), s.cols())));
    }
    let vertices: Vec<Permutation> = all_permutations(n).collect();
    let signs: Vec<i8> = vertices.iter().map(|v| twisted_sign(v, s)).collect();
    let (green_edges, red_edges) = birkhoff_edges(n).into_iter().partition(|&(a, b)| signs[a] != signs[b]);
    Ok(OrthantColoring { n, sign_pattern: s.clone(), vertices, green_edges, red_edges })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Red edges must form exactly two components covering every vertex, with the
/// green edges being precisely the edges between them.
pub fn verify_cut_property(oc: &OrthantColoring) -> CutReport {
    let count = oc.vertices.len();
    let mut parent: Vec<usize> = (0..count).collect();
    for &(a, b) in &oc.red_edges {
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..count {
        let root = find(&mut parent, v);
        groups.entry(root).or_default().push(v);
    }
    let mut components: Vec<Vec<usize>> = groups.into_values().collect();
    components.sort();
    let holds = components.len() == 2 && {
        let root0 = find(&mut parent, components[0][0]);
        oc.green_edges.iter().all(|&(a, b)| (find(&mut parent, a) == root0) != (find(&mut parent, b) == root0))
    };
    CutReport { holds, components }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_counts() {
        assert_eq!(birkhoff_edges(2).len(), 1);
        assert_eq!(birkhoff_edges(3).len(), 15);
        assert_eq!(birkhoff_edges(4).len(), 240);
    }

    #[test]
    fn trivial_pattern_at_three() {
        let oc = orthant_coloring(3, &SignPattern::all_positive(3, 3)).unwrap();
        assert_eq!((oc.green_edges.len(), oc.red_edges.len()), (9, 6));
        let rep = verify_cut_property(&oc);
        assert!(rep.holds);
        let even: Vec<usize> = (0..6).filter(|&k| oc.vertices[k].is_even()).collect();
        assert!(rep.components.contains(&even));
    }

    #[test]
    fn small_cases() {
        let oc = orthant_coloring(2, &SignPattern::from_mask(2, 2, 0b0110)).unwrap();
        assert_eq!(oc.vertices.len(), 2);
        assert_eq!(oc.green_edges.len() + oc.red_edges.len(), 1);
        assert!(verify_cut_property(&oc).holds);
        assert!(orthant_coloring(1, &SignPattern::all_positive(1, 1)).is_ok());
        assert!(matches!(orthant_coloring(7, &SignPattern::all_positive(7, 7)), Err(Error::Budget(_))));
        assert!(matches!(orthant_coloring(3, &SignPattern::all_positive(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn single_flip_recolors_exactly_the_predicted_edges() {
        let base = SignPattern::from_mask(4, 4, 0b1010_0011_0100_1001);
        let before = orthant_coloring(4, &base).unwrap();
        for (k, l) in [(0, 0), (1, 3), (3, 2)] {
            let after = orthant_coloring(4, &base.flipped(k, l)).unwrap();
            for &(a, b) in before.green_edges.iter().chain(&before.red_edges) {
                let was = before.green_edges.binary_search(&(a, b)).is_ok();
                let now = after.green_edges.binary_search(&(a, b)).is_ok();
                let (s, p) = (&before.vertices[a], &before.vertices[b]);
                let predicted = (s.apply(k) == l) != (p.apply(k) == l);
                assert_eq!(was != now, predicted);
            }
        }
    }
}
