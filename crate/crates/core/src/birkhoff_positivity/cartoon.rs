use itertools::Itertools;
use serde::Serialize;

use super::require_edge;
use crate::error::Result;
use crate::semiring_core::Permutation;

/// Decorated complete graph on `n` nodes: one mark per column, either on an
/// edge (the two rows attaining it differ) or on a node. Nodes are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cartoon {
    pub n: usize,
    /// Unordered pairs stored as `(a, b)` with `a < b`, sorted.
    pub edge_marks: Vec<(usize, usize)>,
    pub node_marks: Vec<usize>,
}

#[derive(Serialize)]
struct CartoonJson {
    n: usize,
    edge_marks: Vec<[usize; 2]>,
    node_marks: Vec<usize>,
}

impl Serialize for Cartoon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CartoonJson {
            n: self.n,
            edge_marks: self.edge_marks.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            node_marks: self.node_marks.iter().map(|x| x + 1).collect(),
        }
        .serialize(s)
    }
}

impl Cartoon {
    pub fn mark_count(&self) -> usize {
        self.edge_marks.len() + self.node_marks.len()
    }
}

/// Column `j` marks the pair `{σ⁻¹(j), π⁻¹(j)}`, or the node when they agree.
pub fn cartoon_of_edge(sigma: &Permutation, pi: &Permutation) -> Result<Cartoon> {
    require_edge(sigma, pi)?;
    let (si, pinv) = (sigma.inverse(), pi.inverse());
    let mut edge_marks = Vec::new();
    let mut node_marks = Vec::new();
    for j in 0..sigma.len() {
        let (a, b) = (si.apply(j), pinv.apply(j));
        if a == b {
            node_marks.push(a);
        } else {
            edge_marks.push((a.min(b), a.max(b)));
        }
    }
    edge_marks.sort_unstable();
    node_marks.sort_unstable();
    Ok(Cartoon { n: sigma.len(), edge_marks, node_marks })
}

/// Three distinct marks assignable injectively to the sides of a node triangle,
/// each lying on its side or on one of the side's endpoints.
pub fn cartoon_has_marked_triangle(c: &Cartoon) -> bool {
    // Marks as (node, node); a node mark is (x, x).
    let marks: Vec<(usize, usize)> = c.edge_marks.iter().copied().chain(c.node_marks.iter().map(|&x| (x, x))).collect();
    let fits = |mark: (usize, usize), u: usize, v: usize| {
        let side = (u.min(v), u.max(v));
        if mark.0 == mark.1 {
            mark.0 == u || mark.0 == v
        } else {
            mark == side
        }
    };
    (0..c.n).combinations(3).any(|t| {
        let sides = [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])];
        let options: Vec<Vec<usize>> =
            sides.iter().map(|&(u, v)| (0..marks.len()).filter(|&k| fits(marks[k], u, v)).collect()).collect();
        options[0].iter().any(|&x| {
            options[1].iter().any(|&y| y != x && options[2].iter().any(|&z| z != x && z != y))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn construction_examples() {
        let c = cartoon_of_edge(&p("(12)", 3), &p("id", 3)).unwrap();
        assert_eq!(c.edge_marks, vec![(0, 1), (0, 1)]);
        assert_eq!(c.node_marks, vec![2]);
        assert!(!cartoon_has_marked_triangle(&c));

        let c = cartoon_of_edge(&p("(123)", 3), &p("id", 3)).unwrap();
        assert_eq!(c.edge_marks, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(c.node_marks.is_empty());
        assert!(cartoon_has_marked_triangle(&c));

        let c = cartoon_of_edge(&p("(45)", 5), &p("id", 5)).unwrap();
        assert_eq!(c.node_marks, vec![0, 1, 2]);
        assert_eq!(c.edge_marks, vec![(3, 4), (3, 4)]);
        assert!(cartoon_has_marked_triangle(&c));
        assert_eq!(c.mark_count(), 5);
    }

    #[test]
    fn marks_are_not_reused() {
        // A single node mark cannot serve two sides.
        let c = Cartoon { n: 3, edge_marks: vec![(0, 1)], node_marks: vec![2] };
        assert!(!cartoon_has_marked_triangle(&c));
        let c = Cartoon { n: 3, edge_marks: vec![(0, 1)], node_marks: vec![2, 2] };
        assert!(cartoon_has_marked_triangle(&c));
    }

    #[test]
    fn json_is_one_based() {
        let c = cartoon_of_edge(&p("(12)", 3), &p("id", 3)).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["edge_marks"][0], serde_json::json!([1, 2]));
        assert_eq!(v["node_marks"], serde_json::json!([3]));
    }
}
