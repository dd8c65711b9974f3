use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::split::{full_mask, split_weight_unchecked, splits_compatible, LeafNames, Split};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rank_engine::tropical_rank;
use crate::semiring_core::{canonicalize_mod_lineality, Rational, TropicalMatrix};

/// Weighted compatible split system on leaves `{0..m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloTree {
    pub m: usize,
    pub splits: BTreeMap<Split, Rational>,
}

impl PhyloTree {
    pub fn new(m: usize, splits: impl IntoIterator<Item = (Split, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (s, w) in splits {
            if s.leaves() != m {
                return Err(Error::Dimension(format!("split on {} leaves in a tree on {m}", s.leaves())));
            }
            if s.is_trivial() {
                return Err(Error::InvalidArgument(format!("trivial split {s:?}; use leaf lengths instead")));
            }
            if !w.is_positive() {
                return Err(Error::InvalidArgument(format!("split {s:?} has non-positive weight {w}")));
            }
            if map.insert(s, w).is_some() {
                return Err(Error::InvalidArgument(format!("split {s:?} listed twice")));
            }
        }
        let keys: Vec<&Split> = map.keys().collect();
        for a in 0..keys.len() {
            for b in a + 1..keys.len() {
                if !splits_compatible(keys[a], keys[b])? {
                    return Err(Error::InvalidArgument(format!("splits {:?} and {:?} are incompatible", keys[a], keys[b])));
                }
            }
        }
        Ok(PhyloTree { m, splits: map })
    }

    pub fn is_maximal(&self) -> bool {
        self.m >= 3 && self.splits.len() == self.m - 3
    }

    pub fn elementary_splits(&self) -> Vec<Split> {
        self.splits.keys().filter(|s| s.is_elementary()).copied().collect()
    }

    /// Path length between two leaves through internal edges only.
    pub fn internal_distance(&self, a: usize, b: usize) -> Rational {
        self.splits.iter().filter(|(s, _)| s.separates(a, b)).map(|(_, w)| *w).sum()
    }

    pub fn graph(&self) -> TreeGraph {
        TreeGraph::assemble(self.m, self.splits.keys().copied().collect())
    }

    pub fn is_caterpillar(&self) -> bool {
        self.graph().is_caterpillar()
    }
}

/// A split system drawn as a tree: node `0` is the root, node `k + 1` sits
/// below the `k`-th split, leaves hang off internal nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGraph {
    pub m: usize,
    pub splits: Vec<Split>,
    /// `(child node, parent node)` for each split, i.e. the internal edges.
    pub internal_edges: Vec<(usize, usize)>,
    /// `(leaf, node)` pendant edges.
    pub leaf_edges: Vec<(usize, usize)>,
}

impl TreeGraph {
    pub fn assemble(m: usize, splits: Vec<Split>) -> Self {
        // Orient each split away from leaf 0; compatible clades are laminar.
        let clades: Vec<u64> = splits.iter().map(|s| s.clade()).collect();
        let smallest_containing = |target: u64, strict: bool| -> usize {
            let mut best: Option<(u32, usize)> = None;
            for (k, &c) in clades.iter().enumerate() {
                let contains = target & !c == 0 && (!strict || c != target);
                if contains && best.map_or(true, |(size, _)| c.count_ones() < size) {
                    best = Some((c.count_ones(), k));
                }
            }
            best.map_or(0, |(_, k)| k + 1)
        };
        let internal_edges = clades.iter().enumerate().map(|(k, &c)| (k + 1, smallest_containing(c, true))).collect();
        let leaf_edges = (0..m).map(|l| (l, smallest_containing(1 << l, false))).collect();
        TreeGraph { m, splits, internal_edges, leaf_edges }
    }

    pub fn node_count(&self) -> usize {
        self.splits.len() + 1
    }

    pub fn internal_degree(&self, node: usize) -> usize {
        self.internal_edges.iter().filter(|&&(a, b)| a == node || b == node).count()
    }

    pub fn is_caterpillar(&self) -> bool {
        (0..self.node_count()).all(|v| self.internal_degree(v) <= 2)
    }
}

/// Bicolored phylogenetic tree on `d` red leaves (rows) and `n` green leaves (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicoloredTree {
    pub d: usize,
    pub n: usize,
    pub splits: BTreeMap<Split, Rational>,
}

#[derive(Serialize, Deserialize)]
struct SplitJson {
    part: Vec<String>,
    weight: Rational,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    d: usize,
    n: usize,
    splits: Vec<SplitJson>,
}

impl BicoloredTree {
    pub fn new(d: usize, n: usize, splits: impl IntoIterator<Item = (Split, Rational)>) -> Result<Self> {
        let tree = PhyloTree::new(d + n, splits)?;
        if let Some(s) = tree.splits.keys().find(|s| !s.is_bicolored(d)) {
            return Err(Error::NotBicolored(LeafNames { d, n }.describe(s).join(",")));
        }
        Ok(BicoloredTree { d, n, splits: tree.splits })
    }

    pub fn names(&self) -> LeafNames {
        LeafNames { d: self.d, n: self.n }
    }

    pub fn as_phylo(&self) -> PhyloTree {
        PhyloTree { m: self.d + self.n, splits: self.splits.clone() }
    }

    pub fn is_maximal(&self) -> bool {
        self.as_phylo().is_maximal()
    }

    pub fn is_caterpillar(&self) -> bool {
        self.as_phylo().is_caterpillar()
    }

    /// `M[i][j] = -(length of the internal path from r_i to g_j)`.
    pub fn to_matrix(&self) -> TropicalMatrix {
        let t = self.as_phylo();
        TropicalMatrix::from_fn(self.d, self.n, |i, j| -t.internal_distance(i, self.d + j))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = self.names();
        let splits = self
            .splits
            .iter()
            .map(|(s, w)| SplitJson { part: names.describe(s), weight: *w })
            .collect();
        serde_json::to_value(TreeJson { d: self.d, n: self.n, splits }).expect("tree serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: TreeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let names = LeafNames { d: raw.d, n: raw.n };
        let mut splits = Vec::new();
        for sj in raw.splits {
            let parts: Vec<&str> = sj.part.iter().map(|x| x.as_str()).collect();
            splits.push((names.split(&parts)?, sj.weight));
        }
        BicoloredTree::new(raw.d, raw.n, splits)
    }
}

/// Rebuilds the bicolored tree of a matrix of tropical rank at most two.
///
/// Every bicolored split gets the quartet index of the canonical representative;
/// the positive ones form the tree. Compatibility and the reproduction of the
/// input up to lineality are verified before returning.
pub fn bicolored_tree_from_matrix(a: &TropicalMatrix) -> Result<BicoloredTree> {
    let budget = Budget::default();
    let (d, n) = (a.rows(), a.cols());
    if d + n > budget.max_leaves {
        return Err(Error::Budget(format!("{} leaves exceed the split enumeration limit {}", d + n, budget.max_leaves)));
    }
    if d.min(n) > 2 {
        let t = tropical_rank(a)?;
        if t > 2 {
            return Err(Error::Precondition(format!("tropical rank {t} exceeds 2")));
        }
    }
    let abar = canonicalize_mod_lineality(a);
    let m = d + n;
    let full = full_mask(m);
    let mut splits = Vec::new();
    // Sides containing leaf 0 enumerate each bipartition once.
    for side in (1..full).filter(|s| s & 1 == 1) {
        let s = Split::new(m, side)?;
        if !s.is_bicolored(d) {
            continue;
        }
        let w = split_weight_unchecked(&abar, s.part(), s.complement());
        if w.is_positive() {
            splits.push((s, w));
        }
    }
    let tree = BicoloredTree::new(d, n, splits).map_err(|e| Error::Internal(format!("reconstructed splits: {e}")))?;
    if canonicalize_mod_lineality(&tree.to_matrix()) != abar {
        return Err(Error::Internal("reconstructed tree does not reproduce the matrix".into()));
    }
    Ok(tree)
}

/// Caterpillar test on the tree of a rank-two matrix.
pub fn positivity_rank2(a: &TropicalMatrix) -> Result<bool> {
    Ok(bicolored_tree_from_matrix(a)?.is_caterpillar())
}
