use std::fmt;

use serde::{Deserialize, Serialize};

use super::split::{full_mask, Split};
use super::tree::{BicoloredTree, PhyloTree};
use crate::error::{Error, Result};
use crate::semiring_core::Rational;

/// Partition of `{0..m-1}` into red and green points, both nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bicoloring {
    m: usize,
    red: Vec<usize>,
}

impl Bicoloring {
    pub fn new(m: usize, red: &[usize]) -> Result<Self> {
        let mut red = red.to_vec();
        red.sort_unstable();
        red.dedup();
        if red.iter().any(|&x| x >= m) {
            return Err(Error::IndexOutOfRange(format!("red point outside 1..={m}")));
        }
        if red.is_empty() || red.len() == m {
            return Err(Error::InvalidArgument("both colour classes must be nonempty".into()));
        }
        Ok(Bicoloring { m, red })
    }

    pub fn from_mask(m: usize, red_mask: u64) -> Result<Self> {
        let red: Vec<usize> = (0..m).filter(|&i| red_mask >> i & 1 == 1).collect();
        Bicoloring::new(m, &red)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn red(&self) -> Vec<usize> {
        self.red.clone()
    }

    pub fn green(&self) -> Vec<usize> {
        (0..self.m).filter(|x| !self.red.contains(x)).collect()
    }

    fn red_mask(&self) -> u64 {
        self.red.iter().fold(0, |acc, &i| acc | 1 << i)
    }

    fn bichromatic(&self, side: u64) -> bool {
        let red = self.red_mask();
        side & red != 0 && side & !red != 0
    }

    /// No split of the tree has a monochromatic side.
    pub fn is_admissible_for(&self, tree: &PhyloTree) -> Result<bool> {
        if tree.m != self.m {
            return Err(Error::Dimension(format!("coloring of {} points for a tree on {}", self.m, tree.m)));
        }
        Ok(tree.splits.keys().all(|s| self.bichromatic(s.part()) && self.bichromatic(s.complement())))
    }

    /// Relabels leaves as `r_1 < .. < r_d` and `g_1 < .. < g_n`, dropping
    /// splits with a monochromatic side.
    pub fn color_tree(&self, tree: &PhyloTree) -> Result<BicoloredTree> {
        if tree.m != self.m {
            return Err(Error::Dimension(format!("coloring of {} points for a tree on {}", self.m, tree.m)));
        }
        let mut position = vec![0usize; self.m];
        for (k, &x) in self.red.iter().chain(self.green().iter()).enumerate() {
            position[x] = k;
        }
        let mut splits = Vec::new();
        for (s, w) in &tree.splits {
            if !(self.bichromatic(s.part()) && self.bichromatic(s.complement())) {
                continue;
            }
            let relabeled = s.part_indices().iter().fold(0u64, |acc, &x| acc | 1 << position[x]);
            splits.push((Split::new(self.m, relabeled)?, *w));
        }
        BicoloredTree::new(self.red.len(), self.m - self.red.len(), splits)
    }
}

impl fmt::Display for Bicoloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Vec<usize>| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "R={{{}}} G={{{}}}", show(self.red()), show(self.green()))
    }
}

pub fn admissible_bicoloring(tree: &PhyloTree, coloring: &Bicoloring) -> Result<bool> {
    coloring.is_admissible_for(tree)
}

pub fn elementary_splits(tree: &PhyloTree) -> Vec<Split> {
    tree.elementary_splits()
}

/// Number of two-leaf sides (a split with both sides of size two counts twice).
pub fn cherry_count(tree: &PhyloTree) -> usize {
    tree.splits
        .keys()
        .map(|s| usize::from(s.part().count_ones() == 2) + usize::from(s.complement().count_ones() == 2))
        .sum()
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `2^k · C(d+n-2k, d-k)` with `k` the number of cherries; zero when `k > min(d, n)`.
pub fn count_bicolorings(tree: &PhyloTree, d: usize, n: usize) -> Result<u128> {
    if d + n != tree.m {
        return Err(Error::Dimension(format!("d + n = {} for a tree on {} leaves", d + n, tree.m)));
    }
    if !tree.is_maximal() {
        return Err(Error::Precondition(format!(
            "counting needs a maximal tree ({} splits, expected {})",
            tree.splits.len(),
            tree.m.saturating_sub(3)
        )));
    }
    let k = cherry_count(tree);
    if k > d.min(n) {
        return Ok(0);
    }
    Ok((1u128 << k) * binomial((d + n - 2 * k) as u64, (d - k) as u64))
}

/// Counts admissible colorings with exactly `d` red points by enumeration.
pub fn count_bicolorings_brute_force(tree: &PhyloTree, d: usize) -> Result<u128> {
    let m = tree.m;
    let mut count = 0;
    for mask in 0..=full_mask(m) {
        if mask.count_ones() as usize != d {
            continue;
        }
        if let Ok(c) = Bicoloring::from_mask(m, mask) {
            if c.is_admissible_for(tree)? {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Where to attach a new leaf: on the pendant edge of a leaf or on an internal split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachPoint {
    Leaf(usize),
    Split(usize),
}

/// Subdivides an edge of the tree on `m` leaves (given by split sides) and hangs
/// leaf `m` from the new vertex.
pub fn insert_leaf(m: usize, sides: &[u64], at: AttachPoint) -> Vec<u64> {
    let full = full_mask(m);
    let new = 1u64 << m;
    let (u, uc) = match at {
        AttachPoint::Leaf(l) => (1u64 << l, full & !(1u64 << l)),
        AttachPoint::Split(k) => (sides[k], full & !sides[k]),
    };
    let mut out = Vec::with_capacity(sides.len() + 1);
    for (k, &x) in sides.iter().enumerate() {
        if at == AttachPoint::Split(k) {
            out.push(x | new);
            out.push(x);
            continue;
        }
        let strict = |a: u64, b: u64| a & !b == 0 && a != b;
        let inside = strict(u, x) || strict(uc, x);
        out.push(if inside { x | new } else { x });
    }
    if let AttachPoint::Leaf(l) = at {
        if m >= 3 {
            out.push(1u64 << l | new);
        }
    }
    out
}

/// Every binary tree topology on `m >= 3` leaves (`(2m-5)!!` of them), unit weights.
pub fn all_binary_topologies(m: usize) -> Vec<PhyloTree> {
    assert!(m >= 3, "binary topologies need three leaves");
    let mut trees: Vec<Vec<u64>> = vec![Vec::new()];
    for k in 3..m {
        let mut next = Vec::new();
        for t in &trees {
            for l in 0..k {
                next.push(insert_leaf(k, t, AttachPoint::Leaf(l)));
            }
            for s in 0..t.len() {
                next.push(insert_leaf(k, t, AttachPoint::Split(s)));
            }
        }
        trees = next;
    }
    trees
        .into_iter()
        .map(|sides| {
            let splits = sides.into_iter().map(|x| (Split::new(m, x).expect("valid side"), Rational::ONE));
            PhyloTree::new(m, splits).expect("insertion keeps compatibility")
        })
        .collect()
}
