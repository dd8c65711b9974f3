use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::bicoloring::Bicoloring;
use super::split::{full_mask, Split};
use super::tree::{bicolored_tree_from_matrix, BicoloredTree, PhyloTree};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::semiring_core::{Rational, TropicalMatrix};

/// Tropical Plücker vector on `m` points, one coordinate per pair `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlueckerVector {
    m: usize,
    coords: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PlueckerJson {
    m: usize,
    coords: BTreeMap<String, Rational>,
}

fn pair_slot(m: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * (2 * m - a - 1) / 2 + (b - a - 1)
}

impl PlueckerVector {
    pub fn zero(m: usize) -> Self {
        PlueckerVector { m, coords: vec![Rational::ZERO; m * (m - 1) / 2] }
    }

    /// Coordinates listed in the order `12, 13, .., 1m, 23, ..`.
    pub fn from_list(m: usize, coords: Vec<Rational>) -> Result<Self> {
        if m < 2 || coords.len() != m * (m - 1) / 2 {
            return Err(Error::Dimension(format!("{} coordinates for m = {m}", coords.len())));
        }
        Ok(PlueckerVector { m, coords })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Coordinate `p_{ij}` for 0-based `i != j`.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i != j, "diagonal Plücker coordinate");
        self.coords[pair_slot(self.m, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i != j, "diagonal Plücker coordinate");
        let k = pair_slot(self.m, i, j);
        self.coords[k] = v;
    }

    pub fn as_list(&self) -> &[Rational] {
        &self.coords
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut coords = BTreeMap::new();
        for (i, j) in (0..self.m).tuple_combinations() {
            coords.insert(format!("{},{}", i + 1, j + 1), self.get(i, j));
        }
        serde_json::to_value(PlueckerJson { m: self.m, coords }).expect("serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PlueckerJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let m = raw.m;
        if m < 2 {
            return Err(Error::Dimension("Plücker vectors need m >= 2".into()));
        }
        let mut seen = vec![false; m * (m - 1) / 2];
        let mut p = PlueckerVector::zero(m);
        for (key, v) in raw.coords {
            let bad = || Error::Parse(format!("coordinate key {key:?} (expected \"i,j\" with 1 <= i < j <= {m})"));
            let (a, b) = key.split_once(',').ok_or_else(bad)?;
            let i: usize = a.trim().parse().map_err(|_| bad())?;
            let j: usize = b.trim().parse().map_err(|_| bad())?;
            if i == 0 || j == 0 || i > m || j > m || i == j {
                return Err(bad());
            }
            let slot = pair_slot(m, i - 1, j - 1);
            if seen[slot] {
                return Err(Error::Parse(format!("coordinate {key:?} given twice")));
            }
            seen[slot] = true;
            p.coords[slot] = v;
        }
        if seen.iter().any(|x| !x) {
            return Err(Error::Parse(format!("all {} coordinates are required", seen.len())));
        }
        Ok(p)
    }
}

/// The minimum of the three pairings of every 4-subset is attained twice.
pub fn four_point_check(p: &PlueckerVector) -> bool {
    first_four_point_violation(p).is_none()
}

pub fn first_four_point_violation(p: &PlueckerVector) -> Option<[usize; 4]> {
    (0..p.m).combinations(4).find_map(|q| {
        let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
        let mut sums = [p.get(i, j) + p.get(k, l), p.get(i, k) + p.get(j, l), p.get(i, l) + p.get(j, k)];
        sums.sort();
        (sums[0] != sums[1]).then_some([i, j, k, l])
    })
}

/// `-p_ij` is the internal path length plus the two leaf lengths.
pub fn plucker_from_tree(tree: &PhyloTree, leaf_lengths: &[Rational]) -> Result<PlueckerVector> {
    if leaf_lengths.len() != tree.m {
        return Err(Error::Dimension(format!("{} leaf lengths for {} leaves", leaf_lengths.len(), tree.m)));
    }
    let mut p = PlueckerVector::zero(tree.m);
    for (i, j) in (0..tree.m).tuple_combinations() {
        p.set(i, j, -(tree.internal_distance(i, j) + leaf_lengths[i] + leaf_lengths[j]));
    }
    Ok(p)
}

/// Inverts [`plucker_from_tree`]: Buneman indices of the metric `-p` give the
/// splits, the residual gives the leaf lengths.
pub fn tree_from_plucker(p: &PlueckerVector) -> Result<(PhyloTree, Vec<Rational>)> {
    let m = p.m;
    if m > Budget::default().max_leaves {
        return Err(Error::Budget(format!("{m} leaves exceed the split enumeration limit")));
    }
    if let Some(q) = first_four_point_violation(p) {
        return Err(Error::Precondition(format!(
            "four-point condition fails on {{{}}}",
            q.iter().map(|x| (x + 1).to_string()).join(",")
        )));
    }
    let dist = |i: usize, j: usize| if i == j { Rational::ZERO } else { -p.get(i, j) };
    let full = full_mask(m);
    let mut splits = Vec::new();
    for side in (1..full).filter(|s| s & 1 == 1) {
        let other = full & !side;
        if side.count_ones() < 2 || other.count_ones() < 2 {
            continue;
        }
        let u: Vec<usize> = (0..m).filter(|&x| side >> x & 1 == 1).collect();
        let w: Vec<usize> = (0..m).filter(|&x| other >> x & 1 == 1).collect();
        let mut best: Option<Rational> = None;
        for (&i, &j) in u.iter().tuple_combinations() {
            for (&k, &l) in w.iter().tuple_combinations() {
                let cross = (dist(i, k) + dist(j, l)).min(dist(i, l) + dist(j, k));
                let v = cross - dist(i, j) - dist(k, l);
                if best.map_or(true, |b| v < b) {
                    best = Some(v);
                }
            }
        }
        let beta = best.expect("both sides have two leaves").half();
        if beta.is_positive() {
            splits.push((Split::new(m, side)?, beta));
        }
    }
    let tree = PhyloTree::new(m, splits).map_err(|e| Error::Internal(format!("Buneman splits: {e}")))?;
    let resid = |i: usize, j: usize| dist(i, j) - tree.internal_distance(i, j);
    let lengths: Vec<Rational> = if m == 2 {
        vec![Rational::ZERO, resid(0, 1)]
    } else {
        (0..m)
            .map(|i| {
                let others: Vec<usize> = (0..m).filter(|&x| x != i).take(2).collect();
                let (j, k) = (others[0], others[1]);
                (resid(i, j) + resid(i, k) - resid(j, k)).half()
            })
            .collect()
    };
    if plucker_from_tree(&tree, &lengths)? != *p {
        return Err(Error::Internal("tree metric does not reproduce the Plücker vector".into()));
    }
    Ok((tree, lengths))
}

/// Keeps the red-green coordinates: `M[i][j] = p_{R_i G_j}`.
pub fn project_plucker(p: &PlueckerVector, coloring: &Bicoloring) -> Result<TropicalMatrix> {
    if coloring.m() != p.m {
        return Err(Error::Dimension(format!("coloring of {} points for m = {}", coloring.m(), p.m)));
    }
    let (tree, _) = tree_from_plucker(p)?;
    if !coloring.is_admissible_for(&tree)? {
        return Err(Error::InadmissibleColoring(format!("{coloring} leaves a monochromatic split side")));
    }
    let (red, green) = (coloring.red(), coloring.green());
    let m = TropicalMatrix::from_fn(red.len(), green.len(), |i, j| p.get(red[i], green[j]));
    let expected = coloring.color_tree(&tree)?;
    let got = bicolored_tree_from_matrix(&m)?;
    if got != expected {
        return Err(Error::Internal("projected matrix does not carry the bicolored tree of p".into()));
    }
    Ok(m)
}

/// Bicolored reading of a tree under an admissible coloring.
pub fn bicolored_reading(tree: &PhyloTree, coloring: &Bicoloring) -> Result<BicoloredTree> {
    coloring.color_tree(tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn appendix_tree() -> PhyloTree {
        PhyloTree::new(5, [(Split::from_indices(5, &[0, 1]).unwrap(), q(1))]).unwrap()
    }

    #[test]
    fn appendix_vector() {
        let p = plucker_from_tree(&appendix_tree(), &[q(0); 5]).unwrap();
        let expected: Vec<Rational> = [0, -1, -1, -1, -1, -1, -1, 0, 0, 0].iter().map(|&v| q(v)).collect();
        assert_eq!(p.as_list(), expected.as_slice());
        assert!(four_point_check(&p));
        let (t, lengths) = tree_from_plucker(&p).unwrap();
        assert_eq!(t, appendix_tree());
        assert_eq!(lengths, vec![q(0); 5]);
    }

    #[test]
    fn perturbation_breaks_four_point() {
        let mut p = plucker_from_tree(&appendix_tree(), &[q(0); 5]).unwrap();
        assert!(four_point_check(&PlueckerVector::zero(6)));
        // In {1,2,3,4} the pairings are p12+p34 = 0 and p13+p24 = p14+p23 = -2.
        p.set(0, 2, p.get(0, 2) - q(1));
        assert!(!four_point_check(&p));
        assert_eq!(first_four_point_violation(&p), Some([0, 1, 2, 3]));
        assert!(matches!(tree_from_plucker(&p), Err(Error::Precondition(_))));
    }

    #[test]
    fn leaf_lengths_only() {
        let star = PhyloTree::new(4, []).unwrap();
        let lengths = vec![q(1), q(-2), q(0), q(3)];
        let p = plucker_from_tree(&star, &lengths).unwrap();
        assert_eq!(p.get(0, 1), q(1));
        let (t, back) = tree_from_plucker(&p).unwrap();
        assert!(t.splits.is_empty());
        assert_eq!(back, lengths);
    }

    #[test]
    fn projection_example() {
        let t = PhyloTree::new(4, [(Split::from_indices(4, &[0, 1]).unwrap(), q(1))]).unwrap();
        let p = plucker_from_tree(&t, &[q(0); 4]).unwrap();
        let c = Bicoloring::new(4, &[0, 2]).unwrap();
        let m = project_plucker(&p, &c).unwrap();
        assert_eq!(m, TropicalMatrix::from_ints(&[[0, -1], [-1, 0]]));
        let mono = Bicoloring::new(4, &[0, 1]).unwrap();
        assert!(matches!(project_plucker(&p, &mono), Err(Error::InadmissibleColoring(_))));
    }

    #[test]
    fn lineality_maps_to_lineality() {
        let star = PhyloTree::new(5, []).unwrap();
        let p = plucker_from_tree(&star, &[q(2), q(-1), q(0), q(5), q(1)]).unwrap();
        let c = Bicoloring::new(5, &[1, 3]).unwrap();
        let m = project_plucker(&p, &c).unwrap();
        let t = bicolored_tree_from_matrix(&m).unwrap();
        assert!(t.splits.is_empty());
        assert_eq!(crate::rank_engine::tropical_rank(&m).unwrap(), 1);
    }

    #[test]
    fn json_round_trip() {
        let p = plucker_from_tree(&appendix_tree(), &[q(0); 5]).unwrap();
        let back = PlueckerVector::from_json_str(&p.to_json().to_string()).unwrap();
        assert_eq!(back, p);
        assert!(PlueckerVector::from_json_str(r#"{"m":3,"coords":{"1,2":0,"1,3":0}}"#).is_err());
        assert!(PlueckerVector::from_json_str(r#"{"m":3,"coords":{"1,2":0,"1,3":0,"2,2":1}}"#).is_err());
    }
}
