use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use super::{min_plus_product, prevariety_member_with, tropical_rank_with};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::semiring_core::{Rational, TropicalMatrix};
use crate::tree_space;

/// Factors with `A = X ⊙ Y`; `x` is `d x r`, `y` is `r x n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BarvinokWitness {
    pub x: TropicalMatrix,
    pub y: TropicalMatrix,
}

impl BarvinokWitness {
    pub fn inner_dim(&self) -> usize {
        self.x.cols()
    }

    pub fn product(&self) -> TropicalMatrix {
        min_plus_product(&self.x, &self.y).expect("witness shapes agree")
    }

    fn transposed(self) -> Self {
        BarvinokWitness { x: self.y.transpose(), y: self.x.transpose() }
    }
}

/// `Y[k][j] = max_i (A[i][j] - X[i][k])`, the largest `Y` with `X ⊙ Y >= A`.
fn residuate(a: &TropicalMatrix, gens: &[Vec<Rational>]) -> BarvinokWitness {
    let x = TropicalMatrix::from_fn(a.rows(), gens.len(), |i, k| gens[k][i]);
    let y = TropicalMatrix::from_fn(gens.len(), a.cols(), |k, j| {
        (0..a.rows()).map(|i| a.get(i, j) - gens[k][i]).max().unwrap()
    });
    BarvinokWitness { x, y }
}

fn accept(a: &TropicalMatrix, gens: &[Vec<Rational>]) -> Option<BarvinokWitness> {
    let w = residuate(a, gens);
    (w.product() == *a).then_some(w)
}

fn trivial_witness(a: &TropicalMatrix) -> BarvinokWitness {
    let big = a.spread() + Rational::ONE;
    if a.cols() <= a.rows() {
        let y = TropicalMatrix::from_fn(a.cols(), a.cols(), |k, j| if k == j { Rational::ZERO } else { big });
        BarvinokWitness { x: a.clone(), y }
    } else {
        let x = TropicalMatrix::from_fn(a.rows(), a.rows(), |i, k| if i == k { Rational::ZERO } else { big });
        BarvinokWitness { x, y: a.clone() }
    }
}

pub fn barvinok_rank_le(a: &TropicalMatrix, r: usize) -> Result<Option<BarvinokWitness>> {
    barvinok_rank_le_with(a, r, &Budget::default())
}

/// Decides whether `A` is a min of at most `r` rank-one matrices.
///
/// Generators range over the vertices of the arrangement of tropical hyperplanes
/// with apices at the columns; a set of them works iff the cells they cover
/// exhaust the matrix. Returns `Ok(None)` for a proven "no".
pub fn barvinok_rank_le_with(a: &TropicalMatrix, r: usize, budget: &Budget) -> Result<Option<BarvinokWitness>> {
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let top = a.rows().min(a.cols());
    if r >= top {
        return Ok(Some(trivial_witness(a)));
    }
    if !prevariety_member_with(a, r, budget)?.member {
        return Ok(None);
    }
    let found = if a.rows() > a.cols() {
        search(&a.transpose(), r, budget)?.map(BarvinokWitness::transposed)
    } else {
        search(a, r, budget)?
    };
    if let Some(w) = &found {
        if w.product() != *a {
            return Err(Error::Internal("Barvinok witness fails the residuation check".into()));
        }
    }
    if r == 2 && a.rows() + a.cols() <= budget.max_leaves {
        let tree = tree_space::bicolored_tree_from_matrix(a)?;
        if tree.is_caterpillar() != found.is_some() {
            return Err(Error::Internal(format!(
                "Barvinok search ({}) disagrees with the caterpillar test ({})",
                found.is_some(),
                tree.is_caterpillar()
            )));
        }
    }
    Ok(found)
}

/// Search with `d <= n` assumed; the caller has already ruled out `r >= min(d, n)`.
fn search(a: &TropicalMatrix, r: usize, budget: &Budget) -> Result<Option<BarvinokWitness>> {
    let columns: Vec<Vec<Rational>> = (0..a.cols()).map(|j| a.column(j)).collect();
    for pick in (0..a.cols()).combinations(r) {
        let gens: Vec<Vec<Rational>> = pick.iter().map(|&j| columns[j].clone()).collect();
        if let Some(w) = accept(a, &gens) {
            return Ok(Some(w));
        }
    }
    // With at most two generators the columns lie on a tropical segment whose
    // endpoints may be taken among the columns, so the loop above is complete.
    if r <= 2 {
        return Ok(None);
    }
    let cells = a.rows() * a.cols();
    if cells > 128 {
        return Err(Error::Budget(format!("{cells} matrix cells exceed the 128-cell cover search")));
    }
    let vertices = arrangement_vertices(a, budget)?;
    let mut covers: Vec<(u128, usize)> = vertices.iter().enumerate().map(|(k, p)| (coverage(a, p), k)).collect();
    covers.sort_by(|x, y| y.0.count_ones().cmp(&x.0.count_ones()).then(x.0.cmp(&y.0)));
    covers.dedup_by(|x, y| x.0 == y.0);
    let maximal: Vec<(u128, usize)> =
        covers.iter().filter(|(c, _)| !covers.iter().any(|(o, _)| o != c && o & c == *c)).copied().collect();
    let full: u128 = if cells == 128 { u128::MAX } else { (1u128 << cells) - 1 };
    let mut nodes = 0u64;
    let mut chosen = Vec::new();
    if cover(&maximal, full, 0, r, &mut chosen, &mut nodes, budget.barvinok_nodes)? {
        let gens: Vec<Vec<Rational>> = chosen.iter().map(|&k| vertices[k].clone()).collect();
        return match accept(a, &gens) {
            Some(w) => Ok(Some(w)),
            None => Err(Error::Internal("covering generators fail residuation".into())),
        };
    }
    Ok(None)
}

fn cover(
    sets: &[(u128, usize)],
    full: u128,
    covered: u128,
    left: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    limit: u64,
) -> Result<bool> {
    if covered == full {
        return Ok(true);
    }
    if left == 0 {
        return Ok(false);
    }
    *nodes += 1;
    if *nodes > limit {
        return Err(Error::Budget(format!("generator search exceeded {limit} nodes")));
    }
    let missing = full & !covered;
    let best_gain = sets.iter().map(|(c, _)| (c & missing).count_ones()).max().unwrap_or(0);
    if (best_gain as usize) * left < missing.count_ones() as usize {
        return Ok(false);
    }
    let target = missing.trailing_zeros();
    for &(c, k) in sets {
        if c >> target & 1 == 0 {
            continue;
        }
        chosen.push(k);
        if cover(sets, full, covered | c, left - 1, chosen, nodes, limit)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Cells `(i, j)` with `i ∈ argmax_l (A[l][j] - p[l])`, as bit `i * n + j`.
fn coverage(a: &TropicalMatrix, p: &[Rational]) -> u128 {
    let mut bits = 0u128;
    for j in 0..a.cols() {
        let best = (0..a.rows()).map(|i| a.get(i, j) - p[i]).max().unwrap();
        for i in 0..a.rows() {
            if a.get(i, j) - p[i] == best {
                bits |= 1u128 << (i * a.cols() + j);
            }
        }
    }
    bits
}

/// Whether the coordinates in `mask` are connected by shared column maxima.
fn restricted_connected(a: &TropicalMatrix, p: &[Rational], mask: u32) -> bool {
    let members: Vec<usize> = (0..a.rows()).filter(|&i| mask >> i & 1 == 1).collect();
    let mut parent: Vec<usize> = (0..a.rows()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..a.cols() {
        let best = members.iter().map(|&i| a.get(i, j) - p[i]).max().unwrap();
        let mut first = None;
        for &i in &members {
            if a.get(i, j) - p[i] == best {
                match first {
                    None => first = Some(i),
                    Some(f) => {
                        let (x, y) = (find(&mut parent, f), find(&mut parent, i));
                        parent[x] = y;
                    }
                }
            }
        }
    }
    let root = find(&mut parent, members[0]);
    members.iter().all(|&i| find(&mut parent, i) == root)
}

/// Vertices of the arrangement of min-plus hyperplanes with apices at the
/// columns of `A`, normalized to `p[0] = 0`, in lexicographic order.
///
/// Grows the coordinate set one index at a time: a new coordinate joins through a
/// column whose maximum of `A[l][j] - p[l]` it attains, and every intermediate
/// partial point must itself be a vertex of the arrangement restricted to the
/// coordinates chosen so far.
pub fn arrangement_vertices(a: &TropicalMatrix, budget: &Budget) -> Result<Vec<Vec<Rational>>> {
    let d = a.rows();
    if d > 31 {
        return Err(Error::Budget("vertex search supports at most 31 rows".into()));
    }
    let mut layer: BTreeSet<(u32, Vec<Rational>)> = BTreeSet::new();
    layer.insert((1, vec![Rational::ZERO; d]));
    let mut nodes = 0u64;
    for _ in 1..d {
        let mut next = BTreeSet::new();
        for (mask, p) in &layer {
            for j in 0..a.cols() {
                let top = (0..d).filter(|&l| mask >> l & 1 == 1).map(|l| a.get(l, j) - p[l]).max().unwrap();
                for fresh in (0..d).filter(|&l| mask >> l & 1 == 0) {
                    nodes += 1;
                    if nodes > budget.barvinok_nodes {
                        return Err(Error::Budget(format!("vertex search exceeded {} nodes", budget.barvinok_nodes)));
                    }
                    let mut q = p.clone();
                    q[fresh] = a.get(fresh, j) - top;
                    let m = mask | 1 << fresh;
                    if restricted_connected(a, &q, m) {
                        next.insert((m, q));
                    }
                }
            }
        }
        layer = next;
    }
    Ok(layer.into_iter().map(|(_, p)| p).collect())
}

pub fn barvinok_rank(a: &TropicalMatrix) -> Result<(usize, BarvinokWitness)> {
    let budget = Budget::default();
    let t = tropical_rank_with(a, &budget)?;
    barvinok_rank_from(a, t, &budget)
}

/// Smallest `r >= start` with Barvinok rank at most `r`.
pub(crate) fn barvinok_rank_from(a: &TropicalMatrix, start: usize, budget: &Budget) -> Result<(usize, BarvinokWitness)> {
    let top = a.rows().min(a.cols());
    for r in start.max(1)..top {
        if let Some(w) = barvinok_rank_le_with(a, r, budget)? {
            return Ok((r, w));
        }
    }
    Ok((top, trivial_witness(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank_engine::tropical_rank;
    use rand::{Rng, SeedableRng};

    fn m<R: AsRef<[i64]>>(rows: &[R]) -> TropicalMatrix {
        TropicalMatrix::from_ints(rows)
    }

    #[test]
    fn rank_one_example() {
        let a = m(&[[0, 1], [2, 3]]);
        let w = barvinok_rank_le(&a, 1).unwrap().unwrap();
        assert_eq!(w.x, m(&[[0], [2]]));
        assert_eq!(w.y, m(&[[0, 1]]));
    }

    #[test]
    fn rank_two_examples() {
        let cat = m(&[[0, 0, 2], [0, 0, 1], [3, 1, 0]]);
        assert!(barvinok_rank_le(&cat, 2).unwrap().is_some());
        assert_eq!(barvinok_rank(&cat).unwrap().0, 2);
        let snow = m(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(barvinok_rank_le(&snow, 2).unwrap().is_none());
        assert_eq!(barvinok_rank(&snow).unwrap().0, 3);
        assert_eq!(barvinok_rank(&TropicalMatrix::zeros(3, 4)).unwrap().0, 1);
    }

    #[test]
    fn trivial_witnesses_reproduce_input() {
        for a in [m(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]), m(&[[3, -1], [0, 4], [2, 2]]), m(&[[5, 1, 0, 2], [0, 0, 7, 1]])] {
            let w = trivial_witness(&a);
            assert_eq!(w.product(), a);
        }
    }

    #[test]
    fn columns_are_vertices() {
        let a = m(&[[0, 37, 11, 74], [29, 3, 58, 17], [13, 41, 2, 66]]);
        let vs = arrangement_vertices(&a, &Budget::default()).unwrap();
        for j in 0..4 {
            let c = a.column(j);
            let p: Vec<Rational> = c.iter().map(|&v| v - c[0]).collect();
            assert!(vs.contains(&p), "column {j}");
        }
        // A generic arrangement of n hyperplanes in TP^{d-1} has C(n+d-2, d-1) vertices.
        assert_eq!(vs.len(), 10);
    }

    /// Independent oracle: search generators on a fine grid of small rationals.
    fn brute_force_le(a: &TropicalMatrix, r: usize) -> bool {
        let mut grid = Vec::new();
        for num in -12..=12 {
            grid.push(Rational::new(num, 2).unwrap());
        }
        let d = a.rows();
        let mut points: Vec<Vec<Rational>> = vec![vec![Rational::ZERO]];
        for _ in 1..d {
            points = points.into_iter().flat_map(|p| grid.iter().map(move |&g| [p.clone(), vec![g]].concat())).collect();
        }
        let covs: Vec<u128> = points.iter().map(|p| coverage(a, p)).collect();
        let full = (1u128 << (a.rows() * a.cols())) - 1;
        let covs: Vec<u128> = covs.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        covs.iter().copied().combinations(r).any(|c| c.iter().fold(0, |x, y| x | y) == full)
    }

    #[test]
    fn vertex_search_agrees_with_grid_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..40 {
            let a = TropicalMatrix::from_fn(3, 4, |_, _| Rational::from_int(rng.gen_range(0..4)));
            let t = tropical_rank(&a).unwrap();
            if t > 2 {
                continue;
            }
            let ours = barvinok_rank_le(&a, 2).unwrap().is_some();
            assert_eq!(ours, brute_force_le(&a, 2), "trial {trial}: {a:?}");
        }
        for trial in 0..25 {
            let x = TropicalMatrix::from_fn(4, 3, |_, _| Rational::from_int(rng.gen_range(0..4)));
            let y = TropicalMatrix::from_fn(3, 4, |_, _| Rational::from_int(rng.gen_range(0..4)));
            let a = min_plus_product(&x, &y).unwrap();
            assert!(barvinok_rank_le(&a, 3).unwrap().is_some(), "trial {trial}");
            let perturbed = TropicalMatrix::from_fn(4, 4, |i, j| a.get(i, j) + Rational::from_int(rng.gen_range(0..2)));
            if tropical_rank(&perturbed).unwrap() <= 3 {
                let ours = barvinok_rank_le(&perturbed, 3).unwrap().is_some();
                let grid = brute_force_le(&perturbed, 3);
                assert_eq!(ours, grid, "trial {trial}: {perturbed:?}");
            }
        }
    }

    #[test]
    fn products_have_bounded_rank() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let r = rng.gen_range(1..=3);
            let x = TropicalMatrix::from_fn(5, r, |_, _| Rational::new(rng.gen_range(-20..20), 4).unwrap());
            let y = TropicalMatrix::from_fn(r, 5, |_, _| Rational::new(rng.gen_range(-20..20), 4).unwrap());
            let a = min_plus_product(&x, &y).unwrap();
            let (b, w) = barvinok_rank(&a).unwrap();
            assert!(b <= r);
            assert_eq!(w.product(), a);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x = TropicalMatrix::from_fn(5, 4, |_, _| Rational::from_int(rng.gen_range(0..9)));
        let y = TropicalMatrix::from_fn(4, 5, |_, _| Rational::from_int(rng.gen_range(0..9)));
        let a = min_plus_product(&x, &y).unwrap();
        let tiny = Budget { barvinok_nodes: 1, ..Budget::default() };
        match barvinok_rank_le_with(&a, 3, &tiny) {
            Err(Error::Budget(_)) | Ok(None) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
