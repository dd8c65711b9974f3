//! Random instances for tests, benches and experiments. All generators take
//! the RNG by reference so callers control seeding.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::rank_engine::min_plus_product;
use crate::semiring_core::{Rational, TropicalMatrix};
use crate::tree_space::{insert_leaf, AttachPoint, BicoloredTree, Bicoloring, PhyloTree, Split};

/// Uniform rational in `[lo, hi]` with denominator dividing `den`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    let num = rng.gen_range(lo * den..=hi * den);
    Rational::new(num as i128, den as i128).expect("positive denominator")
}

/// Positive weight `p/q` with `q <= max_den` and value at most 3.
pub fn positive_weight<R: Rng + ?Sized>(rng: &mut R, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(1..=3 * q);
    Rational::new(p as i128, q as i128).expect("positive denominator")
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, lo: i64, hi: i64, den: i64) -> TropicalMatrix {
    TropicalMatrix::from_fn(d, n, |_, _| rational(rng, lo, hi, den))
}

/// `X ⊙ Y` with `X` of size `d x r` and `Y` of size `r x n`.
pub fn random_product<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, r: usize, spread: i64, den: i64) -> TropicalMatrix {
    let x = random_matrix(rng, d, r, -spread, spread, den);
    let y = random_matrix(rng, r, n, -spread, spread, den);
    min_plus_product(&x, &y).expect("inner dimensions agree")
}

/// Adds random row and column constants.
pub fn shift_randomly<R: Rng + ?Sized>(rng: &mut R, a: &TropicalMatrix, spread: i64) -> TropicalMatrix {
    let rows: Vec<Rational> = (0..a.rows()).map(|_| rational(rng, -spread, spread, 1)).collect();
    let cols: Vec<Rational> = (0..a.cols()).map(|_| rational(rng, -spread, spread, 1)).collect();
    TropicalMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) + rows[i] + cols[j])
}

/// Split sides of a uniformly grown binary tree on `m >= 3` leaves.
pub fn random_binary_sides<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<u64> {
    let mut sides = Vec::new();
    for k in 3..m {
        let edges = k + sides.len();
        let pick = rng.gen_range(0..edges);
        let at = if pick < k { AttachPoint::Leaf(pick) } else { AttachPoint::Split(pick - k) };
        sides = insert_leaf(k, &sides, at);
    }
    sides
}

/// Binary tree on `m` leaves with weights `p/q`, `q <= max_den`.
pub fn random_phylo_tree<R: Rng + ?Sized>(rng: &mut R, m: usize, max_den: i64) -> PhyloTree {
    let sides = random_binary_sides(rng, m);
    let splits: Vec<(Split, Rational)> =
        sides.into_iter().map(|x| (Split::new(m, x).expect("valid side"), positive_weight(rng, max_den))).collect();
    PhyloTree::new(m, splits).expect("insertion keeps compatibility")
}

/// Random tree and random coloring with `d` red leaves; monochromatic splits
/// are dropped. Each surviving split is kept with probability `keep`.
pub fn random_bicolored_tree<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, max_den: i64, keep: f64) -> BicoloredTree {
    let m = d + n;
    let tree = if m >= 3 { random_phylo_tree(rng, m, max_den) } else { PhyloTree::new(m, []).expect("star") };
    let mut leaves: Vec<usize> = (0..m).collect();
    leaves.shuffle(rng);
    let coloring = Bicoloring::new(m, &leaves[..d]).expect("both classes nonempty");
    let colored = coloring.color_tree(&tree).expect("sizes agree");
    let splits: Vec<(Split, Rational)> = colored.splits.into_iter().filter(|_| rng.gen_bool(keep)).collect();
    BicoloredTree::new(d, n, splits).expect("subsets of a compatible bicolored system")
}

/// Matrix of a tree whose centre meets three internal edges: clades around
/// `(r_k, g_k)` for `k = 1, 2, 3` with the remaining leaves scattered.
/// Requires `d, n >= 3`.
pub fn random_snowflake<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, max_den: i64) -> TropicalMatrix {
    assert!(d >= 3 && n >= 3, "snowflakes need three leaves of each colour");
    let m = d + n;
    let mut clades = [1u64 | 1 << d, 1 << 1 | 1 << (d + 1), 1 << 2 | 1 << (d + 2)];
    for leaf in (3..d).chain(d + 3..m) {
        let k = rng.gen_range(0..4);
        if k < 3 {
            clades[k] |= 1 << leaf;
        }
    }
    let splits: Vec<(Split, Rational)> =
        clades.iter().map(|&c| (Split::new(m, c).expect("proper clade"), positive_weight(rng, max_den))).collect();
    let tree = BicoloredTree::new(d, n, splits).expect("disjoint bicolored clades");
    shift_randomly(rng, &tree.to_matrix(), 3)
}
