use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::semiring_core::{Rational, TropicalMatrix};

/// Largest supported leaf count (leaf sets are `u64` bitmasks).
pub const MAX_LEAVES: usize = 63;

/// A bipartition of the leaves `{0..m-1}`, stored by its canonical part: the
/// smaller side, or on a tie the side holding leaf `0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    m: usize,
    part: u64,
}

pub(crate) fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

pub(crate) fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

impl Split {
    pub fn new(m: usize, side: u64) -> Result<Self> {
        if m > MAX_LEAVES {
            return Err(Error::InvalidArgument(format!("{m} leaves exceed the supported {MAX_LEAVES}")));
        }
        let full = full_mask(m);
        if side & !full != 0 {
            return Err(Error::IndexOutOfRange(format!("split side {side:#b} outside {m} leaves")));
        }
        let other = full & !side;
        if side == 0 || other == 0 {
            return Err(Error::InvalidArgument("both sides of a split must be nonempty".into()));
        }
        let (a, b) = (side.count_ones(), other.count_ones());
        let part = match a.cmp(&b) {
            Ordering::Less => side,
            Ordering::Greater => other,
            Ordering::Equal => {
                if side & 1 == 1 {
                    side
                } else {
                    other
                }
            }
        };
        Ok(Split { m, part })
    }

    pub fn from_indices(m: usize, side: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in side {
            if i >= m {
                return Err(Error::IndexOutOfRange(format!("leaf {i} outside {m} leaves")));
            }
            mask |= 1 << i;
        }
        Split::new(m, mask)
    }

    pub fn leaves(&self) -> usize {
        self.m
    }

    pub fn part(&self) -> u64 {
        self.part
    }

    pub fn complement(&self) -> u64 {
        full_mask(self.m) & !self.part
    }

    pub fn part_indices(&self) -> Vec<usize> {
        mask_indices(self.part)
    }

    /// The side not containing leaf `0`.
    pub fn clade(&self) -> u64 {
        if self.part & 1 == 1 {
            self.complement()
        } else {
            self.part
        }
    }

    pub fn separates(&self, a: usize, b: usize) -> bool {
        (self.part >> a & 1) != (self.part >> b & 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.part.count_ones() == 1
    }

    /// One side has exactly two leaves.
    pub fn is_elementary(&self) -> bool {
        self.part.count_ones() == 2
    }

    /// Both sides meet both colour classes, where leaves `< d` are red.
    pub fn is_bicolored(&self, d: usize) -> bool {
        let red = full_mask(d);
        let bichromatic = |s: u64| s & red != 0 && s & !red != 0;
        bichromatic(self.part) && bichromatic(self.complement())
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Split {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m
            .cmp(&other.m)
            .then(self.part.count_ones().cmp(&other.part.count_ones()))
            .then_with(|| self.part_indices().cmp(&other.part_indices()))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.part_indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Four-containment compatibility test.
pub fn splits_compatible(s1: &Split, s2: &Split) -> Result<bool> {
    if s1.m != s2.m {
        return Err(Error::Dimension(format!("splits on {} and {} leaves", s1.m, s2.m)));
    }
    let (a, ac, b, bc) = (s1.part, s1.complement(), s2.part, s2.complement());
    let sub = |x: u64, y: u64| x & !y == 0;
    Ok(sub(a, b) || sub(a, bc) || sub(b, ac) || sub(ac, bc))
}

/// Leaf naming for bicolored trees: `r_i` is leaf `i - 1`, `g_j` is leaf `d + j - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafNames {
    pub d: usize,
    pub n: usize,
}

impl LeafNames {
    pub fn name(&self, leaf: usize) -> String {
        if leaf < self.d {
            format!("r{}", leaf + 1)
        } else {
            format!("g{}", leaf - self.d + 1)
        }
    }

    pub fn parse(&self, name: &str) -> Result<usize> {
        let bad = || Error::Parse(format!("leaf name {name:?} (expected r1..r{} or g1..g{})", self.d, self.n));
        let (kind, num) = name.trim().split_at(1);
        let k: usize = num.parse().map_err(|_| bad())?;
        match kind {
            "r" | "R" if (1..=self.d).contains(&k) => Ok(k - 1),
            "g" | "G" if (1..=self.n).contains(&k) => Ok(self.d + k - 1),
            _ => Err(bad()),
        }
    }

    pub fn split(&self, names: &[&str]) -> Result<Split> {
        let idx: Vec<usize> = names.iter().map(|s| self.parse(s)).collect::<Result<_>>()?;
        Split::from_indices(self.d + self.n, &idx)
    }

    pub fn describe(&self, s: &Split) -> Vec<String> {
        s.part_indices().iter().map(|&i| self.name(i)).collect()
    }
}

/// Matrix of a single weighted bicolored split: entry `(i, j)` is `-λ` when the
/// split separates `r_i` from `g_j` and `0` otherwise.
pub fn split_matrix(s: &Split, lambda: Rational, d: usize, n: usize) -> Result<TropicalMatrix> {
    if s.m != d + n {
        return Err(Error::Dimension(format!("split on {} leaves used with d + n = {}", s.m, d + n)));
    }
    if !s.is_bicolored(d) {
        return Err(Error::NotBicolored(format!("{s:?}")));
    }
    Ok(TropicalMatrix::from_fn(d, n, |i, j| if s.separates(i, d + j) { -lambda } else { Rational::ZERO }))
}

/// `λ_S = ½ min (Ā[i][j] + Ā[k][l] - Ā[i][l] - Ā[k][j])` over `r_i, g_j` on one
/// side and `r_k, g_l` on the other.
pub fn split_weight(abar: &TropicalMatrix, s: &Split) -> Result<Rational> {
    let (d, n) = (abar.rows(), abar.cols());
    if s.m != d + n {
        return Err(Error::Dimension(format!("split on {} leaves used with d + n = {}", s.m, d + n)));
    }
    if !s.is_bicolored(d) {
        return Err(Error::NotBicolored(format!("{s:?}")));
    }
    Ok(split_weight_unchecked(abar, s.part, s.complement()))
}

pub(crate) fn split_weight_unchecked(a: &TropicalMatrix, u: u64, uc: u64) -> Rational {
    let d = a.rows();
    let side = |mask: u64| -> (Vec<usize>, Vec<usize>) {
        let idx = mask_indices(mask);
        let reds = idx.iter().copied().filter(|&x| x < d).collect();
        let greens = idx.iter().copied().filter(|&x| x >= d).map(|x| x - d).collect();
        (reds, greens)
    };
    let (r1, g1) = side(u);
    let (r2, g2) = side(uc);
    let mut best: Option<Rational> = None;
    for &i in &r1 {
        for &j in &g1 {
            for &k in &r2 {
                for &l in &g2 {
                    let v = a.get(i, j) + a.get(k, l) - a.get(i, l) - a.get(k, j);
                    if best.map_or(true, |b| v < b) {
                        best = Some(v);
                    }
                }
            }
        }
    }
    best.expect("bicolored split has a straddling quartet").half()
}
