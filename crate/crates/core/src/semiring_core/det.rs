use serde::Serialize;

use super::perm::all_permutations;
use super::{Permutation, Rational, TropicalMatrix};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Value of a tropical determinant together with its complete argmin set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TropicalDet {
    pub value: Rational,
    /// Optimal permutations in lexicographic order of their one-line notation.
    pub optima: Vec<Permutation>,
}

impl TropicalDet {
    pub fn is_singular(&self) -> bool {
        self.optima.len() >= 2
    }
}

fn require_square(m: &TropicalMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m.rows())
}

pub fn tropical_det(m: &TropicalMatrix) -> Result<TropicalDet> {
    tropical_det_with(m, &Budget::default())
}

pub fn tropical_det_with(m: &TropicalMatrix, budget: &Budget) -> Result<TropicalDet> {
    let size = require_square(m)?;
    if size > budget.max_det_size {
        return Err(Error::Budget(format!(
            "{size}x{size} determinant exceeds the permutation budget ({}); raise it to use the assignment route",
            budget.max_det_size
        )));
    }
    if size <= budget.exhaustive_det_size {
        Ok(det_exhaustive(m))
    } else {
        det_by_potentials(m, budget.max_optima)
    }
}

pub fn is_tropically_singular(m: &TropicalMatrix) -> Result<bool> {
    Ok(tropical_det(m)?.is_singular())
}

pub(crate) fn det_exhaustive(m: &TropicalMatrix) -> TropicalDet {
    let size = m.rows();
    let mut best: Option<Rational> = None;
    let mut optima = Vec::new();
    for sigma in all_permutations(size) {
        let cost: Rational = (0..size).map(|i| m.get(i, sigma.apply(i))).sum();
        match best {
            Some(b) if cost > b => {}
            Some(b) if cost == b => optima.push(sigma),
            _ => {
                best = Some(cost);
                optima.clear();
                optima.push(sigma);
            }
        }
    }
    TropicalDet { value: best.expect("m >= 1"), optima }
}

/// Optimal assignments via Hungarian potentials followed by enumeration of all
/// perfect matchings in the subgraph of zero reduced cost.
pub fn det_by_potentials(m: &TropicalMatrix, max_optima: usize) -> Result<TropicalDet> {
    let size = require_square(m)?;
    let (u, v) = hungarian_potentials(m);
    let tight: Vec<Vec<usize>> =
        (0..size).map(|i| (0..size).filter(|&j| m.get(i, j) - u[i] - v[j] == Rational::ZERO).collect()).collect();
    let mut optima = Vec::new();
    let mut images = vec![usize::MAX; size];
    let mut used = vec![false; size];
    enumerate_matchings(&tight, 0, &mut images, &mut used, &mut optima, max_optima)?;
    if optima.is_empty() {
        return Err(Error::Internal("assignment potentials admit no tight perfect matching".into()));
    }
    optima.sort();
    let value = (0..size).map(|i| m.get(i, optima[0].apply(i))).sum();
    Ok(TropicalDet { value, optima })
}

fn enumerate_matchings(
    tight: &[Vec<usize>],
    row: usize,
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
    cap: usize,
) -> Result<()> {
    if row == tight.len() {
        if out.len() >= cap {
            return Err(Error::Budget(format!("more than {cap} optimal permutations")));
        }
        out.push(Permutation::from_images(images.clone())?);
        return Ok(());
    }
    for &j in &tight[row] {
        if used[j] {
            continue;
        }
        used[j] = true;
        images[row] = j;
        if has_completion(tight, row + 1, used) {
            enumerate_matchings(tight, row + 1, images, used, out, cap)?;
        }
        used[j] = false;
    }
    Ok(())
}

/// Whether rows `from..` can be matched into the unused columns.
fn has_completion(tight: &[Vec<usize>], from: usize, used: &[bool]) -> bool {
    let size = tight.len();
    let mut owner: Vec<Option<usize>> = vec![None; size];
    fn augment(r: usize, tight: &[Vec<usize>], used: &[bool], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &j in &tight[r] {
            if used[j] || seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none() || augment(owner[j].unwrap(), tight, used, owner, seen) {
                owner[j] = Some(r);
                return true;
            }
        }
        false
    }
    (from..size).all(|r| {
        let mut seen = vec![false; size];
        augment(r, tight, used, &mut owner, &mut seen)
    })
}

/// Dual potentials `(u, v)` of a minimum-cost assignment: `m[i][j] >= u[i] + v[j]`
/// everywhere with equality along an optimal permutation.
pub(crate) fn hungarian_potentials(m: &TropicalMatrix) -> (Vec<Rational>, Vec<Rational>) {
    let n = m.rows();
    // 1-based arrays; column 0 is the virtual start.
    let mut u = vec![Rational::ZERO; n + 1];
    let mut v = vec![Rational::ZERO; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = m.get(i0 - 1, j - 1) - u[i0] - v[j];
                if minv[j].map_or(true, |x| cur < x) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                if delta.map_or(true, |d| minv[j].unwrap() < d) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] = u[p[j]] + delta;
                    v[j] = v[j] - delta;
                } else if let Some(x) = minv[j] {
                    minv[j] = Some(x - delta);
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (u[1..].to_vec(), v[1..].to_vec())
}

/// Shift rows then columns so that the first row and first column vanish.
pub fn canonicalize_mod_lineality(a: &TropicalMatrix) -> TropicalMatrix {
    let rows_fixed = TropicalMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) - a.get(i, 0));
    TropicalMatrix::from_fn(a.rows(), a.cols(), |i, j| rows_fixed.get(i, j) - rows_fixed.get(0, j))
}
