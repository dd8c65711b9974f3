//! Tropical, Kapranov and Barvinok rank.

mod barvinok;

use rayon::prelude::*;
use serde::Serialize;

pub use barvinok::{arrangement_vertices, barvinok_rank, barvinok_rank_le, barvinok_rank_le_with, BarvinokWitness};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::semiring_core::{minor_indices, tropical_det_with, MinorIndex, Rational, TropicalMatrix};

/// The rank-one matrix `(x_i + y_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankOneFactor {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl RankOneFactor {
    pub fn to_matrix(&self) -> TropicalMatrix {
        TropicalMatrix::from_fn(self.x.len(), self.y.len(), |i, j| self.x[i] + self.y[j])
    }
}

pub fn min_plus_product(x: &TropicalMatrix, y: &TropicalMatrix) -> Result<TropicalMatrix> {
    if x.cols() != y.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(TropicalMatrix::from_fn(x.rows(), y.cols(), |i, j| {
        (0..x.cols()).map(|k| x.get(i, k) + y.get(k, j)).min().unwrap()
    }))
}

/// Lexicographically first tropically nonsingular `k x k` minor, if any.
pub(crate) fn first_nonsingular_minor(a: &TropicalMatrix, k: usize, budget: &Budget) -> Result<Option<MinorIndex>> {
    if k > budget.max_det_size {
        return Err(Error::Budget(format!("{k}x{k} minors exceed the permutation budget ({})", budget.max_det_size)));
    }
    let indices = minor_indices(a.rows(), a.cols(), k);
    indices
        .par_iter()
        .find_map_first(|ij| {
            let sub = a.submatrix_unchecked(&ij.rows, &ij.cols);
            match tropical_det_with(&sub, budget) {
                Ok(det) if det.is_singular() => None,
                Ok(_) => Some(Ok(ij.clone())),
                Err(e) => Some(Err(e)),
            }
        })
        .transpose()
}

pub fn tropical_rank(a: &TropicalMatrix) -> Result<usize> {
    tropical_rank_with(a, &Budget::default())
}

/// Largest `k` admitting a nonsingular `k x k` minor; scans sizes from the top.
pub fn tropical_rank_with(a: &TropicalMatrix, budget: &Budget) -> Result<usize> {
    let top = a.rows().min(a.cols());
    for k in (2..=top).rev() {
        if first_nonsingular_minor(a, k, budget)?.is_some() {
            return Ok(k);
        }
    }
    Ok(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrevarietyVerdict {
    pub member: bool,
    /// First nonsingular `(r+1)`-minor when `member` is false.
    pub witness: Option<MinorIndex>,
}

fn check_rank_arg(a: &TropicalMatrix, r: usize) -> Result<()> {
    let top = a.rows().min(a.cols());
    if r == 0 || r > top {
        return Err(Error::InvalidArgument(format!("rank {r} outside 1..={top}")));
    }
    Ok(())
}

pub fn prevariety_member(a: &TropicalMatrix, r: usize) -> Result<PrevarietyVerdict> {
    prevariety_member_with(a, r, &Budget::default())
}

/// Whether every `(r+1)`-minor is tropically singular.
pub fn prevariety_member_with(a: &TropicalMatrix, r: usize, budget: &Budget) -> Result<PrevarietyVerdict> {
    check_rank_arg(a, r)?;
    if r == a.rows().min(a.cols()) {
        return Ok(PrevarietyVerdict { member: true, witness: None });
    }
    let witness = first_nonsingular_minor(a, r + 1, budget)?;
    Ok(PrevarietyVerdict { member: witness.is_none(), witness })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KapranovStatus {
    Member,
    NonMember,
    UndecidableByMinors,
}

/// Whether the `k x k` minors of a `d x n` matrix form a tropical basis.
pub fn minors_form_tropical_basis(k: usize, d: usize, n: usize) -> bool {
    let m = d.min(n);
    k <= 3 || k == m || (k == 4 && m <= 6)
}

pub fn kapranov_status(a: &TropicalMatrix, r: usize) -> Result<KapranovStatus> {
    let verdict = prevariety_member(a, r)?;
    if !verdict.member {
        return Ok(KapranovStatus::NonMember);
    }
    if r == a.rows().min(a.cols()) || minors_form_tropical_basis(r + 1, a.rows(), a.cols()) {
        Ok(KapranovStatus::Member)
    } else {
        Ok(KapranovStatus::UndecidableByMinors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub tropical_rank: usize,
    pub kapranov_lower: usize,
    pub kapranov_upper: usize,
    pub kapranov_exact: bool,
    pub barvinok_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BarvinokWitness>,
}

pub fn rank_report(a: &TropicalMatrix) -> Result<RankReport> {
    rank_report_with(a, &Budget::default())
}

pub fn rank_report_with(a: &TropicalMatrix, budget: &Budget) -> Result<RankReport> {
    let t = tropical_rank_with(a, budget)?;
    let (b, witness) = barvinok::barvinok_rank_from(a, t, budget)?;
    let top = a.rows().min(a.cols());
    let exact = t == top || t == b || minors_form_tropical_basis(t + 1, a.rows(), a.cols());
    let upper = if exact { t } else { b.min(top) };
    Ok(RankReport {
        tropical_rank: t,
        kapranov_lower: t,
        kapranov_upper: upper,
        kapranov_exact: exact,
        barvinok_rank: b,
        witness: Some(witness),
    })
}
