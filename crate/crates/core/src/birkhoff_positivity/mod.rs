//! Positivity and signedness of determinantal hypersurfaces and prevarieties.
//!
//! A matrix lies in the positive part of a minor's hypersurface iff the minimum
//! of the minor's tropical determinant is attained by an even and an odd
//! permutation. Sign patterns twist the permutation signs entrywise.

mod cartoon;
mod orthant;
pub mod signed_forms;

pub use cartoon::{cartoon_has_marked_triangle, cartoon_of_edge, Cartoon};
pub use orthant::{birkhoff_edges, orthant_coloring, orthant_coloring_with, verify_cut_property, CutReport, OrthantColoring};
pub use signed_forms::{plucker_linear_forms, LinearForm};

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::rank_engine::prevariety_member_with;
use crate::semiring_core::{
    is_birkhoff_edge, minor_indices, tropical_det_with, MinorIndex, Permutation, Rational, SignPattern, TropicalMatrix,
};

/// Sign data of the optimal terms of one minor.
///
/// In the signed setting `even_attained` means some optimal term has sign `+1`
/// after twisting, `odd_attained` some optimal term has sign `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorVerdict {
    pub index: MinorIndex,
    pub min_value: Rational,
    pub even_attained: bool,
    pub odd_attained: bool,
    pub optimum_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinorStatus {
    Positive,
    NotPositive,
    OffHypersurface,
}

impl MinorVerdict {
    pub fn on_hypersurface(&self) -> bool {
        self.optimum_count >= 2
    }

    pub fn status(&self) -> MinorStatus {
        if !self.on_hypersurface() {
            MinorStatus::OffHypersurface
        } else if self.even_attained && self.odd_attained {
            MinorStatus::Positive
        } else {
            MinorStatus::NotPositive
        }
    }

    /// Positive or off the hypersurface.
    pub fn passes(&self) -> bool {
        self.status() != MinorStatus::NotPositive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityVerdict {
    PositivePrevariety,
    NotPositive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityCertificate {
    pub verdict: PositivityVerdict,
    /// Lexicographically first violating minor.
    pub witness: Option<MinorVerdict>,
    pub minors_checked: usize,
}

impl PositivityCertificate {
    pub fn is_positive(&self) -> bool {
        self.verdict == PositivityVerdict::PositivePrevariety
    }
}

/// Sign of the term `σ` of the minor `ij`, twisted by `s` when given.
fn term_sign(sigma: &Permutation, ij: &MinorIndex, s: Option<&SignPattern>) -> i8 {
    let mut sign = sigma.sign();
    if let Some(s) = s {
        for (k, &i) in ij.rows.iter().enumerate() {
            sign *= s.get(i, ij.cols[sigma.apply(k)]);
        }
    }
    sign
}

fn check_pattern(a: &TropicalMatrix, s: &SignPattern) -> Result<()> {
    if (s.rows(), s.cols()) != (a.rows(), a.cols()) {
        return Err(Error::Dimension(format!(
            "{}x{} sign pattern for a {}x{} matrix",
            s.rows(),
            s.cols(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

fn verdict(a: &TropicalMatrix, ij: &MinorIndex, s: Option<&SignPattern>, budget: &Budget) -> Result<MinorVerdict> {
    let det = tropical_det_with(&a.submatrix_unchecked(&ij.rows, &ij.cols), budget)?;
    let signs: Vec<i8> = det.optima.iter().map(|p| term_sign(p, ij, s)).collect();
    Ok(MinorVerdict {
        index: ij.clone(),
        min_value: det.value,
        even_attained: signs.contains(&1),
        odd_attained: signs.contains(&-1),
        optimum_count: det.optima.len(),
    })
}

pub fn minor_positivity(a: &TropicalMatrix, ij: &MinorIndex) -> Result<MinorVerdict> {
    ij.check_bounds(a.rows(), a.cols())?;
    verdict(a, ij, None, &Budget::default())
}

pub fn signed_minor_positivity(a: &TropicalMatrix, ij: &MinorIndex, s: &SignPattern) -> Result<MinorVerdict> {
    check_pattern(a, s)?;
    ij.check_bounds(a.rows(), a.cols())?;
    verdict(a, ij, Some(s), &Budget::default())
}

fn require_prevariety(a: &TropicalMatrix, r: usize, budget: &Budget) -> Result<()> {
    let pv = prevariety_member_with(a, r, budget)?;
    match pv.witness {
        Some(w) if !pv.member => Err(Error::NotInPrevariety(w)),
        _ => Ok(()),
    }
}

fn certify(a: &TropicalMatrix, r: usize, s: Option<&SignPattern>, budget: &Budget) -> Result<PositivityCertificate> {
    require_prevariety(a, r, budget)?;
    if r == a.rows().min(a.cols()) {
        return Ok(PositivityCertificate { verdict: PositivityVerdict::PositivePrevariety, witness: None, minors_checked: 0 });
    }
    let indices = minor_indices(a.rows(), a.cols(), r + 1);
    let found = indices
        .par_iter()
        .find_map_first(|ij| match verdict(a, ij, s, budget) {
            Ok(v) if v.passes() => None,
            other => Some(other),
        })
        .transpose()?;
    Ok(match found {
        Some(w) => PositivityCertificate { verdict: PositivityVerdict::NotPositive, witness: Some(w), minors_checked: indices.len() },
        None => PositivityCertificate {
            verdict: PositivityVerdict::PositivePrevariety,
            witness: None,
            minors_checked: indices.len(),
        },
    })
}

pub fn positive_prevariety_member(a: &TropicalMatrix, r: usize) -> Result<PositivityCertificate> {
    positive_prevariety_member_with(a, r, &Budget::default())
}

/// Whether every `(r+1)`-minor is combinatorially positive at `A`.
pub fn positive_prevariety_member_with(a: &TropicalMatrix, r: usize, budget: &Budget) -> Result<PositivityCertificate> {
    certify(a, r, None, budget)
}

pub fn signed_prevariety_member(a: &TropicalMatrix, s: &SignPattern, r: usize) -> Result<PositivityCertificate> {
    signed_prevariety_member_with(a, s, r, &Budget::default())
}

pub fn signed_prevariety_member_with(
    a: &TropicalMatrix,
    s: &SignPattern,
    r: usize,
    budget: &Budget,
) -> Result<PositivityCertificate> {
    check_pattern(a, s)?;
    certify(a, r, Some(s), budget)
}

/// Every violating `(r+1)`-minor in lexicographic order.
pub fn violating_minors(a: &TropicalMatrix, r: usize, s: Option<&SignPattern>, budget: &Budget) -> Result<Vec<MinorVerdict>> {
    if let Some(s) = s {
        check_pattern(a, s)?;
    }
    require_prevariety(a, r, budget)?;
    if r == a.rows().min(a.cols()) {
        return Ok(Vec::new());
    }
    let all: Vec<MinorVerdict> = minor_indices(a.rows(), a.cols(), r + 1)
        .par_iter()
        .map(|ij| verdict(a, ij, s, budget))
        .collect::<Result<_>>()?;
    Ok(all.into_iter().filter(|v| !v.passes()).collect())
}

fn require_edge(sigma: &Permutation, pi: &Permutation) -> Result<()> {
    if !is_birkhoff_edge(sigma, pi)? {
        return Err(Error::NotAnEdge(sigma.to_string(), pi.to_string()));
    }
    Ok(())
}

/// The cone of a Birkhoff edge is positive iff its endpoints have different signs.
pub fn birkhoff_edge_positive(sigma: &Permutation, pi: &Permutation) -> Result<bool> {
    require_edge(sigma, pi)?;
    Ok(sigma.sign() != pi.sign())
}
