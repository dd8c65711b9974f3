//! Sign-twisted real linear forms and their combinatorially positive parts.
//!
//! A form `Σ c_i x_i` with real coefficients tropicalizes (trivial valuation) to
//! `min_i w_i` over its support. A point is in the positive part iff that
//! minimum is attained at a positive and at a negative coefficient.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::semiring_core::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    pub coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn vars(&self) -> usize {
        self.coeffs.len()
    }

    /// `f^s`: the coefficient of `x_i` is multiplied by `s_i`.
    pub fn twist(&self, s: &[i8]) -> Result<LinearForm> {
        if s.len() != self.vars() {
            return Err(Error::Dimension(format!("{} signs for a form in {} variables", s.len(), self.vars())));
        }
        if s.iter().any(|&x| x != 1 && x != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        let coeffs = self.coeffs.iter().zip(s).map(|(&c, &x)| if x < 0 { -c } else { c }).collect();
        Ok(LinearForm { coeffs })
    }

    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vars()).filter(|&i| !self.coeffs[i].is_zero())
    }

    /// All nonzero coefficients share one sign.
    pub fn is_monomial_signed(&self) -> bool {
        let signs: Vec<bool> = self.support().map(|i| self.coeffs[i].is_positive()).collect();
        signs.iter().all_equal()
    }

    /// Whether the minimum of `w` over the support is attained with both signs.
    pub fn is_positive_at(&self, w: &[Rational]) -> Result<bool> {
        if w.len() != self.vars() {
            return Err(Error::Dimension(format!("point in {} coordinates for {} variables", w.len(), self.vars())));
        }
        let Some(best) = self.support().map(|i| w[i]).min() else {
            return Ok(false);
        };
        let attained: Vec<usize> = self.support().filter(|&i| w[i] == best).collect();
        Ok(attained.iter().any(|&i| self.coeffs[i].is_positive()) && attained.iter().any(|&i| self.coeffs[i].is_negative()))
    }

    /// A point of the positive part, or `None` when it is empty. The first
    /// positive and first negative support coordinates are set to `0`, the
    /// rest to `1`.
    pub fn positive_witness(&self) -> Option<Vec<Rational>> {
        let pos = self.support().find(|&i| self.coeffs[i].is_positive())?;
        let neg = self.support().find(|&i| self.coeffs[i].is_negative())?;
        let w: Vec<Rational> =
            (0..self.vars()).map(|i| if i == pos || i == neg { Rational::ZERO } else { Rational::ONE }).collect();
        debug_assert!(self.is_positive_at(&w).unwrap_or(false));
        Some(w)
    }
}

/// Index of the pair `i < j` among the pairs of `{0..m-1}` in lexicographic order.
fn pair_slot(m: usize, i: usize, j: usize) -> usize {
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// The forms `p_ij x_k - p_ik x_j + p_jk x_i` for `i < j < k`, cutting out the
/// row space of a `2 x m` matrix with Plücker vector `p` (lexicographic pairs).
pub fn plucker_linear_forms(m: usize, p: &[Rational]) -> Result<Vec<((usize, usize, usize), LinearForm)>> {
    if p.len() != m * (m - 1) / 2 {
        return Err(Error::Dimension(format!("{} Plücker coordinates for m = {m}", p.len())));
    }
    let mut out = Vec::new();
    for t in (0..m).combinations(3) {
        let (i, j, k) = (t[0], t[1], t[2]);
        let mut coeffs = vec![Rational::ZERO; m];
        coeffs[k] = p[pair_slot(m, i, j)];
        coeffs[j] = -p[pair_slot(m, i, k)];
        coeffs[i] = p[pair_slot(m, j, k)];
        out.push(((i, j, k), LinearForm::new(coeffs)));
    }
    Ok(out)
}
