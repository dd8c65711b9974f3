use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// A `d x n` matrix of finite exact rationals read with min-plus semantics.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl TryFrom<MatrixJson> for TropicalMatrix {
    type Error = Error;
    fn try_from(m: MatrixJson) -> Result<Self> {
        let a = TropicalMatrix::new(m.entries)?;
        if a.rows != m.rows || a.cols != m.cols {
            return Err(Error::Dimension(format!(
                "declared {}x{} but entries are {}x{}",
                m.rows, m.cols, a.rows, a.cols
            )));
        }
        Ok(a)
    }
}

impl From<TropicalMatrix> for MatrixJson {
    fn from(a: TropicalMatrix) -> Self {
        MatrixJson { rows: a.rows, cols: a.cols, entries: a.to_rows() }
    }
}

impl TropicalMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = entries.len();
        if rows == 0 {
            return Err(Error::Dimension("matrix has no rows".into()));
        }
        let cols = entries[0].len();
        if cols == 0 {
            return Err(Error::Dimension("matrix has no columns".into()));
        }
        if let Some(i) = entries.iter().position(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("row {} has length {}, expected {cols}", i + 1, entries[i].len())));
        }
        Ok(TropicalMatrix { rows, cols, data: entries.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        TropicalMatrix { rows, cols, data }
    }

    /// Convenience constructor for integer literals. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        TropicalMatrix::new(rows.iter().map(|r| r.as_ref().iter().map(|&v| Rational::from_int(v)).collect()).collect())
            .expect("ragged integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TropicalMatrix::from_fn(rows, cols, |_, _| Rational::ZERO)
    }

    /// Syntax errors are [`Error::Parse`]; well-formed JSON with inconsistent
    /// shapes is [`Error::Dimension`].
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        TropicalMatrix::try_from(raw)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("matrix serializes")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        TropicalMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Largest minus smallest entry.
    pub fn spread(&self) -> Rational {
        let lo = self.data.iter().copied().min().unwrap();
        let hi = self.data.iter().copied().max().unwrap();
        hi - lo
    }

    pub fn submatrix(&self, ij: &MinorIndex) -> Result<Self> {
        ij.check_bounds(self.rows, self.cols)?;
        Ok(self.submatrix_unchecked(&ij.rows, &ij.cols))
    }

    pub(crate) fn submatrix_unchecked(&self, rows: &[usize], cols: &[usize]) -> Self {
        TropicalMatrix::from_fn(rows.len(), cols.len(), |k, l| self.get(rows[k], cols[l]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let all: Vec<usize> = (0..self.cols).collect();
        if rows.is_empty() || rows.iter().any(|&i| i >= self.rows) {
            return Err(Error::IndexOutOfRange(format!("row selection {rows:?} for {} rows", self.rows)));
        }
        Ok(self.submatrix_unchecked(rows, &all))
    }

    pub fn select_cols(&self, cols: &[usize]) -> Result<Self> {
        let all: Vec<usize> = (0..self.rows).collect();
        if cols.is_empty() || cols.iter().any(|&j| j >= self.cols) {
            return Err(Error::IndexOutOfRange(format!("column selection {cols:?} for {} columns", self.cols)));
        }
        Ok(self.submatrix_unchecked(&all, cols))
    }
}

impl Index<(usize, usize)> for TropicalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.to_rows().iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        let w = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>w$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Row set `I` and column set `J` of a square submatrix, stored 0-based and
/// strictly increasing. Serialized 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MinorIndexJson", into = "MinorIndexJson")]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MinorIndexJson {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl TryFrom<MinorIndexJson> for MinorIndex {
    type Error = Error;
    fn try_from(m: MinorIndexJson) -> Result<Self> {
        if m.rows.contains(&0) || m.cols.contains(&0) {
            return Err(Error::Parse("minor indices are 1-based".into()));
        }
        MinorIndex::new(m.rows.iter().map(|i| i - 1).collect(), m.cols.iter().map(|j| j - 1).collect())
    }
}

impl From<MinorIndex> for MinorIndexJson {
    fn from(m: MinorIndex) -> Self {
        MinorIndexJson { rows: m.rows.iter().map(|i| i + 1).collect(), cols: m.cols.iter().map(|j| j + 1).collect() }
    }
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::Dimension(format!("|I| = {} but |J| = {}", rows.len(), cols.len())));
        }
        if rows.is_empty() {
            return Err(Error::Dimension("empty minor".into()));
        }
        if !rows.windows(2).all(|w| w[0] < w[1]) || !cols.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("minor index sets must be strictly increasing".into()));
        }
        Ok(MinorIndex { rows, cols })
    }

    /// Builds an index from 1-based labels as they appear in prose.
    pub fn one_based(rows: &[usize], cols: &[usize]) -> Result<Self> {
        MinorIndexJson { rows: rows.to_vec(), cols: cols.to_vec() }.try_into()
    }

    pub fn full(m: usize) -> Self {
        MinorIndex { rows: (0..m).collect(), cols: (0..m).collect() }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn check_bounds(&self, d: usize, n: usize) -> Result<()> {
        if self.rows.iter().any(|&i| i >= d) || self.cols.iter().any(|&j| j >= n) {
            return Err(Error::IndexOutOfRange(format!("{self} in a {d}x{n} matrix")));
        }
        Ok(())
    }
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "I={{{}}} J={{{}}}", show(&self.rows), show(&self.cols))
    }
}

impl fmt::Debug for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A `d x n` grid of signs in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignJson", into = "SignJson")]
pub struct SignPattern {
    rows: usize,
    cols: usize,
    signs: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SignJson {
    Object { signs: Vec<Vec<i8>> },
    Grid(Vec<Vec<i8>>),
}

impl TryFrom<SignJson> for SignPattern {
    type Error = Error;
    fn try_from(s: SignJson) -> Result<Self> {
        match s {
            SignJson::Object { signs } | SignJson::Grid(signs) => SignPattern::new(signs),
        }
    }
}

impl From<SignPattern> for SignJson {
    fn from(s: SignPattern) -> Self {
        SignJson::Object { signs: s.signs.chunks(s.cols).map(|c| c.to_vec()).collect() }
    }
}

impl SignPattern {
    pub fn new(signs: Vec<Vec<i8>>) -> Result<Self> {
        let rows = signs.len();
        let cols = signs.first().map(|r| r.len()).unwrap_or(0);
        if rows == 0 || cols == 0 || signs.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("sign pattern must be a non-empty rectangular grid".into()));
        }
        if signs.iter().flatten().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("sign pattern entries must be +1 or -1".into()));
        }
        Ok(SignPattern { rows, cols, signs: signs.into_iter().flatten().collect() })
    }

    pub fn all_positive(rows: usize, cols: usize) -> Self {
        SignPattern { rows, cols, signs: vec![1; rows * cols] }
    }

    /// Pattern whose entry `(i, j)` is bit `i * cols + j` of `mask` (set bit = -1).
    pub fn from_mask(rows: usize, cols: usize, mask: u64) -> Self {
        let signs = (0..rows * cols).map(|b| if mask >> b & 1 == 1 { -1 } else { 1 }).collect();
        SignPattern { rows, cols, signs }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.signs[i * self.cols + j]
    }

    pub fn flipped(&self, i: usize, j: usize) -> Self {
        let mut s = self.clone();
        s.signs[i * self.cols + j] *= -1;
        s
    }
}
