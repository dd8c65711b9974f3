use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{0, .., m-1}`; `images[i]` is the image of `i`.
///
/// Displayed and parsed 1-based in cycle notation, e.g. `(12)` or `(1 2)(3 4)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation { images: (0..m).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x >= m || seen[x] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// One-line notation with 1-based images.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidArgument("one-line notation is 1-based".into()));
        }
        Permutation::from_images(images.iter().map(|x| x - 1).collect())
    }

    /// Builds a permutation of `{0..m-1}` from 1-based cycles.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..m).collect();
        let mut touched = vec![false; m];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > m {
                    return Err(Error::InvalidArgument(format!("cycle entry {x} outside 1..{m}")));
                }
                if touched[x - 1] {
                    return Err(Error::InvalidArgument(format!("entry {x} repeated in cycle notation")));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation (`id`, `()`, `(12)(34)`, `(1 2 3)`, `(1,10)`) or
    /// one-line notation (`[2,1,3]`, `2 1 3`).
    pub fn parse(s: &str, m: usize) -> Result<Self> {
        let t = s.trim();
        let bad = |why: &str| Error::Parse(format!("permutation {s:?}: {why}"));
        if t.is_empty() || t == "id" || t == "e" || t == "()" {
            return Ok(Permutation::identity(m));
        }
        if t.starts_with('(') {
            let mut cycles: Vec<Vec<usize>> = Vec::new();
            let mut rest = t;
            while !rest.is_empty() {
                let body_start = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
                let close = body_start.find(')').ok_or_else(|| bad("unclosed cycle"))?;
                let body = &body_start[..close];
                rest = body_start[close + 1..].trim_start();
                let has_sep = body.contains(|c: char| c == ',' || c.is_whitespace());
                let entries: Vec<usize> = if has_sep {
                    body.split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|x| !x.is_empty())
                        .map(|x| x.parse::<usize>().map_err(|_| bad("non-numeric entry")))
                        .collect::<Result<_>>()?
                } else if m <= 9 {
                    body.chars()
                        .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| bad("non-numeric entry")))
                        .collect::<Result<_>>()?
                } else {
                    vec![body.parse::<usize>().map_err(|_| bad("non-numeric entry"))?]
                };
                if !entries.is_empty() {
                    cycles.push(entries);
                }
            }
            let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
            return Permutation::from_cycles(m, &refs).map_err(|e| bad(&e.to_string()));
        }
        let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
        let images: Vec<usize> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<usize>().map_err(|_| bad("non-numeric entry")))
            .collect::<Result<_>>()?;
        if images.len() != m {
            return Err(bad(&format!("one-line notation has {} entries, expected {m}", images.len())));
        }
        Permutation::from_one_line(&images).map_err(|e| bad(&e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        check_len(self, other)?;
        Ok(Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() })
    }

    /// Cycles of length at least two, each starting at its smallest element,
    /// ordered by that element (0-based).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let m = self.len();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        let fixed = self.images.iter().enumerate().filter(|(i, &x)| *i == x).count();
        fixed + self.cycles().len()
    }

    pub fn sign(&self) -> i8 {
        if (self.len() - self.cycle_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.sign() == 1
    }

    pub fn one_line(&self) -> String {
        format!("[{}]", self.images.iter().map(|x| (x + 1).to_string()).join(","))
    }

    /// Index of the permutation in the lexicographic order of one-line notations.
    pub fn lex_rank(&self) -> usize {
        let m = self.len();
        let mut rank = 0;
        let mut used = vec![false; m];
        for (pos, &x) in self.images.iter().enumerate() {
            let smaller = (0..x).filter(|&y| !used[y]).count();
            rank = rank * (m - pos) + smaller;
            used[x] = true;
        }
        rank
    }
}

fn check_len(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("permutations on {} and {} points", a.len(), b.len())));
    }
    Ok(())
}

/// All permutations of `{0..m-1}` in lexicographic order.
pub fn all_permutations(m: usize) -> impl Iterator<Item = Permutation> {
    (0..m).permutations(m).map(|images| Permutation { images })
}

/// All single cycles of length at least two on `{0..m-1}`.
pub fn single_cycles(m: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for k in 2..=m {
        for support in (0..m).combinations(k) {
            for tail in support[1..].iter().copied().permutations(k - 1) {
                let mut images: Vec<usize> = (0..m).collect();
                let mut order = vec![support[0]];
                order.extend(tail);
                for w in 0..k {
                    images[order[w]] = order[(w + 1) % k];
                }
                out.push(Permutation { images });
            }
        }
    }
    out
}

pub fn perm_sign(sigma: &Permutation) -> i8 {
    sigma.sign()
}

/// True iff `σπ⁻¹` is a single cycle of length at least two.
pub fn is_birkhoff_edge(sigma: &Permutation, pi: &Permutation) -> Result<bool> {
    check_len(sigma, pi)?;
    let q = sigma.compose(&pi.inverse())?;
    Ok(q.cycles().len() == 1)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        let sep = if self.len() > 9 { "," } else { "" };
        for c in cycles {
            write!(f, "({})", c.iter().map(|x| (x + 1).to_string()).join(sep))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;
    /// One-line notation only, since cycle notation needs the degree.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let images: Vec<usize> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("permutation {s:?}"))))
            .collect::<Result<_>>()?;
        Permutation::from_one_line(&images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.one_line())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
