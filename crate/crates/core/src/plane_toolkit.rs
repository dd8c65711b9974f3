//! Rank-3 criteria on user-supplied tropical planes.
//!
//! A plane is given by its 2-faces, each `conv(base) + cone(rays)` with rays
//! `Σ_{i∈H} e_i`. Points are compared in the chart where the last coordinate
//! is zero. Membership tests are exact.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::birkhoff_positivity::{minor_positivity, positive_prevariety_member, PositivityCertificate};
use crate::error::{Error, Result};
use crate::semiring_core::{MinorIndex, Rational, TropicalMatrix};
use crate::tree_space::{bicolored_tree_from_matrix, BicoloredTree};

/// Flag of flats `H1 ⊂ H2` attached to a wing (1-based in JSON, 0-based here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub h1: Vec<usize>,
    pub h2: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneFace {
    pub base: Vec<Vec<Rational>>,
    /// Ray generators as 0/1 indicator vectors.
    pub rays: Vec<Vec<u8>>,
    pub flag: Option<Flag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPlaneDescription {
    pub d: usize,
    pub faces: Vec<PlaneFace>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagJson {
    #[serde(rename = "H1")]
    h1: Vec<usize>,
    #[serde(rename = "H2")]
    h2: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceJson {
    base: Vec<Vec<Rational>>,
    #[serde(default)]
    rays: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flag: Option<FlagJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneJson {
    d: usize,
    faces: Vec<FaceJson>,
}

fn one_based_set(v: &[usize], d: usize, what: &str) -> Result<Vec<usize>> {
    if v.iter().any(|&x| x == 0 || x > d) {
        return Err(Error::InvalidPlane(format!("{what} mentions a coordinate outside 1..={d}")));
    }
    let mut out: Vec<usize> = v.iter().map(|x| x - 1).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl TropicalPlaneDescription {
    pub fn new(d: usize, faces: Vec<PlaneFace>) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidPlane(format!("a plane needs ambient dimension at least 3, got {d}")));
        }
        for (k, f) in faces.iter().enumerate() {
            if f.base.is_empty() {
                return Err(Error::InvalidPlane(format!("face {} has no base vertex", k + 1)));
            }
            if f.base.iter().any(|v| v.len() != d) || f.rays.iter().any(|r| r.len() != d) {
                return Err(Error::Dimension(format!("face {} has vectors of the wrong length (d = {d})", k + 1)));
            }
            if f.rays.iter().flatten().any(|&x| x > 1) {
                return Err(Error::InvalidPlane(format!("face {}: ray generators must be 0/1 vectors", k + 1)));
            }
            if f.rays.iter().any(|r| r.iter().all(|&x| x == 0) || r.iter().all(|&x| x == 1)) {
                return Err(Error::InvalidPlane(format!("face {}: ray generator is zero modulo (1,..,1)", k + 1)));
            }
            if let Some(flag) = &f.flag {
                let strict = flag.h1.len() < flag.h2.len() && flag.h1.iter().all(|x| flag.h2.contains(x));
                if flag.h1.is_empty() || !strict {
                    return Err(Error::InvalidPlane(format!("face {}: flag needs ∅ ≠ H1 ⊂ H2 strictly", k + 1)));
                }
            }
            Face2::build(f, d).map_err(|e| Error::InvalidPlane(format!("face {}: {e}", k + 1)))?;
        }
        Ok(TropicalPlaneDescription { d, faces })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PlaneJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let d = raw.d;
        let faces = raw
            .faces
            .into_iter()
            .map(|f| {
                let flag = match f.flag {
                    Some(fl) => Some(Flag { h1: one_based_set(&fl.h1, d, "H1")?, h2: one_based_set(&fl.h2, d, "H2")? }),
                    None => None,
                };
                Ok(PlaneFace { base: f.base, rays: f.rays, flag })
            })
            .collect::<Result<_>>()?;
        TropicalPlaneDescription::new(d, faces)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let faces = self
            .faces
            .iter()
            .map(|f| FaceJson {
                base: f.base.clone(),
                rays: f.rays.clone(),
                flag: f.flag.as_ref().map(|fl| FlagJson {
                    h1: fl.h1.iter().map(|x| x + 1).collect(),
                    h2: fl.h2.iter().map(|x| x + 1).collect(),
                }),
            })
            .collect();
        serde_json::to_value(PlaneJson { d: self.d, faces }).expect("plane serializes")
    }

    /// The same plane moved by `t`.
    pub fn translated(&self, t: &[Rational]) -> Result<Self> {
        if t.len() != self.d {
            return Err(Error::Dimension(format!("translation of length {} for d = {}", t.len(), self.d)));
        }
        let faces = self
            .faces
            .iter()
            .map(|f| PlaneFace {
                base: f.base.iter().map(|v| v.iter().zip(t).map(|(&a, &b)| a + b).collect()).collect(),
                rays: f.rays.clone(),
                flag: f.flag.clone(),
            })
            .collect();
        Ok(TropicalPlaneDescription { d: self.d, faces })
    }
}

/// Point of `R^d` in the chart `x_d = 0`, as its first `d - 1` coordinates.
fn chart(v: &[Rational]) -> Vec<Rational> {
    let last = *v.last().expect("nonempty");
    v[..v.len() - 1].iter().map(|&x| x - last).collect()
}

fn ray_chart(r: &[u8]) -> Vec<Rational> {
    chart(&r.iter().map(|&x| Rational::from_int(x as i64)).collect::<Vec<_>>())
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// A 2-face in exact 2D coordinates relative to an origin and a basis.
struct Face2 {
    origin: Vec<Rational>,
    basis: [Vec<Rational>; 2],
    pivot: (usize, usize),
    vertices: Vec<[Rational; 2]>,
    rays: Vec<[Rational; 2]>,
    /// Valid halfplanes `a·x <= b`.
    halfplanes: Vec<([Rational; 2], Rational)>,
}

fn det2(u: &[Rational], w: &[Rational], p: usize, q: usize) -> Rational {
    u[p] * w[q] - u[q] * w[p]
}

impl Face2 {
    fn build(face: &PlaneFace, _d: usize) -> std::result::Result<Face2, String> {
        let origin = chart(&face.base[0]);
        let dirs: Vec<Vec<Rational>> = face
            .base
            .iter()
            .skip(1)
            .map(|v| sub(&chart(v), &origin))
            .chain(face.rays.iter().map(|r| ray_chart(r)))
            .collect();
        let dim = origin.len();
        let mut found = None;
        'outer: for (x, y) in (0..dirs.len()).tuple_combinations() {
            for (p, q) in (0..dim).tuple_combinations() {
                if !det2(&dirs[x], &dirs[y], p, q).is_zero() {
                    found = Some(([dirs[x].clone(), dirs[y].clone()], (p, q)));
                    break 'outer;
                }
            }
        }
        let (basis, pivot) = found.ok_or("the face is not two-dimensional")?;
        let mut f = Face2 { origin, basis, pivot, vertices: Vec::new(), rays: Vec::new(), halfplanes: Vec::new() };
        for v in &face.base {
            let c = f.coords_of_offset(&sub(&chart(v), &f.origin)).ok_or("base vertices do not span a plane")?;
            f.vertices.push(c);
        }
        for r in &face.rays {
            let c = f.coords_of_offset(&ray_chart(r)).ok_or("rays leave the affine span of the face")?;
            f.rays.push(c);
        }
        f.halfplanes = f.facet_halfplanes();
        Ok(f)
    }

    /// Coefficients `(a, b)` with `x = a·u1 + b·u2`, if `x` lies in the span.
    fn coords_of_offset(&self, x: &[Rational]) -> Option<[Rational; 2]> {
        let [u, w] = &self.basis;
        let (p, q) = self.pivot;
        let den = det2(u, w, p, q);
        let a = (x[p] * w[q] - x[q] * w[p]) / den;
        let b = (u[p] * x[q] - u[q] * x[p]) / den;
        let ok = (0..x.len()).all(|k| a * u[k] + b * w[k] == x[k]);
        ok.then_some([a, b])
    }

    fn coords(&self, point: &[Rational]) -> Option<[Rational; 2]> {
        self.coords_of_offset(&sub(&chart(point), &self.origin))
    }

    /// Lines through two vertices, or through a vertex along a ray, that keep
    /// every generator on one side. For a 2D polyhedron these are its edges.
    fn facet_halfplanes(&self) -> Vec<([Rational; 2], Rational)> {
        let mut lines: Vec<([Rational; 2], [Rational; 2])> = Vec::new();
        for (v, w) in self.vertices.iter().tuple_combinations() {
            let dir = [w[0] - v[0], w[1] - v[1]];
            if !dir[0].is_zero() || !dir[1].is_zero() {
                lines.push((*v, dir));
            }
        }
        for v in &self.vertices {
            for r in &self.rays {
                lines.push((*v, *r));
            }
        }
        let mut out = Vec::new();
        for (v, dir) in lines {
            let normal = [-dir[1], dir[0]];
            let dot = |x: &[Rational; 2]| normal[0] * x[0] + normal[1] * x[1];
            let level = dot(&v);
            let below = self.vertices.iter().all(|x| dot(x) <= level) && self.rays.iter().all(|r| dot(r) <= Rational::ZERO);
            let above = self.vertices.iter().all(|x| dot(x) >= level) && self.rays.iter().all(|r| dot(r) >= Rational::ZERO);
            if below {
                out.push((normal, level));
            }
            if above {
                out.push(([-normal[0], -normal[1]], -level));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn contains(&self, c: &[Rational; 2], strict: bool) -> bool {
        self.halfplanes.iter().all(|(a, b)| {
            let lhs = a[0] * c[0] + a[1] * c[1];
            if strict {
                lhs < *b
            } else {
                lhs <= *b
            }
        })
    }

    /// Whether `v + cone(r)` is an edge: some valid halfplane is tight along it.
    fn has_unbounded_edge(&self, v: &[Rational; 2], r: &[Rational; 2]) -> bool {
        self.halfplanes.iter().any(|(a, b)| a[0] * v[0] + a[1] * v[1] == *b && (a[0] * r[0] + a[1] * r[1]).is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "face")]
pub enum ColumnPlacement {
    /// In the relative interior of the face (0-based index).
    Interior(usize),
    /// On the plane, but only on the boundary of 2-faces.
    Boundary(usize),
    Off,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceMarking {
    pub placements: Vec<ColumnPlacement>,
}

impl FaceMarking {
    pub fn face_of(&self, j: usize) -> Option<usize> {
        match self.placements.get(j) {
            Some(ColumnPlacement::Interior(f)) => Some(*f),
            _ => None,
        }
    }

    pub fn non_generic(&self) -> Vec<usize> {
        (0..self.placements.len()).filter(|&j| self.face_of(j).is_none()).collect()
    }

    pub fn is_generic(&self) -> bool {
        self.non_generic().is_empty()
    }

    /// Marked faces in increasing order.
    pub fn marked(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.placements.len()).filter_map(|j| self.face_of(j)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn first_column_on(&self, face: usize) -> Option<usize> {
        (0..self.placements.len()).find(|&j| self.face_of(j) == Some(face))
    }
}

fn built_faces(e: &TropicalPlaneDescription) -> Result<Vec<Face2>> {
    e.faces
        .iter()
        .enumerate()
        .map(|(k, f)| Face2::build(f, e.d).map_err(|m| Error::InvalidPlane(format!("face {}: {m}", k + 1))))
        .collect()
}

/// Locates each column of `A` on the faces of `E`.
pub fn marked_faces(a: &TropicalMatrix, e: &TropicalPlaneDescription) -> Result<FaceMarking> {
    if a.rows() != e.d {
        return Err(Error::Dimension(format!("{} rows for a plane in d = {}", a.rows(), e.d)));
    }
    let faces = built_faces(e)?;
    let placements = (0..a.cols())
        .into_par_iter()
        .map(|j| {
            let col = a.column(j);
            let mut boundary = None;
            for (k, f) in faces.iter().enumerate() {
                let Some(c) = f.coords(&col) else { continue };
                if f.contains(&c, true) {
                    return ColumnPlacement::Interior(k);
                }
                if boundary.is_none() && f.contains(&c, false) {
                    boundary = Some(k);
                }
            }
            boundary.map_or(ColumnPlacement::Off, ColumnPlacement::Boundary)
        })
        .collect();
    Ok(FaceMarking { placements })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Starship {
    /// Three marked faces, 0-based, increasing.
    pub faces: [usize; 3],
    /// A column marking each face.
    pub columns: [usize; 3],
    /// Shared vertex of the common unbounded 1-face.
    pub vertex: Vec<Rational>,
    /// Indicator of its direction.
    pub ray: Vec<u8>,
}

/// First triple of marked faces sharing an unbounded edge `v + cone(r)`.
pub fn detect_starship(marking: &FaceMarking, e: &TropicalPlaneDescription) -> Result<Option<Starship>> {
    let faces = built_faces(e)?;
    let marked = marking.marked();
    if marked.iter().any(|&k| k >= faces.len()) {
        return Err(Error::IndexOutOfRange("marking refers to a face outside the plane".into()));
    }
    let edge_of = |k: usize, v: &[Rational], r: &[u8]| -> bool {
        let f = &faces[k];
        let (Some(vc), Some(rc)) = (f.coords(v), f.coords_of_offset(&ray_chart(r))) else {
            return false;
        };
        f.has_unbounded_edge(&vc, &rc)
    };
    for t in marked.iter().copied().combinations(3) {
        let first = &e.faces[t[0]];
        for v in &first.base {
            for r in &first.rays {
                if t.iter().all(|&k| edge_of(k, v, r)) {
                    let col = |k: usize| marking.first_column_on(k).expect("marked face has a column");
                    return Ok(Some(Starship {
                        faces: [t[0], t[1], t[2]],
                        columns: [col(t[0]), col(t[1]), col(t[2])],
                        vertex: v.clone(),
                        ray: r.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Coordinates `(h_1, h_2, h_3, f)` selected from the flags of the starship's
/// wings (0-based). `f` is the common `H1`; each `h_k` lies in its own `H2` only.
pub fn starship_projection(e: &TropicalPlaneDescription, s: &Starship) -> Result<Vec<usize>> {
    let flags: Vec<&Flag> = s
        .faces
        .iter()
        .map(|&k| {
            e.faces
                .get(k)
                .and_then(|f| f.flag.as_ref())
                .ok_or_else(|| Error::InvalidPlane(format!("face {} has no flag of flats", k + 1)))
        })
        .collect::<Result<_>>()?;
    starship_projection_from_flags(&flags)
}

fn starship_projection_from_flags(flags: &[&Flag]) -> Result<Vec<usize>> {
    let common = &flags[0].h1;
    if common.len() != 1 || flags.iter().any(|f| &f.h1 != common) {
        return Err(Error::InvalidPlane("the three wings must share a one-element H1".into()));
    }
    if flags.iter().map(|f| &f.h2).all_unique() {
        let mut out = Vec::with_capacity(4);
        for k in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&x| x != k).flat_map(|x| flags[x].h2.clone()).collect();
            let h = flags[k].h2.iter().copied().find(|x| !others.contains(x) && !out.contains(x));
            match h {
                Some(h) => out.push(h),
                None => {
                    return Err(Error::InvalidPlane(format!(
                        "H2 of wing {} is covered by the other two; these cannot be flats of one matroid",
                        k + 1
                    )))
                }
            }
        }
        out.push(common[0]);
        Ok(out)
    } else {
        Err(Error::InvalidPlane("the three H2 flats must be distinct".into()))
    }
}

/// Convenience for flags given directly (0-based).
pub fn starship_projection_flags(flags: [&Flag; 3]) -> Result<Vec<usize>> {
    starship_projection_from_flags(&flags)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarshipPrediction {
    pub starship: Starship,
    /// Minors on the projection rows, the three marking columns and each further column.
    pub predicted: Vec<MinorIndex>,
    /// Whether every predicted minor is indeed not positive.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rank3Certificate {
    pub certificate: PositivityCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starship: Option<StarshipPrediction>,
}

/// Scans all 4x4 minors; a plane, when given, is searched for a starship whose
/// predicted minors are cross-checked against the scan.
pub fn certify_nonpositive_rank3(a: &TropicalMatrix, plane: Option<&TropicalPlaneDescription>) -> Result<Rank3Certificate> {
    let certificate = positive_prevariety_member(a, 3)?;
    let mut prediction = None;
    if let Some(e) = plane {
        let marking = marked_faces(a, e)?;
        if let Some(s) = detect_starship(&marking, e)? {
            let predicted = match starship_projection(e, &s) {
                Ok(mut rows) => {
                    rows.sort_unstable();
                    (0..a.cols())
                        .filter(|j| !s.columns.contains(j))
                        .map(|j| {
                            let mut cols = vec![s.columns[0], s.columns[1], s.columns[2], j];
                            cols.sort_unstable();
                            MinorIndex::new(rows.clone(), cols)
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                Err(Error::InvalidPlane(_)) => Vec::new(),
                Err(e) => return Err(e),
            };
            let mut consistent = !certificate.is_positive();
            for ij in &predicted {
                consistent &= !minor_positivity(a, ij)?.passes();
            }
            prediction = Some(StarshipPrediction { starship: s, predicted, consistent });
        }
    }
    Ok(Rank3Certificate { certificate, starship: prediction })
}

/// `J_{i'}`: columns whose face contains the unbounded direction `e_{i'}`.
pub fn jmap_from_faces(marking: &FaceMarking, e: &TropicalPlaneDescription) -> Result<Vec<Vec<usize>>> {
    let bad = marking.non_generic();
    if !bad.is_empty() {
        let cols: Vec<String> = bad.iter().map(|j| (j + 1).to_string()).collect();
        return Err(Error::Precondition(format!("columns {} are not in the interior of a 2-face", cols.join(","))));
    }
    Ok((0..e.d)
        .map(|i| {
            (0..marking.placements.len())
                .filter(|&j| {
                    let f = &e.faces[marking.face_of(j).expect("generic")];
                    f.rays.iter().any(|r| r.iter().enumerate().all(|(k, &x)| (x == 1) == (k == i)))
                })
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementTree {
    /// The omitted coordinate `i'` (0-based).
    pub facet: usize,
    pub columns: Vec<usize>,
    pub tree: BicoloredTree,
    pub caterpillar: bool,
}

impl Serialize for ArrangementTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            facet: usize,
            columns: Vec<usize>,
            tree: serde_json::Value,
            caterpillar: &'a bool,
        }
        Json {
            facet: self.facet + 1,
            columns: self.columns.iter().map(|j| j + 1).collect(),
            tree: self.tree.to_json(),
            caterpillar: &self.caterpillar,
        }
        .serialize(s)
    }
}

/// One bicolored tree per coordinate `i'`: rows `[d] ∖ {i'}`, columns `J_{i'}`.
/// Facets with no columns are skipped.
pub fn tree_arrangement(a: &TropicalMatrix, jmap: &[Vec<usize>]) -> Result<Vec<ArrangementTree>> {
    let d = a.rows();
    if jmap.len() != d {
        return Err(Error::Dimension(format!("jmap has {} entries for {d} rows", jmap.len())));
    }
    if let Some(&j) = jmap.iter().flatten().find(|&&j| j >= a.cols()) {
        return Err(Error::IndexOutOfRange(format!("column {} in jmap of a matrix with {} columns", j + 1, a.cols())));
    }
    jmap.par_iter()
        .enumerate()
        .filter(|(_, cols)| !cols.is_empty())
        .map(|(i, cols)| {
            let mut cols = cols.clone();
            cols.sort_unstable();
            cols.dedup();
            let rows: Vec<usize> = (0..d).filter(|&x| x != i).collect();
            let sub = a.submatrix_unchecked(&rows, &cols);
            let tree = bicolored_tree_from_matrix(&sub).map_err(|e| match e {
                Error::Precondition(m) => Error::Precondition(format!("facet {}: {m}", i + 1)),
                other => other,
            })?;
            let caterpillar = tree.is_caterpillar();
            Ok(ArrangementTree { facet: i, columns: cols, tree, caterpillar })
        })
        .collect()
}
