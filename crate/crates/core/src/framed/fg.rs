//! Edge coordinates of a framed ideal triangulation.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{orbit_contains, FramedRep, OrbitCaps};
use crate::error::{Error, Result};
use crate::moebius::{cross_ratio, SpherePoint};
use crate::tolerance::Tolerance;

/// Coordinate of the edge `a c` in the quadrilateral `a b c d`, listed
/// counterclockwise: the cross-ratio `(a - b)(c - d) / ((b - c)(d - a))`.
///
/// Defined only when the four values are pairwise distinct, which is exactly
/// when the cross-ratio is finite and nonzero.
pub fn fg_edge_coordinate(
    a: &SpherePoint,
    b: &SpherePoint,
    c: &SpherePoint,
    d: &SpherePoint,
    tol: &Tolerance,
) -> Result<Complex64> {
    match cross_ratio(a, b, c, d, true, tol) {
        Ok(SpherePoint::Finite(z)) if z.norm() > 0.0 => Ok(z),
        Ok(SpherePoint::Finite(_)) => Err(Error::IllDefinedCoordinate("coordinate is 0")),
        Ok(SpherePoint::Infinity) => Err(Error::IllDefinedCoordinate("coordinate is ∞")),
        Err(_) => Err(Error::IllDefinedCoordinate("two of the four framing values coincide")),
    }
}

/// A developed ideal vertex: a lift of `marked_point` with framing `value`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Corner {
    pub marked_point: usize,
    pub value: SpherePoint,
}

/// Triangles are corner-index triples in counterclockwise order. An edge
/// shared by two triangles (traversed in opposite directions) is interior.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Triangulation {
    pub corners: Vec<Corner>,
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeCoordinate {
    /// Corner indices of the edge endpoints.
    pub edge: (usize, usize),
    pub triangles: (usize, usize),
    /// `None` when the coordinate is 0, ∞ or indeterminate.
    pub value: Option<Complex64>,
}

/// An interior edge `(u, v)` with the triangle running `u → v` and the one
/// running `v → u`.
type InteriorEdge = ((usize, usize), usize, usize);

impl Triangulation {
    fn check_combinatorics(&self) -> Result<Vec<InteriorEdge>> {
        let bad = |s: String| Err(Error::InvalidTriangulation(s));
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            if let Some(&v) = tri.iter().find(|&&v| v >= self.corners.len()) {
                return bad(format!(
                    "triangle {t} uses corner {v}, but there are {}",
                    self.corners.len()
                ));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return bad(format!("triangle {t} repeats a corner"));
            }
            for j in 0..3 {
                let e = (tri[j], tri[(j + 1) % 3]);
                if let Some(other) = directed.insert(e, t) {
                    return bad(format!(
                        "edge {e:?} has the same orientation in triangles {other} and {t}"
                    ));
                }
            }
        }
        let mut interior: Vec<_> = directed
            .iter()
            .filter(|((u, v), _)| u < v)
            .filter_map(|(&(u, v), &t1)| directed.get(&(v, u)).map(|&t2| ((u, v), t1, t2)))
            .collect();
        interior.sort_unstable();
        Ok(interior)
    }

    /// Checks the combinatorics and that each corner value lies in the orbit
    /// of its marked point's framing value.
    pub fn validate(&self, fr: &FramedRep, tol: &Tolerance) -> Result<()> {
        self.check_combinatorics()?;
        let caps = OrbitCaps {
            dedup: tol.chordal,
            ..OrbitCaps::default()
        };
        for (i, c) in self.corners.iter().enumerate() {
            let Some(seed) = fr.framing().get(c.marked_point) else {
                return Err(Error::InvalidTriangulation(format!(
                    "corner {i} names marked point {}, but there are {}",
                    c.marked_point,
                    fr.framing().len()
                )));
            };
            if !orbit_contains(fr.rep(), seed, &c.value, &caps) {
                return Err(Error::InvalidTriangulation(format!(
                    "corner {i}: {} is not in the orbit of the framing value {seed}",
                    c.value
                )));
            }
        }
        Ok(())
    }

    /// One coordinate per interior edge, sorted by edge.
    pub fn edge_coordinates(&self, fr: &FramedRep, tol: &Tolerance) -> Result<Vec<EdgeCoordinate>> {
        self.validate(fr, tol)?;
        let value = |i: usize| &self.corners[i].value;
        let third = |t: usize, u: usize, v: usize| {
            *self.triangles[t]
                .iter()
                .find(|&&x| x != u && x != v)
                .expect("three distinct corners")
        };
        Ok(self
            .check_combinatorics()?
            .into_iter()
            .map(|((u, v), t1, t2)| {
                // t1 runs u → v → w and t2 runs v → u → x, so u x v w is
                // counterclockwise with the edge joining u and v.
                let (w, x) = (third(t1, u, v), third(t2, u, v));
                let value = fg_edge_coordinate(value(u), value(x), value(v), value(w), tol).ok();
                EdgeCoordinate {
                    edge: (u, v),
                    triangles: (t1, t2),
                    value,
                }
            })
            .collect())
    }
}

/// Whether every interior edge has a finite nonzero coordinate.
pub fn triangulation_well_defined(fr: &FramedRep, triangulation: &Triangulation, tol: &Tolerance) -> Result<bool> {
    Ok(triangulation
        .edge_coordinates(fr, tol)?
        .iter()
        .all(|e| e.value.is_some()))
}
