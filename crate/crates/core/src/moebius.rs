//! Möbius transformations of the Riemann sphere.
//!
//! A [`MoebiusMap`] stores a unit-determinant representative of an element of
//! PSL(2,C). Everything that depends on the class rather than the
//! representative (classification, fixed points, multipliers) goes through the
//! squared trace, so the ± ambiguity never leaks.
//!
//! Points of the sphere are [`SpherePoint`]s. They are compared by chordal
//! distance only; there is intentionally no `PartialEq`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of CP¹: a finite complex number or ∞.
///
/// In JSON a point is `"inf"` or `[re, im]`; a bare number is read as real.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(into = "RawPoint", try_from = "RawPoint")]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub const ZERO: SpherePoint = SpherePoint::Finite(ZERO);
    pub const ONE: SpherePoint = SpherePoint::Finite(ONE);

    /// Wraps a finite complex number.
    ///
    /// # Panics
    ///
    /// Panics on NaN components. Infinite components map to [`SpherePoint::Infinity`].
    pub fn finite(z: Complex64) -> Self {
        assert!(!z.re.is_nan() && !z.im.is_nan(), "NaN is not a point of the sphere");
        if z.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }

    /// Fallible constructor for untrusted input.
    pub fn try_finite(z: Complex64) -> Result<Self> {
        if z.is_finite() {
            Ok(SpherePoint::Finite(z))
        } else {
            Err(Error::NonFinite(format!("{z}")))
        }
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Homogeneous coordinates `(x, y)` with `z = x / y`, scaled to unit length.
    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        match *self {
            SpherePoint::Infinity => (ONE, ZERO),
            SpherePoint::Finite(z) => {
                let n = (1.0 + z.norm_sqr()).sqrt();
                if n.is_finite() {
                    (z / n, ONE / n)
                } else {
                    // |z| beyond ~1e154: scale by |z| instead.
                    let r = z.norm();
                    (z / r, Complex64::new(1.0 / r, 0.0))
                }
            }
        }
    }

    /// Inverse of [`SpherePoint::homogeneous`]; `(x, 0)` is ∞.
    pub fn from_homogeneous(x: Complex64, y: Complex64) -> Self {
        if y == ZERO {
            return SpherePoint::Infinity;
        }
        let z = x / y;
        if z.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }

    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        chordal_distance(self, other) < tol
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawPoint {
    Pair([f64; 2]),
    Real(f64),
    Named(String),
}

impl From<SpherePoint> for RawPoint {
    fn from(p: SpherePoint) -> Self {
        match p {
            SpherePoint::Infinity => RawPoint::Named("inf".into()),
            SpherePoint::Finite(z) => RawPoint::Pair([z.re, z.im]),
        }
    }
}

impl TryFrom<RawPoint> for SpherePoint {
    type Error = String;

    fn try_from(raw: RawPoint) -> std::result::Result<Self, String> {
        let z = match raw {
            RawPoint::Named(s) if matches!(s.as_str(), "inf" | "infinity" | "∞") => return Ok(SpherePoint::Infinity),
            RawPoint::Named(s) => return Err(format!("expected \"inf\" or [re, im], got {s:?}")),
            RawPoint::Real(x) => Complex64::new(x, 0.0),
            RawPoint::Pair([re, im]) => Complex64::new(re, im),
        };
        SpherePoint::try_finite(z).map_err(|e| e.to_string())
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "∞"),
            SpherePoint::Finite(z) => write!(f, "{z}"),
        }
    }
}

/// The chordal metric `2|p - q| / sqrt((1 + |p|²)(1 + |q|²))`, extended to ∞.
pub fn chordal_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let (x1, y1) = p.homogeneous();
    let (x2, y2) = q.homogeneous();
    // homogeneous() returns unit vectors, so no normalisation is needed here.
    (2.0 * (x1 * y2 - x2 * y1).norm()).min(2.0)
}

/// Conjugacy type of a Möbius map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoebiusClass {
    Identity,
    Parabolic,
    Elliptic,
    Hyperbolic,
    Loxodromic,
}

impl MoebiusClass {
    /// Elliptic, hyperbolic and loxodromic maps have two fixed points and can
    /// be flipped.
    pub fn has_two_fixed_points(self) -> bool {
        matches!(
            self,
            MoebiusClass::Elliptic | MoebiusClass::Hyperbolic | MoebiusClass::Loxodromic
        )
    }
}

/// A unit-determinant representative `[[a, b], [c, d]]` of an element of PSL(2,C).
///
/// Serializes as `[[a, b], [c, d]]` with complex entries `[re, im]`. Input
/// goes through [`MoebiusMap::new`], which rescales to determinant one.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(into = "[[Complex64; 2]; 2]", try_from = "[[Entry; 2]; 2]")]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl From<MoebiusMap> for [[Complex64; 2]; 2] {
    fn from(m: MoebiusMap) -> Self {
        [[m.a, m.b], [m.c, m.d]]
    }
}

/// A matrix entry in JSON: `[re, im]` or a real number.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Complex(Complex64),
    Real(f64),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Complex64 {
        match e {
            Entry::Complex(z) => z,
            Entry::Real(x) => Complex64::new(x, 0.0),
        }
    }
}

impl TryFrom<[[Entry; 2]; 2]> for MoebiusMap {
    type Error = Error;

    fn try_from([[a, b], [c, d]]: [[Entry; 2]; 2]) -> Result<Self> {
        MoebiusMap::new(a.into(), b.into(), c.into(), d.into())
    }
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    /// Builds `z ↦ (az + b) / (cz + d)` and rescales it to determinant one.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        for z in [a, b, c, d] {
            if !z.is_finite() {
                return Err(Error::NonFinite(format!("{z}")));
            }
        }
        let det = a * d - b * c;
        let scale = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
        if det.norm() <= f64::EPSILON * scale || det == ZERO {
            return Err(Error::SingularMatrix);
        }
        Ok(MoebiusMap { a, b, c, d }.normalized())
    }

    /// The affine map `z ↦ μz + C`.
    pub fn affine(multiplier: Complex64, constant: Complex64) -> Result<Self> {
        Self::new(multiplier, constant, ZERO, ONE)
    }

    pub fn translation(t: Complex64) -> Self {
        MoebiusMap {
            a: ONE,
            b: t,
            c: ZERO,
            d: ONE,
        }
    }

    pub fn scaling(lambda: Complex64) -> Result<Self> {
        Self::affine(lambda, ZERO)
    }

    /// The unique map sending `from[i]` to `to[i]`. Each triple must consist
    /// of distinct points.
    pub fn from_three_points(from: [SpherePoint; 3], to: [SpherePoint; 3]) -> Result<Self> {
        let a = to_zero_one_infinity(from)?;
        let b = to_zero_one_infinity(to)?;
        Ok(compose(&b.inverse(), &a))
    }

    fn normalized(self) -> Self {
        let det = self.a * self.d - self.b * self.c;
        let k = ONE / det.sqrt();
        let mut m = MoebiusMap {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            d: self.d * k,
        };
        // Fix the sign of the representative: first nonzero entry of
        // (a + d, a, b, c) has positive real part (or zero real part and
        // positive imaginary part).
        let key = [m.a + m.d, m.a, m.b, m.c]
            .into_iter()
            .find(|z| *z != ZERO)
            .unwrap_or(ONE);
        if key.re < 0.0 || (key.re == 0.0 && key.im < 0.0) {
            m = MoebiusMap {
                a: -m.a,
                b: -m.b,
                c: -m.c,
                d: -m.d,
            };
        }
        m
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn trace_squared(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    /// Squared Frobenius norm, used to scale algebraic tolerances.
    fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    fn algebraic_eps(&self, tol: &Tolerance) -> f64 {
        tol.algebraic * self.norm_sqr().max(1.0)
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .normalized()
    }

    /// Applies the map; the pole goes to ∞ and ∞ goes to `a / c`.
    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let (x, y) = p.homogeneous();
        SpherePoint::from_homogeneous(self.a * x + self.b * y, self.c * x + self.d * y)
    }

    pub fn apply_complex(&self, z: Complex64) -> SpherePoint {
        self.apply(&SpherePoint::finite(z))
    }

    /// True when the map equals ±I within the algebraic tolerance.
    pub fn is_identity(&self, tol: &Tolerance) -> bool {
        let eps = self.algebraic_eps(tol);
        self.b.norm() < eps && self.c.norm() < eps && (self.a - self.d).norm() < eps
    }

    /// Projective distance between two maps: `min(‖M - N‖, ‖M + N‖)` in the
    /// Frobenius norm of the unit-determinant representatives.
    pub fn distance(&self, other: &MoebiusMap) -> f64 {
        let diff = |s: f64| {
            ((self.a - other.a * s).norm_sqr()
                + (self.b - other.b * s).norm_sqr()
                + (self.c - other.c * s).norm_sqr()
                + (self.d - other.d * s).norm_sqr())
            .sqrt()
        };
        diff(1.0).min(diff(-1.0))
    }

    pub fn conjugate_by(&self, g: &MoebiusMap) -> MoebiusMap {
        compose(&compose(g, self), &g.inverse())
    }

    /// For a map fixing ∞, returns `(μ, C)` with the map equal to `z ↦ μz + C`.
    pub fn as_affine(&self, tol: &Tolerance) -> Option<(Complex64, Complex64)> {
        if self.c.norm() > self.algebraic_eps(tol) {
            return None;
        }
        Some((self.a / self.d, self.b / self.d))
    }

    /// Eigenvalue of the stored representative on the eigenline of `p`.
    fn eigenvalue_at(&self, p: &SpherePoint) -> Complex64 {
        let (x, y) = p.homogeneous();
        let mx = self.a * x + self.b * y;
        let my = self.c * x + self.d * y;
        // Rayleigh quotient; (x, y) is a unit vector.
        mx * x.conj() + my * y.conj()
    }

    /// Derivative of the map at one of its fixed points, in the chart at that
    /// point (`1/z` at ∞). Equals `λ⁻²` for the eigenvalue `λ` of the eigenline.
    pub fn multiplier_at(&self, p: &SpherePoint) -> Complex64 {
        let lambda = self.eigenvalue_at(p);
        ONE / (lambda * lambda)
    }

    /// Fixed points together with the eigenvalue of the stored representative
    /// on each eigenline.
    pub(crate) fn fixed_points_with_eigenvalues(&self, tol: &Tolerance) -> Result<Vec<(SpherePoint, Complex64)>> {
        Ok(fixed_points(self, tol)?
            .into_iter()
            .map(|p| {
                let l = self.eigenvalue_at(&p);
                (p, l)
            })
            .collect())
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z ↦ ({} z + {}) / ({} z + {})", self.a, self.b, self.c, self.d)
    }
}

impl std::ops::Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: MoebiusMap) -> MoebiusMap {
        compose(&self, &rhs)
    }
}

/// Map sending `p[0], p[1], p[2]` to `0, 1, ∞`.
fn to_zero_one_infinity(p: [SpherePoint; 3]) -> Result<MoebiusMap> {
    let h = p.map(|q| q.homogeneous());
    let det = |u: (Complex64, Complex64), v: (Complex64, Complex64)| u.0 * v.1 - v.0 * u.1;
    // Linear forms vanishing at p0 and p2, scaled so p1 goes to 1.
    let k1 = det(h[1], h[2]);
    let k3 = det(h[1], h[0]);
    if k1 == ZERO || k3 == ZERO || det(h[0], h[2]) == ZERO {
        return Err(Error::DegenerateQuadruple("three points are not distinct"));
    }
    MoebiusMap::new(k1 * h[0].1, -k1 * h[0].0, k3 * h[2].1, -k3 * h[2].0)
}

/// The map `x ↦ f(g(x))`, renormalised to determinant one.
pub fn compose(f: &MoebiusMap, g: &MoebiusMap) -> MoebiusMap {
    MoebiusMap {
        a: f.a * g.a + f.b * g.c,
        b: f.a * g.b + f.b * g.d,
        c: f.c * g.a + f.d * g.c,
        d: f.c * g.b + f.d * g.d,
    }
    .normalized()
}

/// Trace classification. Comparisons use the squared trace and the
/// tolerance scaled by the matrix norm; `|tr² - 4|` below it is Parabolic.
pub fn classify(m: &MoebiusMap, tol: &Tolerance) -> MoebiusClass {
    if m.is_identity(tol) {
        return MoebiusClass::Identity;
    }
    let eps = m.algebraic_eps(tol);
    let t2 = m.trace_squared();
    if (t2 - 4.0).norm() < eps {
        MoebiusClass::Parabolic
    } else if t2.im.abs() < eps && t2.re > -eps && t2.re < 4.0 {
        MoebiusClass::Elliptic
    } else if t2.im.abs() < eps && t2.re > 4.0 {
        MoebiusClass::Hyperbolic
    } else {
        MoebiusClass::Loxodromic
    }
}

/// Roots of `c z² + (d - a) z - b = 0` on the sphere: one point for a
/// parabolic map, two distinct points otherwise.
pub fn fixed_points(m: &MoebiusMap, tol: &Tolerance) -> Result<Vec<SpherePoint>> {
    let class = classify(m, tol);
    let MoebiusMap { a, b, c, d } = *m;
    match class {
        MoebiusClass::Identity => Err(Error::IdentityMap),
        MoebiusClass::Parabolic => {
            // Double root (a - d) / 2c, or ∞ for a translation.
            if c.norm() <= m.algebraic_eps(tol) {
                Ok(vec![SpherePoint::Infinity])
            } else {
                Ok(vec![SpherePoint::from_homogeneous(a - d, 2.0 * c)])
            }
        }
        _ => {
            let disc = (m.trace_squared() - 4.0).sqrt();
            let dma = d - a;
            // Pick the sign that avoids cancellation in q.
            let s = if (dma.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
            let q = -(dma + disc * s) / 2.0;
            let z1 = SpherePoint::from_homogeneous(q, c);
            let z2 = SpherePoint::from_homogeneous(-b, q);
            Ok(vec![z1, z2])
        }
    }
}

/// The pair of derivatives `{μ, 1/μ}` at the two fixed points, in the order
/// returned by [`fixed_points`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MultiplierPair(pub [Complex64; 2]);

impl MultiplierPair {
    /// Unordered comparison.
    pub fn approx_eq(&self, other: &MultiplierPair, tol: f64) -> bool {
        let [a, b] = self.0;
        let [c, d] = other.0;
        ((a - c).norm() < tol && (b - d).norm() < tol) || ((a - d).norm() < tol && (b - c).norm() < tol)
    }

    pub fn contains(&self, mu: Complex64, tol: f64) -> bool {
        self.0.iter().any(|m| (m - mu).norm() < tol)
    }
}

pub fn multiplier_pair(m: &MoebiusMap, tol: &Tolerance) -> Result<MultiplierPair> {
    match classify(m, tol) {
        MoebiusClass::Identity | MoebiusClass::Parabolic => Err(Error::NotDiagonalizable),
        _ => {
            let fps = fixed_points(m, tol)?;
            Ok(MultiplierPair([m.multiplier_at(&fps[0]), m.multiplier_at(&fps[1])]))
        }
    }
}

/// Cross-ratio `(a - b)(c - d) / ((b - c)(d - a))`, with the usual limits
/// when an argument is ∞.
///
/// An indeterminate value (two coincidences, 0/0) is always an error. With
/// `strict`, any coincidence is an error even when the value is defined
/// (it is then 0, 1 or ∞).
pub fn cross_ratio(
    a: &SpherePoint,
    b: &SpherePoint,
    c: &SpherePoint,
    d: &SpherePoint,
    strict: bool,
    tol: &Tolerance,
) -> Result<SpherePoint> {
    let pts = [a, b, c, d];
    if strict {
        for i in 0..4 {
            for j in (i + 1)..4 {
                if pts[i].approx_eq(pts[j], tol.chordal) {
                    return Err(Error::DegenerateQuadruple("coincident points"));
                }
            }
        }
    }
    let h = pts.map(|p| p.homogeneous());
    let det = |i: usize, j: usize| h[i].0 * h[j].1 - h[j].0 * h[i].1;
    let num = det(0, 1) * det(2, 3);
    let den = det(1, 2) * det(3, 0);
    let small = tol.chordal * tol.chordal;
    if num.norm() < small && den.norm() < small {
        return Err(Error::DegenerateQuadruple("cross-ratio is indeterminate"));
    }
    if den.norm() < small {
        return Ok(SpherePoint::Infinity);
    }
    if num.norm() < small {
        return Ok(SpherePoint::ZERO);
    }
    Ok(SpherePoint::from_homogeneous(num, den))
}
