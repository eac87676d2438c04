//! End-local grafting calculus.
//!
//! A cusp end is modelled on the half-plane quotient by `T: z ↦ z + 1`, a
//! geodesic end on the quotient by `T: z ↦ λz` with `λ = e^l`. Grafting a
//! lune of angle `α_j` along the leaf with position `a_j` post-composes the
//! peripheral monodromy with the elliptic element `E_j(a_j)`, so the monodromy
//! after grafting is conjugate to `E_1(a_1) ∘ … ∘ E_r(a_r) ∘ T`.
//!
//! Direct composition is the ground truth. The closed forms for the constant
//! are kept as cross-checks; for geodesic ends only the conjugacy class of the
//! closed-form map is meaningful.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{CheckedAdd, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{classify, compose, multiplier_pair, MoebiusClass, MoebiusMap};
use crate::tolerance::Tolerance;

/// A transverse weight (lune angle).
///
/// Rational multiples of π are the preferred form: total weights are then
/// summed exactly and the `α = 2πn` test used by [`pole_order`] is exact.
///
/// In JSON: `{"pi_multiple": "1/2"}` or `{"radians": 1.3}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    PiMultiple(#[serde(with = "crate::schema::ratio")] Ratio<i64>),
    Radians(f64),
}

impl Weight {
    pub fn pi(numer: i64, denom: i64) -> Self {
        Weight::PiMultiple(Ratio::new(numer, denom))
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Weight::PiMultiple(q) => q.to_f64().unwrap_or(f64::NAN) * PI,
            Weight::Radians(x) => x,
        }
    }

    fn is_positive(&self) -> bool {
        match *self {
            Weight::PiMultiple(q) => q > Ratio::zero(),
            Weight::Radians(x) => x.is_finite() && x > 0.0,
        }
    }

    /// `e^{iα}`, exact when α is a multiple of π/2.
    pub fn unit_root(&self) -> Complex64 {
        unit_root(self, 1)
    }

    /// `e^{-iα}`, exact when α is a multiple of π/2.
    pub fn unit_root_inv(&self) -> Complex64 {
        unit_root(self, -1)
    }
}

fn unit_root(w: &Weight, sign: i64) -> Complex64 {
    if let Weight::PiMultiple(q) = *w {
        // Reduce sign·q modulo 2 exactly; quarter turns have exact values.
        let two = Ratio::from_integer(2);
        let mut r = Ratio::from_integer(sign) * q;
        r = r - two * (r / two).floor();
        let quarter = Ratio::new(1, 2);
        if (r / quarter).is_integer() {
            return match (r / quarter).to_integer() {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        return Complex64::from_polar(1.0, r.to_f64().unwrap_or(f64::NAN) * PI);
    }
    Complex64::from_polar(1.0, sign as f64 * w.radians())
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::PiMultiple(q) => write!(f, "{q}π"),
            Weight::Radians(x) => write!(f, "{x}"),
        }
    }
}

/// A ±1 sign, written as `1` or `-1` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i32", try_from = "i32")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i32(s: i32) -> Option<Self> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl From<Sign> for i32 {
    fn from(s: Sign) -> i32 {
        s.as_i32()
    }
}

impl TryFrom<i32> for Sign {
    type Error = String;

    fn try_from(s: i32) -> std::result::Result<Self, String> {
        Sign::from_i32(s).ok_or_else(|| format!("sign must be 1 or -1, got {s}"))
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Direction in which leaves spiral into a geodesic boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spiral {
    Clockwise,
    Anticlockwise,
}

/// Clockwise iff the end sign and the weight sign agree.
pub fn spiral_direction(end_sign: Sign, weight_sign: Sign) -> Spiral {
    if end_sign == weight_sign {
        Spiral::Clockwise
    } else {
        Spiral::Anticlockwise
    }
}

/// One weighted leaf entering the end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    /// A number or an exact fraction `"p/q"` in JSON.
    #[serde(deserialize_with = "crate::schema::position")]
    pub position: f64,
    pub weight: Weight,
}

impl Leaf {
    pub fn new(position: f64, weight: Weight) -> Self {
        Leaf { position, weight }
    }
}

fn validate_leaves(leaves: &[Leaf], lo: f64, hi: f64) -> Result<()> {
    let mut prev: Option<f64> = None;
    for (i, leaf) in leaves.iter().enumerate() {
        let a = leaf.position;
        if !a.is_finite() || a < lo || a >= hi {
            return Err(Error::InvalidSpec(format!(
                "leaf {i}: position {a} outside [{lo}, {hi})"
            )));
        }
        if let Some(p) = prev {
            if a <= p {
                return Err(Error::InvalidSpec(format!(
                    "leaf {i}: positions must be strictly increasing ({p} then {a})"
                )));
            }
        }
        if !leaf.weight.is_positive() {
            return Err(Error::InvalidSpec(format!(
                "leaf {i}: weight {} must be strictly positive",
                leaf.weight
            )));
        }
        prev = Some(a);
    }
    Ok(())
}

/// Leaves entering a cusp, at positions `0 ≤ a_1 < … < a_r < 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspGraftSpec {
    leaves: Vec<Leaf>,
}

impl CuspGraftSpec {
    pub fn new(leaves: Vec<Leaf>) -> Result<Self> {
        validate_leaves(&leaves, 0.0, 1.0)?;
        Ok(CuspGraftSpec { leaves })
    }

    pub fn empty() -> Self {
        CuspGraftSpec { leaves: Vec::new() }
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }
}

/// Leaves spiralling into a geodesic boundary of length `l`, at positions
/// `1 ≤ a_1 < … < a_r < e^l`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicGraftSpec {
    length: f64,
    leaves: Vec<Leaf>,
    spiral: Spiral,
}

impl GeodesicGraftSpec {
    pub fn new(length: f64, leaves: Vec<Leaf>, spiral: Spiral) -> Result<Self> {
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "boundary length {length} must be positive and finite"
            )));
        }
        let lambda = length.exp();
        if !lambda.is_finite() {
            return Err(Error::InvalidSpec(format!("boundary length {length} overflows e^l")));
        }
        validate_leaves(&leaves, 1.0, lambda)?;
        Ok(GeodesicGraftSpec { length, leaves, spiral })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn lambda(&self) -> f64 {
        self.length.exp()
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn spiral(&self) -> Spiral {
        self.spiral
    }
}

/// Grafting data at one end.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EndSpec {
    Cusp(CuspGraftSpec),
    Geodesic(GeodesicGraftSpec),
}

impl EndSpec {
    pub fn leaves(&self) -> &[Leaf] {
        match self {
            EndSpec::Cusp(s) => s.leaves(),
            EndSpec::Geodesic(s) => s.leaves(),
        }
    }

    /// Boundary length, zero for a cusp.
    pub fn length(&self) -> f64 {
        match self {
            EndSpec::Cusp(_) => 0.0,
            EndSpec::Geodesic(s) => s.length,
        }
    }

    pub fn total_weight(&self) -> f64 {
        total_weight(self.leaves())
    }

    pub fn monodromy(&self) -> EndMonodromyResult {
        match self {
            EndSpec::Cusp(s) => cusp_monodromy(s),
            EndSpec::Geodesic(s) => geodesic_monodromy(s),
        }
    }
}

fn total_weight(leaves: &[Leaf]) -> f64 {
    match exact_total(leaves) {
        Some(q) => q.to_f64().unwrap_or(f64::NAN) * PI,
        None => leaves.iter().map(|l| l.weight.radians()).sum(),
    }
}

/// Total weight as a rational multiple of π, if every weight is one.
fn exact_total(leaves: &[Leaf]) -> Option<Ratio<i64>> {
    leaves.iter().try_fold(Ratio::zero(), |acc, l| match l.weight {
        Weight::PiMultiple(q) => acc.checked_add(&q),
        Weight::Radians(_) => None,
    })
}

/// Peripheral monodromy of an end after grafting, as the affine map `z ↦ μz + C`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EndMonodromyResult {
    pub monodromy: MoebiusMap,
    pub multiplier: Complex64,
    pub constant: Complex64,
    pub total_weight: f64,
}

impl EndMonodromyResult {
    fn from_map(monodromy: MoebiusMap, total_weight: f64) -> Self {
        let [a, b, _, d] = monodromy.entries();
        EndMonodromyResult {
            monodromy,
            multiplier: a / d,
            constant: b / d,
            total_weight,
        }
    }
}

/// `z ↦ ζ(z - w) + w` for a unit complex `ζ`.
fn rotation_about(w: f64, zeta: Complex64) -> MoebiusMap {
    let w = Complex64::new(w, 0.0);
    MoebiusMap::affine(zeta, w * (1.0 - zeta)).expect("rotation is invertible")
}

/// The elliptic element `z ↦ e^{-i·angle}(z - w) + w`.
pub fn elliptic_about(w: f64, angle: f64) -> MoebiusMap {
    rotation_about(w, Weight::Radians(angle).unit_root_inv())
}

/// `E_1(a_1) ∘ … ∘ E_r(a_r) ∘ T`, with `zeta(leaf)` the rotation factor of `E_j`.
fn graft_compose(leaves: &[Leaf], deck: MoebiusMap, zeta: impl Fn(&Weight) -> Complex64) -> MoebiusMap {
    leaves.iter().rev().fold(deck, |acc, leaf| {
        compose(&rotation_about(leaf.position, zeta(&leaf.weight)), &acc)
    })
}

/// Monodromy around a grafted cusp, by direct composition with `T: z ↦ z + 1`.
pub fn cusp_monodromy(spec: &CuspGraftSpec) -> EndMonodromyResult {
    let deck = MoebiusMap::translation(Complex64::new(1.0, 0.0));
    let m = graft_compose(&spec.leaves, deck, Weight::unit_root_inv);
    EndMonodromyResult::from_map(m, total_weight(&spec.leaves))
}

/// `c = a_1 + Σ_i ω_1⁻¹…ω_i⁻¹ (a_{i+1} - a_i)` with `a_{r+1} = 1`.
pub fn cusp_c_closed_form(spec: &CuspGraftSpec) -> Result<Complex64> {
    let leaves = &spec.leaves;
    if leaves.is_empty() {
        return Err(Error::EmptySpec);
    }
    Ok(telescoping_sum(leaves, leaves[0].position, 1.0))
}

/// `start + Σ_i ω_1⁻¹…ω_i⁻¹ (a_{i+1} - a_i)`, with `a_{r+1} = last`.
fn telescoping_sum(leaves: &[Leaf], start: f64, last: f64) -> Complex64 {
    let mut c = Complex64::new(start, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for (i, leaf) in leaves.iter().enumerate() {
        prod *= leaf.weight.unit_root_inv();
        let next = leaves.get(i + 1).map_or(last, |l| l.position);
        c += prod * (next - leaf.position);
    }
    c
}

/// Monodromy around a grafted geodesic end, by direct composition with
/// `T: z ↦ λz`. Clockwise spiralling uses the reflected elliptics `e^{+iα_j}`.
pub fn geodesic_monodromy(spec: &GeodesicGraftSpec) -> EndMonodromyResult {
    let deck = MoebiusMap::scaling(Complex64::new(spec.lambda(), 0.0)).expect("λ > 0");
    let m = match spec.spiral {
        Spiral::Anticlockwise => graft_compose(&spec.leaves, deck, Weight::unit_root_inv),
        Spiral::Clockwise => graft_compose(&spec.leaves, deck, Weight::unit_root),
    };
    EndMonodromyResult::from_map(m, total_weight(&spec.leaves))
}

/// The constant of the closed-form geodesic monodromy.
///
/// Anticlockwise: `(a_1 - 1) + Σ ω_1⁻¹…ω_i⁻¹ (a_{i+1} - a_i)` with `a_{r+1} = λ`.
/// Clockwise: `(λ/a_r - 1) + Σ ω_r…ω_{r+1-i} (λ/a_{r-i} - λ/a_{r+1-i})` with `a_0 = 1`.
/// Only defined up to conjugation; compare trace² rather than this value.
pub fn geodesic_c_closed_form(spec: &GeodesicGraftSpec) -> Result<Complex64> {
    let leaves = &spec.leaves;
    if leaves.is_empty() {
        return Err(Error::EmptySpec);
    }
    let lambda = spec.lambda();
    match spec.spiral {
        Spiral::Anticlockwise => Ok(telescoping_sum(leaves, leaves[0].position - 1.0, lambda)),
        Spiral::Clockwise => {
            let r = leaves.len();
            let a = |j: usize| if j == 0 { 1.0 } else { leaves[j - 1].position };
            let mut c = Complex64::new(lambda / a(r) - 1.0, 0.0);
            let mut prod = Complex64::new(1.0, 0.0);
            for i in 1..=r {
                prod *= leaves[r - i].weight.unit_root();
                c += prod * (lambda / a(r - i) - lambda / a(r + 1 - i));
            }
            Ok(c)
        }
    }
}

/// The closed-form geodesic monodromy `z ↦ λ Π ω_j^{∓1} z + c`.
pub fn geodesic_closed_form_map(spec: &GeodesicGraftSpec) -> MoebiusMap {
    let zeta = |w: &Weight| match spec.spiral {
        Spiral::Anticlockwise => w.unit_root_inv(),
        Spiral::Clockwise => w.unit_root(),
    };
    let mu = spec
        .leaves
        .iter()
        .fold(Complex64::new(spec.lambda(), 0.0), |acc, l| acc * zeta(&l.weight));
    let c = geodesic_c_closed_form(spec).unwrap_or_default();
    MoebiusMap::affine(mu, c).expect("λ > 0")
}

/// Order of the pole of the Schwarzian at the end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PoleOrder {
    NoPole,
    Order1,
    Order2,
}

/// `Some(n)` when the total weight is `2πn` for an integer `n ≥ 0`.
///
/// Exact for rational multiples of π; otherwise within `tol.knife_edge`.
pub fn full_turns(leaves: &[Leaf], tol: &Tolerance) -> Option<u32> {
    if let Some(q) = exact_total(leaves) {
        let half = q / Ratio::from_integer(2);
        return half
            .is_integer()
            .then(|| half.to_integer())
            .and_then(|n| u32::try_from(n).ok());
    }
    let alpha = total_weight(leaves);
    let n = (alpha / TAU).round();
    ((alpha - n * TAU).abs() < tol.knife_edge && n >= 0.0).then_some(n as u32)
}

/// Pole order of the grafted structure at the end.
///
/// Geodesic ends and cusps whose total weight is not a multiple of 2π have
/// double poles. A cusp of total weight 2πn has a simple pole iff `n = 1`
/// and `C ≠ 0`, no pole iff `n = 1` and `C = 0`, and a double pole otherwise.
pub fn pole_order(spec: &EndSpec, tol: &Tolerance) -> PoleOrder {
    let EndSpec::Cusp(cusp) = spec else {
        return PoleOrder::Order2;
    };
    match full_turns(&cusp.leaves, tol) {
        Some(1) => {
            let c = cusp_monodromy(cusp).constant;
            if c.norm() < tol.knife_edge {
                PoleOrder::NoPole
            } else {
                PoleOrder::Order1
            }
        }
        _ => PoleOrder::Order2,
    }
}

/// Signed grafting data at one end: `σ` orients a geodesic boundary and is
/// absent at a cusp, `τ` signs the lamination weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignedEndData {
    spec: EndSpec,
    end_sign: Option<Sign>,
    weight_sign: Sign,
}

impl SignedEndData {
    pub fn cusp(spec: CuspGraftSpec, weight_sign: Sign) -> Self {
        SignedEndData {
            spec: EndSpec::Cusp(spec),
            end_sign: None,
            weight_sign,
        }
    }

    /// The spiral of a geodesic spec with leaves must be `spiral_direction(σ, τ)`.
    pub fn geodesic(spec: GeodesicGraftSpec, end_sign: Sign, weight_sign: Sign) -> Result<Self> {
        if !spec.leaves.is_empty() && spec.spiral != spiral_direction(end_sign, weight_sign) {
            return Err(Error::InvalidSpec(format!(
                "spiral {:?} disagrees with signs σ={}, τ={}",
                spec.spiral,
                end_sign.as_i32(),
                weight_sign.as_i32()
            )));
        }
        Ok(SignedEndData {
            spec: EndSpec::Geodesic(spec),
            end_sign: Some(end_sign),
            weight_sign,
        })
    }

    pub fn new(spec: EndSpec, end_sign: Option<Sign>, weight_sign: Sign) -> Result<Self> {
        match (spec, end_sign) {
            (EndSpec::Cusp(s), None) => Ok(Self::cusp(s, weight_sign)),
            (EndSpec::Geodesic(s), Some(e)) => Self::geodesic(s, e, weight_sign),
            (EndSpec::Cusp(_), Some(_)) => Err(Error::InvalidSpec("a cusp carries no end sign".into())),
            (EndSpec::Geodesic(_), None) => Err(Error::InvalidSpec("a geodesic end needs an end sign".into())),
        }
    }

    pub fn spec(&self) -> &EndSpec {
        &self.spec
    }

    pub fn end_sign(&self) -> Option<Sign> {
        self.end_sign
    }

    pub fn weight_sign(&self) -> Sign {
        self.weight_sign
    }

    /// Both signs negated; a geodesic spiral is unchanged since σ = τ is preserved.
    pub fn flipped(&self) -> Self {
        SignedEndData {
            spec: self.spec.clone(),
            end_sign: self.end_sign.map(|s| -s),
            weight_sign: -self.weight_sign,
        }
    }

    /// The sign applied to the unsigned exponent: `σ` at a geodesic end, `τ` at a cusp.
    pub fn resolved_sign(&self) -> Sign {
        self.end_sign.unwrap_or(self.weight_sign)
    }
}

/// Signed exponent of the end: `iα` at a cusp, `l - iα` anticlockwise and
/// `l + iα` clockwise, times the resolved sign.
pub fn grafting_exponent(end: &SignedEndData) -> Complex64 {
    let alpha = end.spec.total_weight();
    let unsigned = match &end.spec {
        EndSpec::Cusp(_) => Complex64::new(0.0, alpha),
        EndSpec::Geodesic(g) => match g.spiral {
            Spiral::Anticlockwise => Complex64::new(g.length, -alpha),
            Spiral::Clockwise => Complex64::new(g.length, alpha),
        },
    };
    unsigned * end.resolved_sign().value()
}

/// `σl + iτα`, with `l = 0` at a cusp.
pub fn signed_c_parameter(end: &SignedEndData) -> Complex64 {
    let l = end.end_sign.map_or(0.0, |s| s.value() * end.spec.length());
    Complex64::new(l, end.weight_sign.value() * end.spec.total_weight())
}

/// Kind of end read off a peripheral monodromy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndType {
    Cusp,
    Geodesic,
}

/// End data recovered from a peripheral monodromy, up to the ± ambiguity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InferredEnd {
    pub end_type: EndType,
    pub class: MoebiusClass,
    pub boundary_length: f64,
    /// Representatives in `[0, 2π)` of `{β, -β}`; both equal for β ∈ {0, π}.
    pub weight_class: [f64; 2],
}

fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if TAU - r < 1e-15 {
        0.0
    } else {
        r
    }
}

impl InferredEnd {
    /// Whether `alpha` lies in the weight class modulo 2π.
    pub fn weight_class_contains(&self, alpha: f64, tol: f64) -> bool {
        let a = reduce_angle(alpha);
        self.weight_class.iter().any(|&b| {
            let d = (a - b).abs();
            d.min(TAU - d) < tol
        })
    }
}

/// Reads end type, boundary length and total weight mod 2π off a peripheral
/// monodromy.
pub fn infer_end_from_monodromy(m: &MoebiusMap, tol: &Tolerance) -> InferredEnd {
    let class = classify(m, tol);
    match class {
        MoebiusClass::Identity | MoebiusClass::Parabolic => InferredEnd {
            end_type: EndType::Cusp,
            class,
            boundary_length: 0.0,
            weight_class: [0.0, 0.0],
        },
        _ => {
            let mu = multiplier_pair(m, tol).expect("diagonalizable").0[0];
            let beta = reduce_angle(mu.arg());
            let weight_class = [beta, reduce_angle(-beta)];
            if class == MoebiusClass::Elliptic {
                InferredEnd {
                    end_type: EndType::Cusp,
                    class,
                    boundary_length: 0.0,
                    weight_class,
                }
            } else {
                InferredEnd {
                    end_type: EndType::Geodesic,
                    class,
                    boundary_length: mu.norm().ln().abs(),
                    weight_class,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn cusp(leaves: &[(f64, Weight)]) -> CuspGraftSpec {
        CuspGraftSpec::new(leaves.iter().map(|&(a, w)| Leaf::new(a, w)).collect()).unwrap()
    }

    fn geodesic(l: f64, leaves: &[(f64, Weight)], spiral: Spiral) -> GeodesicGraftSpec {
        GeodesicGraftSpec::new(l, leaves.iter().map(|&(a, w)| Leaf::new(a, w)).collect(), spiral).unwrap()
    }

    fn same(m: &MoebiusMap, mu: Complex64, k: Complex64) -> bool {
        m.distance(&MoebiusMap::affine(mu, k).unwrap()) < 1e-12
    }

    #[test]
    fn elliptic_examples() {
        assert!(same(&elliptic_about(0.0, PI), c(-1.0, 0.0), c(0.0, 0.0)));
        assert!(same(&elliptic_about(1.0, PI), c(-1.0, 0.0), c(2.0, 0.0)));
        assert!(elliptic_about(0.37, TAU).distance(&MoebiusMap::IDENTITY) < 1e-12);
    }

    #[test]
    fn two_half_turns_close_the_cusp() {
        let spec = cusp(&[(0.0, Weight::pi(1, 1)), (0.5, Weight::pi(1, 1))]);
        let res = cusp_monodromy(&spec);
        assert_eq!(res.multiplier, c(1.0, 0.0));
        assert!(res.constant.norm() < 1e-12);
        assert!(cusp_c_closed_form(&spec).unwrap().norm() < 1e-12);
        assert_eq!(pole_order(&EndSpec::Cusp(spec), &tol()), PoleOrder::NoPole);
    }

    #[test]
    fn single_full_turn_gives_unit_constant() {
        for a in [0.0, 1.0 / 3.0, 0.5, 0.999] {
            let spec = cusp(&[(a, Weight::pi(2, 1))]);
            let res = cusp_monodromy(&spec);
            assert_eq!(res.multiplier, c(1.0, 0.0));
            assert_eq!(res.constant, c(1.0, 0.0));
            assert_eq!(cusp_c_closed_form(&spec).unwrap(), c(1.0, 0.0));
            assert_eq!(pole_order(&EndSpec::Cusp(spec), &tol()), PoleOrder::Order1);
        }
    }

    #[test]
    fn half_turn_at_origin() {
        let spec = cusp(&[(0.0, Weight::pi(1, 1))]);
        assert!(same(&cusp_monodromy(&spec).monodromy, c(-1.0, 0.0), c(-1.0, 0.0)));
        assert!((cusp_c_closed_form(&spec).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bare_cusp() {
        let spec = CuspGraftSpec::empty();
        assert!(same(&cusp_monodromy(&spec).monodromy, c(1.0, 0.0), c(1.0, 0.0)));
        assert_eq!(cusp_c_closed_form(&spec).unwrap_err(), Error::EmptySpec);
        assert_eq!(pole_order(&EndSpec::Cusp(spec), &tol()), PoleOrder::Order2);
    }

    #[test]
    fn geodesic_examples() {
        let g = geodesic(LN_2, &[], Spiral::Anticlockwise);
        assert!(same(&geodesic_monodromy(&g).monodromy, c(2.0, 0.0), c(0.0, 0.0)));

        let g = geodesic(LN_2, &[(1.0, Weight::pi(1, 1))], Spiral::Anticlockwise);
        assert!(same(&geodesic_monodromy(&g).monodromy, c(-2.0, 0.0), c(2.0, 0.0)));

        let g = geodesic(LN_2, &[(1.0, Weight::pi(1, 1))], Spiral::Clockwise);
        let res = geodesic_monodromy(&g);
        assert!((res.multiplier - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((res.constant - c(2.0, 0.0)).norm() < 1e-12);
        assert_eq!(pole_order(&EndSpec::Geodesic(g), &tol()), PoleOrder::Order2);
    }

    #[test]
    fn geodesic_closed_form_has_matching_trace() {
        let g = geodesic(
            1.3,
            &[(1.2, Weight::Radians(0.7)), (2.5, Weight::pi(1, 3))],
            Spiral::Clockwise,
        );
        let direct = geodesic_monodromy(&g).monodromy.trace_squared();
        let closed = geodesic_closed_form_map(&g).trace_squared();
        assert!((direct - closed).norm() < 1e-9);
    }

    #[test]
    fn exponent_examples() {
        let e = SignedEndData::cusp(cusp(&[(0.2, Weight::pi(1, 1))]), Sign::Plus);
        assert!((grafting_exponent(&e) - c(0.0, PI)).norm() < 1e-15);

        let e = SignedEndData::geodesic(geodesic(1.0, &[], Spiral::Clockwise), Sign::Minus, Sign::Plus).unwrap();
        assert!((grafting_exponent(&e) - c(-1.0, 0.0)).norm() < 1e-15);

        let g = geodesic(1.0, &[(1.5, Weight::pi(1, 1))], Spiral::Clockwise);
        let e = SignedEndData::geodesic(g, Sign::Plus, Sign::Plus).unwrap();
        assert!((grafting_exponent(&e) - c(1.0, PI)).norm() < 1e-15);
        assert!((grafting_exponent(&e.flipped()) + c(1.0, PI)).norm() < 1e-15);
    }

    #[test]
    fn spiral_must_match_signs() {
        let g = geodesic(1.0, &[(1.5, Weight::pi(1, 1))], Spiral::Clockwise);
        assert!(SignedEndData::geodesic(g, Sign::Plus, Sign::Minus).is_err());
    }

    #[test]
    fn spiral_examples() {
        assert_eq!(spiral_direction(Sign::Plus, Sign::Plus), Spiral::Clockwise);
        assert_eq!(spiral_direction(Sign::Plus, Sign::Minus), Spiral::Anticlockwise);
        assert_eq!(spiral_direction(Sign::Minus, Sign::Minus), Spiral::Clockwise);
    }

    #[test]
    fn signed_c_examples() {
        let w = [(1.5, Weight::pi(1, 1))];
        let e = SignedEndData::geodesic(geodesic(2.0, &w, Spiral::Clockwise), Sign::Plus, Sign::Plus).unwrap();
        assert!((signed_c_parameter(&e) - c(2.0, PI)).norm() < 1e-15);
        let e = SignedEndData::geodesic(geodesic(2.0, &w, Spiral::Anticlockwise), Sign::Minus, Sign::Plus).unwrap();
        assert!((signed_c_parameter(&e) - c(-2.0, PI)).norm() < 1e-15);
        let e = SignedEndData::cusp(cusp(&[(0.0, Weight::pi(2, 1))]), Sign::Minus);
        assert!((signed_c_parameter(&e) - c(0.0, -TAU)).norm() < 1e-15);
    }

    #[test]
    fn inference_examples() {
        let t = tol();
        let e = infer_end_from_monodromy(&MoebiusMap::translation(c(1.0, 0.0)), &t);
        assert_eq!(e.end_type, EndType::Cusp);
        assert!(e.weight_class_contains(0.0, 1e-12));

        let e = infer_end_from_monodromy(&MoebiusMap::scaling(c(2.0, 0.0)).unwrap(), &t);
        assert_eq!(e.end_type, EndType::Geodesic);
        assert!((e.boundary_length - LN_2).abs() < 1e-12);
        assert!(e.weight_class_contains(0.0, 1e-12));

        let m = MoebiusMap::scaling(Complex64::from_polar(2.0, PI / 3.0)).unwrap();
        let e = infer_end_from_monodromy(&m, &t);
        assert_eq!(e.end_type, EndType::Geodesic);
        assert!((e.boundary_length - LN_2).abs() < 1e-12);
        assert!(e.weight_class_contains(PI / 3.0, 1e-12));
        assert!(e.weight_class_contains(-PI / 3.0, 1e-12));
    }

    #[test]
    fn validation() {
        let bad = |leaves: Vec<Leaf>| CuspGraftSpec::new(leaves).is_err();
        assert!(bad(vec![
            Leaf::new(0.5, Weight::pi(1, 1)),
            Leaf::new(0.2, Weight::pi(1, 1))
        ]));
        assert!(bad(vec![Leaf::new(1.0, Weight::pi(1, 1))]));
        assert!(bad(vec![Leaf::new(0.5, Weight::Radians(0.0))]));
        assert!(bad(vec![Leaf::new(0.5, Weight::pi(-1, 2))]));
        assert!(GeodesicGraftSpec::new(0.0, vec![], Spiral::Clockwise).is_err());
        assert!(GeodesicGraftSpec::new(LN_2, vec![Leaf::new(2.0, Weight::pi(1, 1))], Spiral::Clockwise).is_err());
    }

    #[test]
    fn full_turn_detection() {
        let t = tol();
        let l = |w| vec![Leaf::new(0.0, w)];
        assert_eq!(full_turns(&l(Weight::pi(4, 1)), &t), Some(2));
        assert_eq!(full_turns(&l(Weight::pi(3, 1)), &t), None);
        assert_eq!(full_turns(&l(Weight::Radians(TAU)), &t), Some(1));
        assert_eq!(full_turns(&l(Weight::Radians(TAU + 1e-6)), &t), None);
    }

    #[test]
    fn exact_quarter_turn_roots() {
        assert_eq!(Weight::pi(1, 2).unit_root(), c(0.0, 1.0));
        assert_eq!(Weight::pi(3, 2).unit_root_inv(), c(0.0, 1.0));
        assert_eq!(Weight::pi(7, 1).unit_root(), c(-1.0, 0.0));
        assert!((Weight::pi(1, 3).unit_root() - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-15);
    }
}
