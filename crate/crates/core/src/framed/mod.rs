//! Framed PSL(2,C) representations of punctured bordered surfaces.
//!
//! A [`RepPresentation`] lists generator images, one peripheral word per
//! puncture and per boundary component (punctures first), and a relator.
//! Words are signed 1-based generator indices, evaluated left to right as a
//! matrix product: `[1, -2]` is `ρ(g₁)·ρ(g₂)⁻¹`.
//!
//! A [`FramedRep`] adds one sphere point per marked point: the `m` punctures
//! first, then the `n_i - 2` marked points of each boundary component in
//! cyclic order. Each value stands for the framing of one lift; the full
//! framing is its orbit under the image group.

mod degeneracy;
mod fg;
mod image;

pub use degeneracy::{
    flip, framing_from_signed_peripheral, is_degenerate, rep_is_degenerate_unframed, DegeneracyVerdict, Witness,
};
pub use fg::{fg_edge_coordinate, triangulation_well_defined, Corner, EdgeCoordinate, Triangulation};
pub use image::{
    classify_phi_image, image_has_order_two, is_trivial, nondegenerate_framing_search, PhiClause, PhiImageVerdict,
    SearchOptions,
};

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grafting::Sign;
use crate::moebius::{chordal_distance, classify, compose, MoebiusClass, MoebiusMap, SpherePoint};
use crate::surfaces::{chi, SurfaceSignature};
use crate::tolerance::Tolerance;

/// Signed 1-based generator indices; `-i` is the inverse of generator `i`.
pub type Word = Vec<i32>;

/// Relative residual allowed when checking that the relator is trivial.
pub const RELATOR_TOL: f64 = 1e-8;

/// A representation given on generators, with peripheral words.
#[derive(Debug, Clone, Serialize)]
pub struct RepPresentation {
    surface: SurfaceSignature,
    generators: Vec<MoebiusMap>,
    peripherals: Vec<Word>,
    relator: Word,
}

fn word_valid(word: &[i32], n: usize) -> Result<()> {
    match word.iter().find(|&&i| i == 0 || i.unsigned_abs() as usize > n) {
        Some(&i) => Err(Error::UnknownGenerator(i)),
        None => Ok(()),
    }
}

fn eval(generators: &[MoebiusMap], word: &[i32]) -> Result<MoebiusMap> {
    word_valid(word, generators.len())?;
    Ok(word.iter().fold(MoebiusMap::IDENTITY, |acc, &i| {
        let g = generators[i.unsigned_abs() as usize - 1];
        compose(&acc, &if i > 0 { g } else { g.inverse() })
    }))
}

/// `[x, y] = x y x⁻¹ y⁻¹` as a word.
fn commutator(x: i32, y: i32) -> Word {
    vec![x, y, -x, -y]
}

fn inverse_word(w: &[i32]) -> Word {
    w.iter().rev().map(|i| -i).collect()
}

impl RepPresentation {
    /// Validates word indices, the peripheral count `m + k` and the relator.
    pub fn new(
        surface: SurfaceSignature,
        generators: Vec<MoebiusMap>,
        peripherals: Vec<Word>,
        relator: Word,
    ) -> Result<Self> {
        chi(&surface)?;
        let ends = (surface.punctures + surface.k()) as usize;
        if ends == 0 {
            return Err(Error::InvalidRepresentation(
                "surface has no punctures or boundary components".into(),
            ));
        }
        if peripherals.len() != ends {
            return Err(Error::InvalidRepresentation(format!(
                "expected {ends} peripheral words (m + k), got {}",
                peripherals.len()
            )));
        }
        for w in &peripherals {
            word_valid(w, generators.len())?;
        }
        let r = eval(&generators, &relator)?;
        // Rounding grows with the product of the letters' norms.
        let growth: f64 = relator
            .iter()
            .map(|&i| {
                let g = generators[i.unsigned_abs() as usize - 1];
                g.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            })
            .product();
        let residual = r.distance(&MoebiusMap::IDENTITY);
        if residual > RELATOR_TOL * growth.max(1.0) {
            return Err(Error::InvalidRepresentation(format!(
                "relator evaluates to {r}, residual {residual:e} from the identity"
            )));
        }
        Ok(RepPresentation {
            surface,
            generators,
            peripherals,
            relator,
        })
    }

    /// The standard presentation with free generators
    /// `a_1, b_1, …, a_g, b_g, c_1, …, c_{m+k-1}`.
    ///
    /// End `j < m + k - 1` has peripheral `c_{j+1}`; the last end has
    /// `(Π[a_i, b_i] · c_1⋯c_{m+k-1})⁻¹`, so the relator is empty.
    pub fn standard(surface: SurfaceSignature, generators: Vec<MoebiusMap>) -> Result<Self> {
        let g = surface.genus as usize;
        let ends = (surface.punctures + surface.k()) as usize;
        if ends == 0 {
            return Err(Error::InvalidRepresentation(
                "surface has no punctures or boundary components".into(),
            ));
        }
        let expected = 2 * g + ends - 1;
        if generators.len() != expected {
            return Err(Error::InvalidRepresentation(format!(
                "standard presentation needs {expected} generators, got {}",
                generators.len()
            )));
        }
        let mut product: Word = (0..g)
            .flat_map(|i| commutator(2 * i as i32 + 1, 2 * i as i32 + 2))
            .collect();
        let mut peripherals = Vec::with_capacity(ends);
        for j in 0..ends - 1 {
            let c = (2 * g + j + 1) as i32;
            product.push(c);
            peripherals.push(vec![c]);
        }
        peripherals.push(inverse_word(&product));
        Self::new(surface, generators, peripherals, Vec::new())
    }

    pub fn surface(&self) -> &SurfaceSignature {
        &self.surface
    }

    pub fn generators(&self) -> &[MoebiusMap] {
        &self.generators
    }

    pub fn peripheral_words(&self) -> &[Word] {
        &self.peripherals
    }

    pub fn relator(&self) -> &[i32] {
        &self.relator
    }

    pub fn evaluate_word(&self, word: &[i32]) -> Result<MoebiusMap> {
        eval(&self.generators, word)
    }

    /// Peripheral monodromy of end `j` (punctures first, then boundaries).
    pub fn peripheral(&self, j: usize) -> MoebiusMap {
        eval(&self.generators, &self.peripherals[j]).expect("validated at construction")
    }

    pub fn puncture_peripherals(&self) -> Vec<MoebiusMap> {
        (0..self.surface.punctures as usize)
            .map(|j| self.peripheral(j))
            .collect()
    }

    /// Generators together with their inverses.
    fn moves(&self) -> Vec<MoebiusMap> {
        self.generators.iter().flat_map(|g| [*g, g.inverse()]).collect()
    }
}

/// Left-to-right product of generator images.
pub fn evaluate_word(rep: &RepPresentation, word: &[i32]) -> Result<MoebiusMap> {
    rep.evaluate_word(word)
}

/// Whether `m` fixes `p`, allowing for rounding in products of generators.
pub(crate) fn fixes(m: &MoebiusMap, p: &SpherePoint, tol: &Tolerance) -> bool {
    chordal_distance(&m.apply(p), p) < 10.0 * tol.chordal
}

/// Caps for [`orbit_points`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitCaps {
    pub depth: usize,
    pub points: usize,
    pub dedup: f64,
}

impl Default for OrbitCaps {
    fn default() -> Self {
        OrbitCaps {
            depth: 16,
            points: 4096,
            dedup: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub points: Vec<SpherePoint>,
    /// True only when the orbit is closed under every generator and inverse.
    pub closed: bool,
}

fn push_new(points: &mut Vec<SpherePoint>, p: SpherePoint, dedup: f64) -> bool {
    if points.iter().any(|q| chordal_distance(q, &p) < dedup) {
        false
    } else {
        points.push(p);
        true
    }
}

/// Breadth-first orbit of `seeds` under the generators and their inverses.
///
/// Stops with `closed = false` as soon as `target` distinct points are known,
/// or with `closed = true` when nothing new appears. Running out of depth or
/// points first is [`Error::DepthExceeded`].
pub fn orbit_points(rep: &RepPresentation, seeds: &[SpherePoint], target: usize, caps: &OrbitCaps) -> Result<Orbit> {
    let mut points = Vec::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if push_new(&mut points, *s, caps.dedup) {
            queue.push_back((*s, 0usize));
        }
    }
    if points.len() >= target {
        return Ok(Orbit { points, closed: false });
    }
    let moves = rep.moves();
    while let Some((p, depth)) = queue.pop_front() {
        if depth >= caps.depth {
            return Err(Error::DepthExceeded);
        }
        for g in &moves {
            let q = g.apply(&p);
            if push_new(&mut points, q, caps.dedup) {
                if points.len() >= target {
                    return Ok(Orbit { points, closed: false });
                }
                if points.len() >= caps.points {
                    return Err(Error::DepthExceeded);
                }
                queue.push_back((q, depth + 1));
            }
        }
    }
    Ok(Orbit { points, closed: true })
}

/// Whether `point` lies in the orbit of `seed`, searching within `caps`.
pub fn orbit_contains(rep: &RepPresentation, seed: &SpherePoint, point: &SpherePoint, caps: &OrbitCaps) -> bool {
    if chordal_distance(seed, point) < caps.dedup {
        return true;
    }
    let moves = rep.moves();
    let mut points = vec![*seed];
    let mut queue = VecDeque::from([(*seed, 0usize)]);
    while let Some((p, depth)) = queue.pop_front() {
        if depth >= caps.depth {
            break;
        }
        for g in &moves {
            let q = g.apply(&p);
            if chordal_distance(&q, point) < caps.dedup {
                return true;
            }
            if points.len() < caps.points && push_new(&mut points, q, caps.dedup) {
                queue.push_back((q, depth + 1));
            }
        }
    }
    false
}

/// A representation with one framing value per marked point and a signing
/// at each puncture whose peripheral has two fixed points.
#[derive(Debug, Clone, Serialize)]
pub struct FramedRep {
    rep: RepPresentation,
    framing: Vec<SpherePoint>,
    signing: Vec<Option<Sign>>,
}

/// The signing that [`framing_from_signed_peripheral`] reproduces: `Plus`
/// for the fixed point chosen by the principal logarithm of the multiplier
/// at the first fixed point.
fn signing_of(m: &MoebiusMap, p: &SpherePoint, tol: &Tolerance) -> Result<Option<Sign>> {
    if !classify(m, tol).has_two_fixed_points() {
        return Ok(None);
    }
    let plus = degeneracy::plus_fixed_point(m, tol)?;
    Ok(Some(if chordal_distance(&plus, p) < tol.chordal {
        Sign::Plus
    } else {
        Sign::Minus
    }))
}

impl FramedRep {
    /// Checks that every puncture value is fixed by its peripheral and that a
    /// supplied signing matches the framing. Without a signing, it is derived.
    pub fn new(
        rep: RepPresentation,
        framing: Vec<SpherePoint>,
        signing: Option<Vec<Option<Sign>>>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let sig = rep.surface();
        let expected = sig.marked_points() as usize;
        if framing.len() != expected {
            return Err(Error::InvalidFraming(format!(
                "expected {expected} framing values (one per marked point), got {}",
                framing.len()
            )));
        }
        let m = sig.punctures as usize;
        let mut derived = Vec::with_capacity(m);
        for (i, p) in framing.iter().enumerate().take(m) {
            let per = rep.peripheral(i);
            if classify(&per, tol) != MoebiusClass::Identity && !fixes(&per, p, tol) {
                let d = chordal_distance(&per.apply(p), p);
                return Err(Error::InvalidFraming(format!(
                    "puncture {i}: value {p} is not fixed by its peripheral (moved by {d:e})"
                )));
            }
            derived.push(signing_of(&per, p, tol)?);
        }
        if let Some(given) = signing {
            if given.len() != m {
                return Err(Error::InvalidFraming(format!(
                    "expected {m} signing entries, got {}",
                    given.len()
                )));
            }
            for (i, (g, d)) in given.iter().zip(&derived).enumerate() {
                if g != d {
                    return Err(Error::InvalidFraming(format!(
                        "puncture {i}: signing {g:?} does not match the framing (expected {d:?})"
                    )));
                }
            }
        }
        Ok(FramedRep {
            rep,
            framing,
            signing: derived,
        })
    }

    pub fn rep(&self) -> &RepPresentation {
        &self.rep
    }

    pub fn framing(&self) -> &[SpherePoint] {
        &self.framing
    }

    pub fn signing(&self) -> &[Option<Sign>] {
        &self.signing
    }

    /// Marked-point indices of boundary component `i`, in cyclic order.
    pub fn boundary_marked_points(&self, i: usize) -> std::ops::Range<usize> {
        let sig = self.rep.surface();
        let start = sig.punctures as usize + sig.boundaries[..i].iter().map(|n| (n - 2) as usize).sum::<usize>();
        start..start + (sig.boundaries[i] - 2) as usize
    }

    pub(crate) fn with_puncture_value(&self, i: usize, p: SpherePoint, s: Option<Sign>) -> FramedRep {
        let mut out = self.clone();
        out.framing[i] = p;
        out.signing[i] = s;
        out
    }
}
