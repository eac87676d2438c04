//! Random generators shared by the property and acceptance suites.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use projgraft::framed::{FramedRep, RepPresentation};
use projgraft::grafting::{
    spiral_direction, CuspGraftSpec, GeodesicGraftSpec, Leaf, Sign, SignedEndData, Spiral, Weight,
};
use projgraft::moebius::{classify, fixed_points, MoebiusClass, MoebiusMap, SpherePoint};
use projgraft::surfaces::SurfaceSignature;
use projgraft::tolerance::Tolerance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complex(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

pub fn point(rng: &mut ChaCha8Rng) -> SpherePoint {
    SpherePoint::finite(complex(rng, 3.0))
}

/// A random map with entries in `[-2, 2]²`, away from singular.
pub fn moebius(rng: &mut ChaCha8Rng) -> MoebiusMap {
    loop {
        let [a, b, cc, d] = [0; 4].map(|_| complex(rng, 2.0));
        if (a * d - b * cc).norm() > 0.1 {
            return MoebiusMap::new(a, b, cc, d).unwrap();
        }
    }
}

pub fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn weight(rng: &mut ChaCha8Rng) -> Weight {
    if rng.gen_bool(0.5) {
        let d = rng.gen_range(1..=6);
        Weight::pi(rng.gen_range(1..=2 * d), d)
    } else {
        Weight::Radians(rng.gen_range(0.05..2.0 * TAU))
    }
}

/// `count` sorted, well-separated positions in `[lo, hi)`.
fn positions(rng: &mut ChaCha8Rng, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..count).map(|_| rng.gen_range(lo..hi)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] > 1e-3 * (hi - lo)) {
            return v;
        }
    }
}

pub fn cusp_spec(rng: &mut ChaCha8Rng, max_leaves: usize) -> CuspGraftSpec {
    let r = rng.gen_range(1..=max_leaves);
    let leaves = positions(rng, r, 0.0, 1.0)
        .into_iter()
        .map(|a| Leaf::new(a, weight(rng)))
        .collect();
    CuspGraftSpec::new(leaves).unwrap()
}

pub fn geodesic_spec(rng: &mut ChaCha8Rng, max_leaves: usize, spiral: Spiral) -> GeodesicGraftSpec {
    let length = rng.gen_range(0.1..3.0);
    let r = rng.gen_range(0..=max_leaves);
    let leaves = positions(rng, r, 1.0, f64::exp(length))
        .into_iter()
        .map(|a| Leaf::new(a, weight(rng)))
        .collect();
    GeodesicGraftSpec::new(length, leaves, spiral).unwrap()
}

pub fn signed_end(rng: &mut ChaCha8Rng) -> SignedEndData {
    let tau = sign(rng);
    if rng.gen_bool(0.5) {
        SignedEndData::cusp(cusp_spec(rng, 6), tau)
    } else {
        let sigma = sign(rng);
        let spec = geodesic_spec(rng, 6, spiral_direction(sigma, tau));
        SignedEndData::geodesic(spec, sigma, tau).unwrap()
    }
}

/// Signatures small enough for exhaustive framing searches, grouped by the
/// number `N` of boundary marked points.
pub fn small_signatures() -> Vec<SurfaceSignature> {
    let s = |g, n: &[u32], m| SurfaceSignature::new(g, n.to_vec(), m, 0).unwrap();
    vec![
        // N = 0
        s(0, &[], 3),
        s(0, &[], 4),
        s(1, &[], 1),
        s(1, &[], 2),
        s(2, &[], 1),
        // N = 1
        s(0, &[3], 2),
        s(1, &[3], 0),
        s(1, &[3], 1),
        s(0, &[3], 3),
        // N = 2
        s(0, &[4], 1),
        s(1, &[4], 0),
        s(1, &[3, 3], 0),
        s(0, &[3, 3], 1),
        // N ≥ 3
        s(0, &[5], 1),
        s(0, &[3, 3, 3], 0),
    ]
}

/// How the generator images of a random representation are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Trivial,
    /// Powers of one involution.
    OrderTwo,
    /// Powers of one parabolic.
    Parabolic,
    /// Powers of one loxodromic.
    Coaxial,
    /// Translations and a scaling sharing ∞.
    Affine,
    /// Scalings and a swap of `0` and `∞`.
    Dihedral,
    Generic,
}

pub const FAMILIES: [Family; 7] = [
    Family::Trivial,
    Family::OrderTwo,
    Family::Parabolic,
    Family::Coaxial,
    Family::Affine,
    Family::Dihedral,
    Family::Generic,
];

pub fn generator_count(sig: &SurfaceSignature) -> usize {
    2 * sig.genus as usize + (sig.punctures + sig.k()) as usize - 1
}

fn power(m: &MoebiusMap, k: i32) -> MoebiusMap {
    let base = if k < 0 { m.inverse() } else { *m };
    (0..k.unsigned_abs()).fold(MoebiusMap::IDENTITY, |acc, _| acc * base)
}

/// A representation in the standard presentation, conjugated by a random map.
pub fn rep(rng: &mut ChaCha8Rng, sig: &SurfaceSignature, family: Family) -> RepPresentation {
    let n = generator_count(sig);
    let conj = moebius(rng);
    let neg = MoebiusMap::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)).unwrap();
    let translation = MoebiusMap::translation(complex(rng, 2.0) + c(0.5, 0.0));
    let scaling = MoebiusMap::scaling(Complex64::from_polar(rng.gen_range(1.5..3.0), rng.gen_range(0.0..TAU))).unwrap();
    let swap = MoebiusMap::new(c(0.0, 0.0), complex(rng, 1.0) + c(1.5, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    let gens: Vec<MoebiusMap> = (0..n)
        .map(|_| match family {
            Family::Trivial => MoebiusMap::IDENTITY,
            Family::OrderTwo => power(&neg, rng.gen_range(0..2)),
            Family::Parabolic => power(&translation, rng.gen_range(-1..=2)),
            Family::Coaxial => power(&scaling, rng.gen_range(-1..=2)),
            Family::Affine => *[MoebiusMap::IDENTITY, translation, scaling].choose(rng).unwrap(),
            Family::Dihedral => *[MoebiusMap::IDENTITY, scaling, swap].choose(rng).unwrap(),
            Family::Generic => moebius(rng),
        })
        .map(|g| g.conjugate_by(&conj))
        .collect();
    RepPresentation::standard(sig.clone(), gens).unwrap()
}

/// A framing with every puncture at a random fixed point of its peripheral
/// (a random point for the identity) and random boundary values, some of
/// them repeated to exercise the adjacency condition.
pub fn framing(rng: &mut ChaCha8Rng, rep: &RepPresentation, tol: &Tolerance) -> FramedRep {
    let mut values: Vec<SpherePoint> = rep
        .puncture_peripherals()
        .iter()
        .map(|p| match classify(p, tol) {
            MoebiusClass::Identity => point(rng),
            _ => *fixed_points(p, tol).unwrap().choose(rng).unwrap(),
        })
        .collect();
    for _ in 0..rep.surface().boundary_marked_points() {
        let v = match values.last() {
            Some(prev) if rng.gen_bool(0.2) => *prev,
            _ => point(rng),
        };
        values.push(v);
    }
    FramedRep::new(rep.clone(), values, None, tol).unwrap()
}
