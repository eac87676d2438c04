//! Degeneracy of framed and unframed representations, flips, and the
//! framing chosen by a signed exponent.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{fixes, orbit_points, FramedRep, OrbitCaps, RepPresentation};
use crate::error::{Error, Result};
use crate::grafting::Sign;
use crate::moebius::{chordal_distance, classify, fixed_points, MoebiusClass, MoebiusMap, SpherePoint};
use crate::schwarzian::Exponent;
use crate::tolerance::Tolerance;

/// Which degeneracy condition fired.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "condition")]
pub enum Witness {
    /// Every flip of the framing has the single-point image `{p}`.
    #[serde(rename = "1")]
    SinglePoint { p: SpherePoint },
    /// Every flip of the framing has an image inside `{p, q}`.
    #[serde(rename = "2")]
    TwoPoints { p: SpherePoint, q: SpherePoint },
    /// Adjacent marked points on one boundary share a framing value.
    #[serde(rename = "3")]
    AdjacentBoundary {
        boundary: usize,
        marked_points: (usize, usize),
    },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DegeneracyVerdict {
    pub degenerate: bool,
    pub witness: Option<Witness>,
}

/// First pair of cyclically adjacent marked points on one boundary with
/// equal framing values.
fn adjacent_collision(fr: &FramedRep, tol: &Tolerance) -> Option<Witness> {
    let sig = fr.rep().surface();
    for b in 0..sig.boundaries.len() {
        let idx: Vec<usize> = fr.boundary_marked_points(b).collect();
        let pairs = match idx.len() {
            0 | 1 => 0,
            2 => 1,
            n => n,
        };
        for j in 0..pairs {
            let (u, v) = (idx[j], idx[(j + 1) % idx.len()]);
            if chordal_distance(&fr.framing()[u], &fr.framing()[v]) < tol.chordal {
                return Some(Witness::AdjacentBoundary {
                    boundary: b,
                    marked_points: (u, v),
                });
            }
        }
    }
    None
}

fn image(fr: &FramedRep, tol: &Tolerance) -> Result<Vec<SpherePoint>> {
    let caps = OrbitCaps {
        dedup: tol.chordal,
        ..OrbitCaps::default()
    };
    Ok(orbit_points(fr.rep(), fr.framing(), 3, &caps)?.points)
}

/// Punctures whose peripheral has two fixed points.
fn flippable(fr: &FramedRep, tol: &Tolerance) -> Vec<usize> {
    (0..fr.rep().surface().punctures as usize)
        .filter(|&i| classify(&fr.rep().peripheral(i), tol).has_two_fixed_points())
        .collect()
}

/// Degenerate iff adjacent boundary marked points share a value, or every
/// flip of the framing has an image of at most two points.
///
/// The second clause covers conditions (1) and (2): a single-point or
/// two-point image whose peripherals fix those points. Checking all flips
/// makes the verdict flip-invariant. Cost is one short orbit search per flip.
pub fn is_degenerate(fr: &FramedRep, tol: &Tolerance) -> Result<DegeneracyVerdict> {
    let current = image(fr, tol)?;
    let mut small = current.len() < 3;
    if small {
        let punctures = flippable(fr, tol);
        for mask in 1u64..(1u64 << punctures.len()) {
            let subset: Vec<usize> = punctures
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, &i)| i)
                .collect();
            if image(&flip(fr, &subset, tol)?, tol)?.len() >= 3 {
                small = false;
                break;
            }
        }
    }
    let witness = if small {
        Some(match current.as_slice() {
            [p] => Witness::SinglePoint { p: *p },
            [p, q] => Witness::TwoPoints { p: *p, q: *q },
            _ => unreachable!("framing has at least one value"),
        })
    } else {
        adjacent_collision(fr, tol)
    };
    Ok(DegeneracyVerdict {
        degenerate: witness.is_some(),
        witness,
    })
}

/// Moves the framing at each selected puncture to the other fixed point of
/// its peripheral and negates the signing there.
pub fn flip(fr: &FramedRep, punctures: &[usize], tol: &Tolerance) -> Result<FramedRep> {
    let m = fr.rep().surface().punctures as usize;
    let mut out = fr.clone();
    for &i in punctures {
        if i >= m {
            return Err(Error::InvalidFraming(format!("no puncture {i}")));
        }
        let per = fr.rep().peripheral(i);
        if !classify(&per, tol).has_two_fixed_points() {
            return Err(Error::NotFlippable(i));
        }
        let current = out.framing()[i];
        let other = fixed_points(&per, tol)?
            .into_iter()
            .max_by(|a, b| chordal_distance(a, &current).total_cmp(&chordal_distance(b, &current)))
            .expect("two fixed points");
        let sign = out.signing()[i].map(|s| -s);
        out = out.with_puncture_value(i, other, sign);
    }
    Ok(out)
}

/// `min_k |log μ + 2πik - r|`.
fn lattice_distance(mu: Complex64, r: Complex64) -> f64 {
    let x = mu.ln() - r;
    let k = (-x.im / TAU).round();
    (-1..=1)
        .map(|j| (x + Complex64::new(0.0, TAU * (k + j as f64))).norm())
        .fold(f64::INFINITY, f64::min)
}

/// The framing value at a puncture, given its peripheral and signed exponent.
///
/// A parabolic peripheral has one fixed point; the identity needs the model
/// map's asymptotic value. Otherwise the fixed point whose multiplier has a
/// logarithm closest to `r` is chosen, so `-r` chooses the other one. When the
/// two multipliers coincide (involutions), the eigenline of the stored
/// representative whose eigenvalue is closest to `e^{-r/2}` wins.
pub fn framing_from_signed_peripheral(
    m: &MoebiusMap,
    exponent: &Exponent,
    model_asymptotic: Option<SpherePoint>,
    tol: &Tolerance,
) -> Result<SpherePoint> {
    let r = exponent.r;
    match classify(m, tol) {
        MoebiusClass::Identity => model_asymptotic.ok_or(Error::MissingAsymptotic),
        MoebiusClass::Parabolic => Ok(fixed_points(m, tol)?[0]),
        _ => {
            let fps = m.fixed_points_with_eigenvalues(tol)?;
            let d: Vec<f64> = fps
                .iter()
                .map(|(p, _)| lattice_distance(m.multiplier_at(p), r))
                .collect();
            if (d[0] - d[1]).abs() > 1e-9 * (1.0 + r.norm()) {
                return Ok(if d[0] < d[1] { fps[0].0 } else { fps[1].0 });
            }
            let target = (-r / 2.0).exp();
            let pick = fps
                .iter()
                .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()))
                .expect("two fixed points");
            Ok(pick.0)
        }
    }
}

/// The fixed point selected by the positive sign: the exponent is the
/// principal logarithm of the multiplier at the first fixed point.
pub(crate) fn plus_fixed_point(m: &MoebiusMap, tol: &Tolerance) -> Result<SpherePoint> {
    let p0 = fixed_points(m, tol)?[0];
    let exponent = Exponent {
        r: m.multiplier_at(&p0).ln(),
        sign: Sign::Plus,
    };
    framing_from_signed_peripheral(m, &exponent, None, tol)
}

fn is_involution(m: &MoebiusMap, tol: &Tolerance) -> bool {
    m.trace_squared().norm() < tol.algebraic * 1e3 * m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().max(1.0)
}

fn preserves_pair(g: &MoebiusMap, p: &SpherePoint, q: &SpherePoint, tol: &Tolerance) -> bool {
    let (gp, gq) = (g.apply(p), g.apply(q));
    let close = |a: &SpherePoint, b: &SpherePoint| chordal_distance(a, b) < 10.0 * tol.chordal;
    (close(&gp, p) && close(&gq, q)) || (close(&gp, q) && close(&gq, p))
}

/// Representation-level degeneracy.
///
/// (a) Some point is fixed by the whole image, and every puncture peripheral
/// is the identity or parabolic fixing it. (b) Some pair of points is
/// preserved by the whole image, and every puncture peripheral fixes both.
pub fn rep_is_degenerate_unframed(rep: &RepPresentation, tol: &Tolerance) -> bool {
    let gens: Vec<MoebiusMap> = rep
        .generators()
        .iter()
        .copied()
        .filter(|g| classify(g, tol) != MoebiusClass::Identity)
        .collect();
    let peripherals = rep.puncture_peripherals();
    let Some(first) = gens.first() else {
        // Trivial image: every point is fixed and every peripheral is the identity.
        return true;
    };

    let global_fixed = |p: &SpherePoint| gens.iter().all(|g| fixes(g, p, tol));
    let condition_a = fixed_points(first, tol).unwrap_or_default().iter().any(|p| {
        global_fixed(p)
            && peripherals.iter().all(|per| match classify(per, tol) {
                MoebiusClass::Identity => true,
                MoebiusClass::Parabolic => fixes(per, p, tol),
                _ => false,
            })
    });
    if condition_a {
        return true;
    }

    let pair_ok = |p: &SpherePoint, q: &SpherePoint| {
        gens.iter().all(|g| preserves_pair(g, p, q, tol))
            && peripherals.iter().all(|per| fixes(per, p, tol) && fixes(per, q, tol))
    };
    let fixed_pair = |m: &MoebiusMap| -> Option<(SpherePoint, SpherePoint)> {
        match fixed_points(m, tol).ok()?.as_slice() {
            [p, q] => Some((*p, *q)),
            _ => None,
        }
    };

    // A non-identity peripheral must fix the pair pointwise, so the pair is
    // its fixed set (and a parabolic peripheral rules (b) out).
    if let Some(per) = peripherals.iter().find(|p| classify(p, tol) != MoebiusClass::Identity) {
        return fixed_pair(per).is_some_and(|(p, q)| pair_ok(&p, &q));
    }
    // A preserved pair is fixed pointwise by g², so by g itself unless g is an
    // involution.
    if let Some(g) = gens.iter().find(|g| !is_involution(g, tol)) {
        return fixed_pair(g).is_some_and(|(p, q)| pair_ok(&p, &q));
    }
    // Only involutions: an order-2 image swaps any pair {z, σz}; otherwise the
    // pair is fixed by some σ_i or by some product σ_iσ_j.
    if gens.iter().all(|g| g.distance(first) < 1e3 * tol.algebraic.sqrt()) {
        return true;
    }
    let mut candidates: Vec<MoebiusMap> = gens.clone();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let ab = *a * *b;
            if classify(&ab, tol) != MoebiusClass::Identity {
                candidates.push(ab);
            }
        }
    }
    candidates.iter().filter_map(fixed_pair).any(|(p, q)| pair_ok(&p, &q))
}
