//! Which representations admit a non-degenerate framing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::degeneracy::{is_degenerate, rep_is_degenerate_unframed};
use super::{FramedRep, RepPresentation};
use crate::moebius::{classify, compose, fixed_points, MoebiusClass, MoebiusMap, SpherePoint};
use crate::tolerance::Tolerance;

/// The clause of the characterization that decided a verdict. `Closed*`
/// clauses have no boundary (`N = 0`); the others name `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiClause {
    /// `N ≥ 3`: every representation.
    ManyBoundaryPoints,
    NonDegenerate,
    ClosedNoApparentSingularity,
    /// Trivial, `g > 0`, `m ∈ {1, 2}`.
    ClosedTrivialFewPunctures,
    /// Image of order 2, `g > 0`, `m = 1`.
    ClosedOrderTwoOnePuncture,
    ClosedDegenerateWithApparentSingularity,
    /// Trivial, `m ≤ 1`.
    OneBoundaryPointTrivial,
    /// Image of order 2, `m = 0`.
    OneBoundaryPointOrderTwo,
    OneBoundaryPointDegenerate,
    /// Trivial, `m = 0`.
    TwoBoundaryPointsTrivial,
    TwoBoundaryPointsDegenerate,
}

impl PhiClause {
    pub fn in_image(self) -> bool {
        !matches!(
            self,
            PhiClause::ClosedNoApparentSingularity
                | PhiClause::ClosedTrivialFewPunctures
                | PhiClause::ClosedOrderTwoOnePuncture
                | PhiClause::OneBoundaryPointTrivial
                | PhiClause::OneBoundaryPointOrderTwo
                | PhiClause::TwoBoundaryPointsTrivial
        )
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiImageVerdict {
    pub in_image: bool,
    pub clause: PhiClause,
}

/// Every generator is the identity.
pub fn is_trivial(rep: &RepPresentation, tol: &Tolerance) -> bool {
    rep.generators().iter().all(|g| g.is_identity(tol))
}

/// The image is `{1, σ}` for one involution `σ`.
pub fn image_has_order_two(rep: &RepPresentation, tol: &Tolerance) -> bool {
    let mut others = rep.generators().iter().filter(|g| !g.is_identity(tol));
    let Some(sigma) = others.next() else {
        return false;
    };
    compose(sigma, sigma).is_identity(tol) && others.all(|g| g.distance(sigma) < 1e3 * tol.chordal)
}

/// Decides whether `rep` is the monodromy of some signed projective structure
/// on its surface, by the clause list for `N = Σ(n_i - 2)`.
pub fn classify_phi_image(rep: &RepPresentation, tol: &Tolerance) -> PhiImageVerdict {
    let sig = rep.surface();
    let n = sig.boundary_marked_points();
    let m = sig.punctures;
    let clause = if n >= 3 {
        PhiClause::ManyBoundaryPoints
    } else if !rep_is_degenerate_unframed(rep, tol) {
        PhiClause::NonDegenerate
    } else {
        let trivial = is_trivial(rep, tol);
        let order_two = image_has_order_two(rep, tol);
        match n {
            0 => {
                let apparent = rep
                    .puncture_peripherals()
                    .iter()
                    .any(|p| classify(p, tol) == MoebiusClass::Identity);
                if !apparent {
                    PhiClause::ClosedNoApparentSingularity
                } else if trivial && sig.genus > 0 && (m == 1 || m == 2) {
                    PhiClause::ClosedTrivialFewPunctures
                } else if order_two && sig.genus > 0 && m == 1 {
                    PhiClause::ClosedOrderTwoOnePuncture
                } else {
                    PhiClause::ClosedDegenerateWithApparentSingularity
                }
            }
            1 if trivial && m <= 1 => PhiClause::OneBoundaryPointTrivial,
            1 if order_two && m == 0 => PhiClause::OneBoundaryPointOrderTwo,
            1 => PhiClause::OneBoundaryPointDegenerate,
            _ if trivial && m == 0 => PhiClause::TwoBoundaryPointsTrivial,
            _ => PhiClause::TwoBoundaryPointsDegenerate,
        }
    };
    PhiImageVerdict {
        in_image: clause.in_image(),
        clause,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    pub trials: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { trials: 64, seed: 0 }
    }
}

/// Fixed-point combinations beyond this many are sampled, not enumerated.
const EXHAUSTIVE_COMBOS: usize = 256;

fn generic_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    SpherePoint::finite(num_complex::Complex64::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
    ))
}

/// Tries up to `trials` framings and returns the first non-degenerate one.
///
/// Non-identity peripherals are framed at their fixed points, cycling through
/// all combinations when there are few. Identity peripherals and boundary
/// marked points get random points with real and imaginary parts in
/// `[-3, 3]`.
pub fn nondegenerate_framing_search(rep: &RepPresentation, opts: &SearchOptions, tol: &Tolerance) -> Option<FramedRep> {
    let sig = rep.surface();
    let choices: Vec<Option<Vec<SpherePoint>>> = rep
        .puncture_peripherals()
        .iter()
        .map(|p: &MoebiusMap| match classify(p, tol) {
            MoebiusClass::Identity => None,
            _ => fixed_points(p, tol).ok(),
        })
        .collect();
    let combos = choices
        .iter()
        .flatten()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for trial in 0..opts.trials {
        let mut index = trial % combos.max(1);
        let mut framing = Vec::with_capacity(sig.marked_points() as usize);
        for c in &choices {
            framing.push(match c {
                None => generic_point(&mut rng),
                Some(fps) if combos <= EXHAUSTIVE_COMBOS => {
                    let p = fps[index % fps.len()];
                    index /= fps.len();
                    p
                }
                Some(fps) => fps[rng.gen_range(0..fps.len())],
            });
        }
        for _ in 0..sig.boundary_marked_points() {
            framing.push(generic_point(&mut rng));
        }
        let Ok(fr) = FramedRep::new(rep.clone(), framing, None, tol) else {
            continue;
        };
        if is_degenerate(&fr, tol).is_ok_and(|v| !v.degenerate) {
            return Some(fr);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::SurfaceSignature;
    use num_complex::Complex64;

    fn t() -> Tolerance {
        Tolerance::default()
    }

    fn sig(g: u32, n: &[u32], m: u32) -> SurfaceSignature {
        SurfaceSignature::new(g, n.to_vec(), m, 0).unwrap()
    }

    fn translation(x: f64) -> MoebiusMap {
        MoebiusMap::translation(Complex64::new(x, 0.0))
    }

    fn negation() -> MoebiusMap {
        MoebiusMap::scaling(Complex64::new(0.0, 1.0)).unwrap()
    }

    fn trivial(s: SurfaceSignature) -> RepPresentation {
        let n = 2 * s.genus as usize + (s.punctures + s.k()) as usize - 1;
        RepPresentation::standard(s, vec![MoebiusMap::IDENTITY; n]).unwrap()
    }

    fn agree(rep: &RepPresentation) -> PhiImageVerdict {
        let v = classify_phi_image(rep, &t());
        let found = nondegenerate_framing_search(rep, &SearchOptions::default(), &t());
        assert_eq!(v.in_image, found.is_some(), "{:?}", v.clause);
        v
    }

    #[test]
    fn classifier_examples() {
        let v = agree(&trivial(sig(0, &[6], 0)));
        assert_eq!(v.clause, PhiClause::ManyBoundaryPoints);
        let v = agree(&trivial(sig(1, &[], 1)));
        assert_eq!(v.clause, PhiClause::ClosedTrivialFewPunctures);
        assert!(!v.in_image);
        let torus = RepPresentation::standard(sig(1, &[], 1), vec![translation(1.0), translation(-1.0)]).unwrap();
        let v = agree(&torus);
        assert_eq!(v.clause, PhiClause::ClosedDegenerateWithApparentSingularity);
        assert!(v.in_image);
    }

    #[test]
    fn order_two_images() {
        // z ↦ -z is the square of the quarter-turn scaling by i.
        let neg = compose(&negation(), &negation());
        let closed = RepPresentation::standard(sig(1, &[], 1), vec![neg, MoebiusMap::IDENTITY]).unwrap();
        assert!(image_has_order_two(&closed, &t()));
        assert_eq!(agree(&closed).clause, PhiClause::ClosedOrderTwoOnePuncture);

        let bordered = RepPresentation::standard(sig(1, &[3], 0), vec![neg, neg]).unwrap();
        assert_eq!(agree(&bordered).clause, PhiClause::OneBoundaryPointOrderTwo);

        let with_puncture = RepPresentation::standard(sig(0, &[3], 2), vec![neg, neg]).unwrap();
        assert_eq!(agree(&with_puncture).clause, PhiClause::OneBoundaryPointDegenerate);
    }

    #[test]
    fn search_examples() {
        let fr = nondegenerate_framing_search(&trivial(sig(0, &[], 3)), &SearchOptions::default(), &t()).unwrap();
        assert_eq!(fr.framing().len(), 3);
        let torus = RepPresentation::standard(sig(1, &[], 1), vec![translation(1.0), translation(-1.0)]).unwrap();
        assert!(nondegenerate_framing_search(&torus, &SearchOptions::default(), &t()).is_some());
    }

    #[test]
    fn search_is_reproducible() {
        let rep = trivial(sig(0, &[4], 1));
        let opts = SearchOptions { trials: 8, seed: 7 };
        let a = nondegenerate_framing_search(&rep, &opts, &t()).unwrap();
        let b = nondegenerate_framing_search(&rep, &opts, &t()).unwrap();
        for (p, q) in a.framing().iter().zip(b.framing()) {
            assert_eq!(p.as_finite(), q.as_finite());
        }
    }
}
