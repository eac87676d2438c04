//! The built-in verification suite: two worked cusp examples plus sampled
//! exponent and fiber-square checks.

use std::f64::consts::TAU;

use num_complex::Complex64;
use projgraft::grafting::{
    grafting_exponent, pole_order, spiral_direction, CuspGraftSpec, EndSpec, GeodesicGraftSpec, Leaf, PoleOrder, Sign,
    SignedEndData, Weight,
};
use projgraft::schwarzian::{
    closed_form_schwarzian, exponent_from_leading, model_map_for_end, one_minus_two_a, spiral_theta,
};
use projgraft::surfaces::fiber_square_check;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Options, Report};

/// Sampled ends per suite.
const SAMPLES: usize = 200;

pub(crate) fn run(report: &mut Report, options: &Options) {
    let tol = &options.tolerance;

    let half_turns = EndSpec::Cusp(
        CuspGraftSpec::new(vec![Leaf::new(0.0, Weight::pi(1, 1)), Leaf::new(0.5, Weight::pi(1, 1))])
            .expect("valid spec"),
    );
    let m = half_turns.monodromy();
    let pole = pole_order(&half_turns, tol);
    report.push(
        "two_half_turns",
        json!({ "multiplier": m.multiplier, "constant": m.constant, "pole_order": pole }),
        Some("π leaves at 0 and 1/2: μ = 1, C = 0, no pole"),
    );
    report.check(
        "two_half_turns_ok",
        (m.multiplier - 1.0).norm() < 1e-12 && m.constant.norm() < 1e-12 && pole == PoleOrder::NoPole,
        None,
    );

    let full_turn = EndSpec::Cusp(CuspGraftSpec::new(vec![Leaf::new(0.0, Weight::pi(2, 1))]).expect("valid spec"));
    let m = full_turn.monodromy();
    let pole = pole_order(&full_turn, tol);
    report.push(
        "full_turn",
        json!({ "multiplier": m.multiplier, "constant": m.constant, "pole_order": pole }),
        Some("one 2π leaf: C = 1 and a simple pole"),
    );
    report.check(
        "full_turn_ok",
        m.constant == Complex64::new(1.0, 0.0) && pole == PoleOrder::Order1,
        None,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let ends: Vec<SignedEndData> = (0..SAMPLES).map(|_| random_end(&mut rng)).collect();

    let mut worst_exponent: f64 = 0.0;
    let mut worst_theta: f64 = 0.0;
    for end in &ends {
        let kind = model_map_for_end(end.spec(), tol);
        let Ok(closed) = closed_form_schwarzian(&kind) else {
            worst_exponent = f64::INFINITY;
            continue;
        };
        let r = exponent_from_leading(closed.leading, end.resolved_sign()).r;
        let g = grafting_exponent(end);
        worst_exponent = worst_exponent.max((r - g).norm().min((r + g).norm()));
        if let EndSpec::Geodesic(spec) = end.spec() {
            if !spec.leaves().is_empty() {
                let theta = spiral_theta(end.spec().total_weight(), spec.length(), spec.spiral());
                let lhs = one_minus_two_a(&kind).unwrap_or(Complex64::new(f64::INFINITY, 0.0));
                worst_theta = worst_theta.max((lhs - theta * theta).norm());
            }
        }
    }
    report.push(
        "exponent_consistency",
        json!({ "samples": SAMPLES, "max_residual": worst_exponent, "max_theta_residual": worst_theta }),
        Some("2πi√(1 - 2a) = ±r and 1 - 2a = ((α ± il)/2π)²"),
    );
    report.check(
        "exponent_consistency_ok",
        worst_exponent < 1e-10 && worst_theta < 1e-12,
        None,
    );

    let failures = ends
        .iter()
        .flat_map(|e| [e.clone(), e.flipped()])
        .filter(|e| !fiber_square_check(e, tol))
        .count();
    report.push(
        "fiber_square",
        json!({ "samples": 2 * SAMPLES, "failures": failures }),
        Some("c² = r² = -4π²(1 - 2a) with c = σl + iτα"),
    );
    report.check("fiber_square_ok", failures == 0, None);
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn weight(rng: &mut ChaCha8Rng) -> Weight {
    if rng.gen_bool(0.5) {
        let q = rng.gen_range(1..=6);
        Weight::pi(rng.gen_range(1..=2 * q), q)
    } else {
        Weight::Radians(rng.gen_range(0.05..2.0 * TAU))
    }
}

/// Up to four leaves at sorted positions in `[lo, hi)`, at least `gap` apart.
fn leaves(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vec<Leaf> {
    let count = rng.gen_range(0..=4);
    let gap = 1e-3 * (hi - lo);
    let mut positions: Vec<f64> = (0..count).map(|_| rng.gen_range(lo..hi)).collect();
    positions.sort_by(f64::total_cmp);
    positions.dedup_by(|a, b| *a - *b < gap);
    positions.into_iter().map(|a| Leaf::new(a, weight(rng))).collect()
}

fn random_end(rng: &mut ChaCha8Rng) -> SignedEndData {
    let tau = sign(rng);
    if rng.gen_bool(0.5) {
        let spec = CuspGraftSpec::new(leaves(rng, 0.0, 1.0)).expect("sorted positive leaves");
        SignedEndData::cusp(spec, tau)
    } else {
        let sigma = sign(rng);
        let length = rng.gen_range(0.1..3.0);
        let spec = GeodesicGraftSpec::new(length, leaves(rng, 1.0, length.exp()), spiral_direction(sigma, tau))
            .expect("sorted positive leaves");
        SignedEndData::geodesic(spec, sigma, tau).expect("spiral matches the signs")
    }
}
