//! Model developing maps near a regular singularity and their Schwarzians.
//!
//! Every model map is a function on the punctured disk built from `log w`,
//! so branches are indexed by an integer `k` (using `log w + 2πik`). The
//! principal branch is `k = 0`, with its cut on the negative real axis.
//!
//! Two independent oracles check the closed forms: [`numeric_schwarzian`]
//! (contour finite differences) and [`leading_coefficient_limit`]
//! (Richardson-extrapolated `w²q(w)` as `w → 0`).

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grafting::{full_turns, pole_order, EndSpec, PoleOrder, Sign, Spiral};
use crate::moebius::{chordal_distance, MoebiusMap, SpherePoint};
use crate::tolerance::Tolerance;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A model developing map on the punctured disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelMapKind {
    /// `w^θ`, θ not an integer.
    PowerTheta { theta: Complex64 },
    /// `w^n`, n ≥ 1.
    PowerN { n: u32 },
    /// `w^{-n} + log w`.
    PowerPlusLog { n: u32 },
    /// `i·w^{l/(2πi)}`, the descended form of `z ↦ i·e^{lz}` on a geodesic end.
    LogEnd { length: f64 },
    /// `w^{(α ± il)/2π}`, `+` anticlockwise and `-` clockwise.
    GeodesicPower { alpha: f64, length: f64, spiral: Spiral },
}

impl ModelMapKind {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        match *self {
            ModelMapKind::PowerTheta { theta } => {
                if !theta.is_finite() {
                    return bad(format!("θ = {theta} is not finite"));
                }
                if theta.im == 0.0 && theta.re.fract() == 0.0 {
                    return bad(format!("θ = {} is an integer; use PowerN or PowerPlusLog", theta.re));
                }
            }
            ModelMapKind::PowerN { n: 0 } => return bad("w^0 is constant".into()),
            ModelMapKind::LogEnd { length } if !(length.is_finite() && length > 0.0) => {
                return bad(format!("length {length} must be positive"));
            }
            ModelMapKind::GeodesicPower { alpha, length, .. } => {
                if !(alpha.is_finite() && alpha != 0.0) {
                    return bad(format!("weight {alpha} must be nonzero"));
                }
                if !(length.is_finite() && length > 0.0) {
                    return bad(format!("length {length} must be positive"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The exponent θ for maps of the form `c·w^θ`.
    pub fn theta(&self) -> Option<Complex64> {
        match *self {
            ModelMapKind::PowerTheta { theta } => Some(theta),
            ModelMapKind::PowerN { n } => Some(Complex64::new(n as f64, 0.0)),
            ModelMapKind::PowerPlusLog { .. } => None,
            ModelMapKind::LogEnd { length } => Some(Complex64::new(0.0, -length / TAU)),
            ModelMapKind::GeodesicPower { alpha, length, spiral } => {
                let l = match spiral {
                    Spiral::Anticlockwise => length,
                    Spiral::Clockwise => -length,
                };
                Some(Complex64::new(alpha, l) / TAU)
            }
        }
    }

    /// Value on branch `k` of the logarithm, `log w + 2πik`.
    pub fn value_on_branch(&self, w: Complex64, k: i64) -> Complex64 {
        self.value_with_log(w, w.ln() + I * (TAU * k as f64))
    }

    fn value_with_log(&self, w: Complex64, log_w: Complex64) -> Complex64 {
        match *self {
            ModelMapKind::PowerN { n } => w.powi(n as i32),
            ModelMapKind::PowerPlusLog { n } => w.powi(-(n as i32)) + log_w,
            ModelMapKind::LogEnd { .. } => I * (self.theta().unwrap() * log_w).exp(),
            _ => (self.theta().unwrap() * log_w).exp(),
        }
    }

    /// The branch that agrees with the principal one at `z` and is analytic on
    /// the disk `|w - z| < |z|`. Used to differentiate across the cut.
    pub fn local_branch(&self, z: Complex64) -> impl Fn(Complex64) -> Complex64 + '_ {
        let log_z = z.ln();
        move |w| self.value_with_log(w, log_z + (w / z).ln())
    }

    /// Radial limits of the map at the puncture.
    pub fn asymptotic_values(&self) -> Vec<SpherePoint> {
        match *self {
            ModelMapKind::PowerN { .. } => vec![SpherePoint::ZERO],
            ModelMapKind::PowerPlusLog { .. } => vec![SpherePoint::Infinity],
            ModelMapKind::PowerTheta { theta } if theta.im == 0.0 => {
                if theta.re > 0.0 {
                    vec![SpherePoint::ZERO]
                } else {
                    vec![SpherePoint::Infinity]
                }
            }
            _ => vec![SpherePoint::ZERO, SpherePoint::Infinity],
        }
    }

    /// The unique asymptotic value, if there is one.
    pub fn asymptotic_value(&self) -> Option<SpherePoint> {
        match self.asymptotic_values().as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }

    /// Monodromy of the map around the puncture: `z ↦ e^{2πiθ}z` for the
    /// power forms and `z ↦ z + 2πi` for `w^{-n} + log w`.
    pub fn expected_monodromy(&self) -> MoebiusMap {
        match self.theta() {
            Some(theta) => MoebiusMap::scaling((I * TAU * theta).exp()).expect("nonzero multiplier"),
            None => MoebiusMap::translation(I * TAU),
        }
    }
}

/// Evaluates a model map on the principal branch.
///
/// With `strict`, points on the cut (the negative real axis) are rejected;
/// otherwise they take the principal value.
pub fn eval_model(kind: &ModelMapKind, w: &SpherePoint, strict: bool) -> Result<SpherePoint> {
    kind.validate()?;
    let z = match w.as_finite() {
        Some(z) if z != Complex64::new(0.0, 0.0) => z,
        _ => return Err(Error::AtPuncture),
    };
    if strict && z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchCut(format!("{z}")));
    }
    Ok(SpherePoint::from_homogeneous(
        kind.value_on_branch(z, 0),
        Complex64::new(1.0, 0.0),
    ))
}

/// Leading data of the Schwarzian at the puncture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchwarzianReport {
    /// Coefficient of `w⁻²`.
    pub leading: Complex64,
    /// Exponent of the first term after `a·w⁻²`, when the Schwarzian has one.
    pub subleading_order: Option<i32>,
    pub pole_order: PoleOrder,
}

/// Closed-form leading coefficient and pole order.
pub fn closed_form_schwarzian(kind: &ModelMapKind) -> Result<SchwarzianReport> {
    kind.validate()?;
    let report = |leading: Complex64, subleading_order: Option<i32>| {
        let pole_order = if leading != Complex64::new(0.0, 0.0) {
            PoleOrder::Order2
        } else {
            match subleading_order {
                Some(-1) => PoleOrder::Order1,
                _ => PoleOrder::NoPole,
            }
        };
        SchwarzianReport {
            leading,
            subleading_order,
            pole_order,
        }
    };
    Ok(match *kind {
        ModelMapKind::PowerPlusLog { n: 0 } => report(Complex64::new(0.5, 0.0), None),
        ModelMapKind::PowerPlusLog { n } => {
            let n = n as f64;
            report(Complex64::new((1.0 - n * n) / 2.0, 0.0), Some(n as i32 - 2))
        }
        _ => {
            let theta = kind.theta().unwrap();
            report((1.0 - theta * theta) / 2.0, None)
        }
    })
}

/// The full closed-form Schwarzian `S(f)(w)` of a model map.
///
/// For `w^{-n} + log w` this is
/// `(w^{2n} - w^n(2n³ + 2n) - n²(n² - 1)) / (2w²(w^n - n)²)`;
/// for `c·w^θ` it is `(1 - θ²) / 2w²`.
pub fn closed_form_schwarzian_at(kind: &ModelMapKind, w: Complex64) -> Complex64 {
    match *kind {
        ModelMapKind::PowerPlusLog { n } => {
            let wn = w.powi(n as i32);
            let n = n as f64;
            let num = wn * wn - wn * (2.0 * n * n * n + 2.0 * n) - n * n * (n * n - 1.0);
            let den = 2.0 * w * w * (wn - n) * (wn - n);
            num / den
        }
        _ => {
            let theta = kind.theta().unwrap();
            (1.0 - theta * theta) / (2.0 * w * w)
        }
    }
}

/// Number of nodes on each contour in [`numeric_schwarzian`].
const STENCIL: usize = 16;

/// Relative disagreement between the two step sizes that triggers
/// [`Error::StepTooLarge`].
const STEP_AGREEMENT: f64 = 1e-7;

/// First three derivatives from the trapezoid rule on the circle `|w - z| = h`.
fn contour_derivatives(f: &dyn Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> [Complex64; 3] {
    let mut d = [Complex64::new(0.0, 0.0); 3];
    for j in 0..STENCIL {
        let t = TAU * j as f64 / STENCIL as f64;
        let u = Complex64::from_polar(1.0, t);
        let fv = f(z + u * h);
        for (k, dk) in d.iter_mut().enumerate() {
            *dk += fv * u.powi(-(k as i32 + 1));
        }
    }
    let mut fact = 1.0;
    for (k, dk) in d.iter_mut().enumerate() {
        fact *= (k + 1) as f64;
        *dk *= fact / (STENCIL as f64 * h.powi(k as i32 + 1));
    }
    d
}

fn schwarzian_from(d: [Complex64; 3]) -> (Complex64, f64) {
    let [d1, d2, d3] = d;
    let p = d2 / d1;
    let s = d3 / d1 - 1.5 * p * p;
    (s, (d3 / d1).norm() + p.norm_sqr())
}

/// Finite-difference Schwarzian `(f''/f')' - ½(f''/f')²` at `z`.
///
/// Derivatives come from a 16-node contour stencil of radius `h` (default
/// `0.05|z|`), repeated at `h/2`. `f` must be analytic on the disk of radius
/// `h` around `z`. The two estimates must agree to a relative `1e-7`,
/// measured against `1/(20h)²` when the Schwarzian itself is smaller (as for
/// a Möbius map, where it vanishes).
pub fn numeric_schwarzian(f: &dyn Fn(Complex64) -> Complex64, z: Complex64, h: Option<f64>) -> Result<Complex64> {
    let h = h.unwrap_or(0.05 * z.norm().max(f64::MIN_POSITIVE));
    let (s1, _) = schwarzian_from(contour_derivatives(f, z, h));
    let (s2, scale) = schwarzian_from(contour_derivatives(f, z, h / 2.0));
    if !s2.is_finite() {
        return Err(Error::NonFinite(format!("{s2}")));
    }
    let floor = (20.0 * h).powi(-2);
    let err = (s1 - s2).norm() / scale.max(floor);
    if err > STEP_AGREEMENT {
        return Err(Error::StepTooLarge(err));
    }
    Ok(s2)
}

/// Direction of the sampling ray, off the branch cut.
const LIMIT_RAY: f64 = 0.1;
const LIMIT_LEVELS: usize = 10;

/// `lim_{w→0} w²q(w)` by Richardson extrapolation along a ray.
///
/// Samples at `|w| = 0.5·2^{-k}`; assumes `w²q(w)` has an expansion in
/// nonnegative integer powers of `w`. A double-or-lower pole passes; a higher
/// pole makes the samples grow and fails with [`Error::DivergentLimit`].
pub fn leading_coefficient_limit(q: &dyn Fn(Complex64) -> Complex64) -> Result<Complex64> {
    let dir = Complex64::from_polar(1.0, LIMIT_RAY);
    let samples: Vec<Complex64> = (0..LIMIT_LEVELS)
        .map(|k| {
            let w = dir * (0.5 * 0.5f64.powi(k as i32));
            w * w * q(w)
        })
        .collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::DivergentLimit);
    }
    let first = (samples[1] - samples[0]).norm();
    let last = (samples[LIMIT_LEVELS - 1] - samples[LIMIT_LEVELS - 2]).norm();
    if last > 0.5 * first && last > 1e-12 * (1.0 + samples[LIMIT_LEVELS - 1].norm()) {
        return Err(Error::DivergentLimit);
    }
    // Neville table for the step ratio 2.
    let mut table = samples;
    for j in 1..LIMIT_LEVELS {
        let p = 2f64.powi(j as i32);
        for k in (j..LIMIT_LEVELS).rev() {
            table[k] = (p * table[k] - table[k - 1]) / (p - 1.0);
        }
    }
    Ok(table[LIMIT_LEVELS - 1])
}

/// A signed exponent `r = sign·2πi√(1 - 2a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponent {
    pub r: Complex64,
    pub sign: Sign,
}

/// Principal square root throughout.
pub fn exponent_from_leading(a: Complex64, sign: Sign) -> Exponent {
    let r = I * TAU * (1.0 - 2.0 * a).sqrt() * sign.value();
    Exponent { r, sign }
}

/// Minimum number of steps accepted by [`continue_along_loop`].
pub const MIN_LOOP_STEPS: usize = 64;

/// Chordal residual allowed on the check points of the monodromy fit.
const FIT_RESIDUAL: f64 = 1e-8;

/// Continues the model map once anticlockwise around `|w| = |w₀|` and returns
/// the Möbius map `M` with `f_end = M ∘ f_start`.
///
/// The branch is tracked step by step, choosing among the neighbouring
/// logarithm branches the value nearest to the previous sample. The map is
/// fitted on three base points near `w₀` and checked on two more.
pub fn continue_along_loop(kind: &ModelMapKind, w0: Complex64, steps: usize) -> Result<MoebiusMap> {
    kind.validate()?;
    if steps < MIN_LOOP_STEPS {
        return Err(Error::InvalidModel(format!(
            "loop needs at least {MIN_LOOP_STEPS} steps, got {steps}"
        )));
    }
    if w0.norm() == 0.0 || !w0.is_finite() {
        return Err(Error::AtPuncture);
    }
    let point = |z: Complex64| SpherePoint::from_homogeneous(z, Complex64::new(1.0, 0.0));
    let mut k = 0i64;
    let mut prev = point(kind.value_on_branch(w0, 0));
    for j in 1..=steps {
        let w = w0 * Complex64::from_polar(1.0, TAU * j as f64 / steps as f64);
        let (best_k, best_v) = [k - 1, k, k + 1]
            .into_iter()
            .map(|kk| (kk, point(kind.value_on_branch(w, kk))))
            .min_by(|a, b| chordal_distance(&a.1, &prev).total_cmp(&chordal_distance(&b.1, &prev)))
            .expect("three candidates");
        k = best_k;
        prev = best_v;
    }
    let base: Vec<Complex64> = (0..5)
        .map(|m| w0 * (1.0 + 0.15 * m as f64) * Complex64::from_polar(1.0, 0.1 * m as f64))
        .collect();
    let start: Vec<SpherePoint> = base.iter().map(|&u| point(kind.value_on_branch(u, 0))).collect();
    let end: Vec<SpherePoint> = base.iter().map(|&u| point(kind.value_on_branch(u, k))).collect();
    let m = MoebiusMap::from_three_points([start[0], start[1], start[2]], [end[0], end[1], end[2]])?;
    let residual = (3..5)
        .map(|i| chordal_distance(&m.apply(&start[i]), &end[i]))
        .fold(0.0, f64::max);
    if residual > FIT_RESIDUAL {
        return Err(Error::FitResidualTooLarge(residual));
    }
    Ok(m)
}

/// The model developing map of a grafted end.
///
/// A cusp of total weight α not in 2πℤ gets `w^{-α/2π}`; weight 2πn gets
/// `w^n` when the monodromy constant vanishes and `w^{-n} + log w`
/// otherwise (including the bare cusp, n = 0). A geodesic end gets the
/// log form when unweighted and the spiralling power otherwise.
pub fn model_map_for_end(spec: &EndSpec, tol: &Tolerance) -> ModelMapKind {
    match spec {
        EndSpec::Cusp(cusp) => match full_turns(cusp.leaves(), tol) {
            None => ModelMapKind::PowerTheta {
                theta: Complex64::new(-spec.total_weight() / TAU, 0.0),
            },
            Some(0) => ModelMapKind::PowerPlusLog { n: 0 },
            Some(n) => {
                let c = spec.monodromy().constant;
                if c.norm() < tol.knife_edge {
                    ModelMapKind::PowerN { n }
                } else {
                    ModelMapKind::PowerPlusLog { n }
                }
            }
        },
        EndSpec::Geodesic(g) => {
            if g.leaves().is_empty() {
                ModelMapKind::LogEnd { length: g.length() }
            } else {
                ModelMapKind::GeodesicPower {
                    alpha: spec.total_weight(),
                    length: g.length(),
                    spiral: g.spiral(),
                }
            }
        }
    }
}

/// Pole order from the grafting side and from the model Schwarzian agree;
/// exposed for reports that want both.
pub fn pole_orders_agree(spec: &EndSpec, tol: &Tolerance) -> bool {
    closed_form_schwarzian(&model_map_for_end(spec, tol))
        .map(|r| r.pole_order == pole_order(spec, tol))
        .unwrap_or(false)
}

/// `1 - 2a` for the closed-form leading coefficient, written as θ² for the
/// power forms. Equal to `((α ± il)/2π)²` on geodesic ends.
pub fn one_minus_two_a(kind: &ModelMapKind) -> Result<Complex64> {
    Ok(1.0 - 2.0 * closed_form_schwarzian(kind)?.leading)
}

/// `(α ± il)/2π`, the square root of `1 - 2a` predicted for a spiralling end.
pub fn spiral_theta(alpha: f64, length: f64, spiral: Spiral) -> Complex64 {
    match spiral {
        Spiral::Anticlockwise => Complex64::new(alpha, length) / TAU,
        Spiral::Clockwise => Complex64::new(alpha, -length) / TAU,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grafting::{CuspGraftSpec, GeodesicGraftSpec, Leaf, Weight};
    use std::f64::consts::{E, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn value(kind: ModelMapKind, w: Complex64) -> Complex64 {
        eval_model(&kind, &SpherePoint::finite(w), true)
            .unwrap()
            .as_finite()
            .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert!((value(ModelMapKind::PowerN { n: 2 }, c(3.0, 0.0)) - c(9.0, 0.0)).norm() < 1e-14);
        assert!((value(ModelMapKind::PowerPlusLog { n: 1 }, c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        let v = value(ModelMapKind::PowerTheta { theta: c(0.0, 1.0) }, c(E, 0.0));
        assert!((v - Complex64::from_polar(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluation_errors() {
        let k = ModelMapKind::PowerTheta { theta: c(0.5, 0.0) };
        assert_eq!(
            eval_model(&k, &SpherePoint::ZERO, false).unwrap_err(),
            Error::AtPuncture
        );
        assert_eq!(
            eval_model(&k, &SpherePoint::Infinity, false).unwrap_err(),
            Error::AtPuncture
        );
        assert!(matches!(
            eval_model(&k, &SpherePoint::real(-2.0), true),
            Err(Error::BranchCut(_))
        ));
        assert!(eval_model(&k, &SpherePoint::real(-2.0), false).is_ok());
    }

    #[test]
    fn closed_form_examples() {
        let r = closed_form_schwarzian(&ModelMapKind::PowerN { n: 2 }).unwrap();
        assert_eq!((r.leading, r.pole_order), (c(-1.5, 0.0), PoleOrder::Order2));
        let r = closed_form_schwarzian(&ModelMapKind::PowerPlusLog { n: 0 }).unwrap();
        assert_eq!((r.leading, r.pole_order), (c(0.5, 0.0), PoleOrder::Order2));
        let r = closed_form_schwarzian(&ModelMapKind::PowerPlusLog { n: 1 }).unwrap();
        assert_eq!((r.leading, r.pole_order), (c(0.0, 0.0), PoleOrder::Order1));
        let r = closed_form_schwarzian(&ModelMapKind::LogEnd { length: 1.0 }).unwrap();
        assert!((r.leading - c((4.0 * PI * PI + 1.0) / (8.0 * PI * PI), 0.0)).norm() < 1e-15);
        let r = closed_form_schwarzian(&ModelMapKind::PowerN { n: 1 }).unwrap();
        assert_eq!(r.pole_order, PoleOrder::NoPole);
    }

    #[test]
    fn numeric_examples() {
        let mob = |w: Complex64| (2.0 * w + 1.0) / (w - 3.0);
        assert!(numeric_schwarzian(&mob, c(0.4, 0.7), None).unwrap().norm() < 1e-6);
        let sq = |w: Complex64| w * w;
        let s = numeric_schwarzian(&sq, c(0.5, 0.0), None).unwrap();
        assert!((s - c(-6.0, 0.0)).norm() / 6.0 < 1e-6);
        let s = numeric_schwarzian(&|w: Complex64| w.exp(), c(0.3, -1.2), None).unwrap();
        assert!((s - c(-0.5, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn numeric_rejects_large_step() {
        let f = |w: Complex64| (1.0 / (w - 1.0)).exp();
        assert!(matches!(
            numeric_schwarzian(&f, c(0.5, 0.0), Some(0.45)),
            Err(Error::StepTooLarge(_))
        ));
    }

    #[test]
    fn limit_examples() {
        let half = leading_coefficient_limit(&|w: Complex64| 0.5 / (w * w)).unwrap();
        assert!((half - c(0.5, 0.0)).norm() < 1e-12);
        let q = |w: Complex64| (4.0 * PI * PI - PI * PI) / (8.0 * PI * PI * w * w);
        assert!((leading_coefficient_limit(&q).unwrap() - c(0.375, 0.0)).norm() < 1e-12);
        assert!(leading_coefficient_limit(&|w: Complex64| 1.0 / w).unwrap().norm() < 1e-10);
        assert_eq!(
            leading_coefficient_limit(&|w: Complex64| 1.0 / (w * w * w)).unwrap_err(),
            Error::DivergentLimit
        );
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(exponent_from_leading(c(0.5, 0.0), Sign::Plus).r.norm(), 0.0);
        let r = exponent_from_leading(c(0.0, 0.0), Sign::Plus).r;
        assert!((r - c(0.0, TAU)).norm() < 1e-15);
        let r = exponent_from_leading(c(0.375, 0.0), Sign::Plus).r;
        assert!((r - c(0.0, PI)).norm() < 1e-15);
    }

    #[test]
    fn continuation_examples() {
        let k = ModelMapKind::PowerTheta {
            theta: c(1.0 / 3.0, 0.0),
        };
        let m = continue_along_loop(&k, c(0.5, 0.2), 128).unwrap();
        let expected = MoebiusMap::scaling(Complex64::from_polar(1.0, TAU / 3.0)).unwrap();
        assert!(m.distance(&expected) < 1e-8);

        let m = continue_along_loop(&ModelMapKind::PowerN { n: 2 }, c(0.5, 0.2), 64).unwrap();
        assert!(m.distance(&MoebiusMap::IDENTITY) < 1e-8);

        let m = continue_along_loop(&ModelMapKind::PowerPlusLog { n: 0 }, c(0.5, 0.2), 64).unwrap();
        assert!(m.distance(&MoebiusMap::translation(c(0.0, TAU))) < 1e-8);

        assert!(continue_along_loop(&k, c(0.5, 0.2), 10).is_err());
    }

    #[test]
    fn model_maps_for_ends() {
        let t = Tolerance::default();
        let cusp = |leaves: Vec<Leaf>| EndSpec::Cusp(CuspGraftSpec::new(leaves).unwrap());
        let two_halves = cusp(vec![Leaf::new(0.0, Weight::pi(1, 1)), Leaf::new(0.5, Weight::pi(1, 1))]);
        assert_eq!(model_map_for_end(&two_halves, &t), ModelMapKind::PowerN { n: 1 });
        let full = cusp(vec![Leaf::new(0.3, Weight::pi(2, 1))]);
        assert_eq!(model_map_for_end(&full, &t), ModelMapKind::PowerPlusLog { n: 1 });
        let half = cusp(vec![Leaf::new(0.3, Weight::pi(1, 1))]);
        assert_eq!(
            model_map_for_end(&half, &t),
            ModelMapKind::PowerTheta { theta: c(-0.5, 0.0) }
        );
        for spec in [two_halves, full, half, cusp(vec![])] {
            assert!(pole_orders_agree(&spec, &t));
        }
        let g = EndSpec::Geodesic(GeodesicGraftSpec::new(1.0, vec![], Spiral::Clockwise).unwrap());
        assert_eq!(model_map_for_end(&g, &t), ModelMapKind::LogEnd { length: 1.0 });
    }

    #[test]
    fn asymptotics() {
        let inf = |k: ModelMapKind| k.asymptotic_value().map(|p| p.is_infinity());
        assert_eq!(inf(ModelMapKind::PowerN { n: 3 }), Some(false));
        assert_eq!(inf(ModelMapKind::PowerPlusLog { n: 1 }), Some(true));
        assert_eq!(inf(ModelMapKind::PowerTheta { theta: c(-0.5, 0.0) }), Some(true));
        assert_eq!(ModelMapKind::LogEnd { length: 1.0 }.asymptotic_values().len(), 2);
    }

    #[test]
    fn validation() {
        assert!(ModelMapKind::PowerTheta { theta: c(2.0, 0.0) }.validate().is_err());
        assert!(ModelMapKind::PowerN { n: 0 }.validate().is_err());
        assert!(ModelMapKind::LogEnd { length: -1.0 }.validate().is_err());
        assert!(ModelMapKind::GeodesicPower {
            alpha: 0.0,
            length: 1.0,
            spiral: Spiral::Clockwise
        }
        .validate()
        .is_err());
    }
}
