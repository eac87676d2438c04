//! Surface signatures, dimension counts and the signed fiber-square check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grafting::{grafting_exponent, signed_c_parameter, SignedEndData};
use crate::schwarzian::{closed_form_schwarzian, model_map_for_end};
use crate::tolerance::Tolerance;

/// A marked bordered surface: genus `g`, boundary circles with pole orders
/// `n_i ≥ 3` (each carrying `n_i - 2` marked points) and `m` punctures, of
/// which `p` are cusps and the rest geodesic ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: u32,
    pub boundaries: Vec<u32>,
    pub punctures: u32,
    pub cusps: u32,
}

impl SurfaceSignature {
    /// Validates the signature, including `χ > 0`.
    pub fn new(genus: u32, boundaries: Vec<u32>, punctures: u32, cusps: u32) -> Result<Self> {
        let sig = SurfaceSignature {
            genus,
            boundaries,
            punctures,
            cusps,
        };
        chi(&sig)?;
        Ok(sig)
    }

    pub fn k(&self) -> u32 {
        self.boundaries.len() as u32
    }

    /// Number of geodesic-boundary ends, `b = m - p`.
    pub fn geodesic_ends(&self) -> u32 {
        self.punctures.saturating_sub(self.cusps)
    }

    /// `Σ(n_i - 2)`, the number of boundary marked points.
    pub fn boundary_marked_points(&self) -> u32 {
        self.boundaries.iter().map(|n| n.saturating_sub(2)).sum()
    }

    /// `|𝕄| = m + Σ(n_i - 2)`.
    pub fn marked_points(&self) -> u32 {
        self.punctures + self.boundary_marked_points()
    }
}

/// `6g - 6 + Σ(n_i + 1) + 3m` without any validation.
pub fn chi_formula(sig: &SurfaceSignature) -> i64 {
    6 * sig.genus as i64 - 6 + sig.boundaries.iter().map(|&n| n as i64 + 1).sum::<i64>() + 3 * sig.punctures as i64
}

/// [`chi_formula`] on a validated signature; rejects signatures outside the standing
/// hypotheses (χ > 0, `n_i ≥ 3`, `p ≤ m`, and `|𝕄| ≥ 3` in genus zero).
pub fn chi(sig: &SurfaceSignature) -> Result<i64> {
    if let Some(n) = sig.boundaries.iter().find(|&&n| n < 3) {
        return Err(Error::InvalidSignature(format!("boundary pole order {n} < 3")));
    }
    if sig.cusps > sig.punctures {
        return Err(Error::InvalidSignature(format!(
            "{} cusps but only {} punctures",
            sig.cusps, sig.punctures
        )));
    }
    if sig.genus == 0 && sig.marked_points() < 3 {
        return Err(Error::InvalidSignature(format!(
            "genus 0 needs at least 3 marked points, got {}",
            sig.marked_points()
        )));
    }
    let chi = chi_formula(sig);
    if chi <= 0 {
        return Err(Error::InvalidSignature(format!("χ = {chi} is not positive")));
    }
    Ok(chi)
}

/// Dehn–Thurston accounting for signed measured laminations.
///
/// `pants` and `interior_curves` are formal counts: for a disk or annulus
/// with crowns they go negative while the factor sum still equals χ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtParameterCount {
    pub pants: i64,
    pub interior_curves: i64,
    /// Length and twist for each interior curve, `2t`.
    pub curve_factor: i64,
    /// One length per geodesic end or crown boundary, `b + k`.
    pub boundary_factor: i64,
    /// One weight per cusp, `p`; nonnegative in the unsigned count.
    pub cusp_factor: i64,
    /// `Σ(n_i - 2)`.
    pub crown_factor: i64,
    pub total: i64,
}

pub fn dt_parameter_count(sig: &SurfaceSignature) -> Result<DtParameterCount> {
    let chi = chi(sig)?;
    let m = sig.punctures as i64;
    let k = sig.k() as i64;
    let pants = 2 * sig.genus as i64 - 2 + m + k;
    let twice_t = 3 * pants - (m + k);
    if twice_t % 2 != 0 {
        return Err(Error::NonIntegerT);
    }
    let t = twice_t / 2;
    let curve_factor = 2 * t;
    let boundary_factor = sig.geodesic_ends() as i64 + k;
    let cusp_factor = sig.cusps as i64;
    let crown_factor = sig.boundary_marked_points() as i64;
    let total = curve_factor + boundary_factor + cusp_factor + crown_factor;
    if total != chi {
        return Err(Error::InvalidSignature(format!(
            "parameter count {total} differs from χ = {chi}"
        )));
    }
    Ok(DtParameterCount {
        pants,
        interior_curves: t,
        curve_factor,
        boundary_factor,
        cusp_factor,
        crown_factor,
        total,
    })
}

/// Tolerance of the fiber-square identity.
pub const FIBER_SQUARE_TOL: f64 = 1e-10;

/// The three sides of the fiber square at one end.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FiberSquare {
    /// `c²` from the signed lamination parameter.
    pub c_squared: Complex64,
    /// `r²` from the grafting exponent.
    pub exponent_squared: Complex64,
    /// `r² = -4π²(1 - 2a)` from the leading coefficient of the model map.
    pub schwarzian_squared: Complex64,
}

impl FiberSquare {
    pub fn of(end: &SignedEndData, tol: &Tolerance) -> Result<Self> {
        let c = signed_c_parameter(end);
        let r = grafting_exponent(end);
        let a = closed_form_schwarzian(&model_map_for_end(end.spec(), tol))?.leading;
        let tau2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        Ok(FiberSquare {
            c_squared: c * c,
            exponent_squared: r * r,
            schwarzian_squared: -tau2 * (1.0 - 2.0 * a),
        })
    }

    pub fn holds(&self) -> bool {
        (self.c_squared - self.exponent_squared).norm() < FIBER_SQUARE_TOL
            && (self.c_squared - self.schwarzian_squared).norm() < FIBER_SQUARE_TOL
    }
}

/// Whether squaring the signed lamination parameter agrees with the squared
/// exponent, computed both from the grafting data and from the Schwarzian.
pub fn fiber_square_check(end: &SignedEndData, tol: &Tolerance) -> bool {
    FiberSquare::of(end, tol).is_ok_and(|f| f.holds())
}
