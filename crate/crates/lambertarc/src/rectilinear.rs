//! Times of flight along rectilinear (straight-line) Kepler arcs.
//!
//! A rectilinear problem sends a body from radius `xA` to radius `xB < xA`
//! on a fixed ray through the focus, starting with radial velocity `vA`.
//! Two arc classes exist for every admissible `vA`:
//!
//! * the **direct** arc travels from `xA` to `xB` without passing the
//!   focus — outbound starts culminate at the apoapsis `x_max` and come
//!   back down; its time `T_D(vA)` is strictly increasing and convex;
//! * the **indirect** arc first falls through the focus (a collision
//!   bounce in the straight-line limit) and reaches `xB` from below; its
//!   time `T_I(vA)` is strictly increasing but not convex in general.
//!
//! Both are evaluated by adaptive quadrature. The direct time uses the
//! velocity-drop parametrization `u = v − vA`, under which the radius is
//! the rational function [`x_of_u`] and `T_D = ∫ x(u)² du` over
//! `[vB − vA, 0]`, a smooth integrand for every admissible query. The
//! indirect time combines free-fall integrals with endpoint-regularizing
//! substitutions (`x = x_max sin² s` for bound motion, `x = xU τ²`
//! otherwise) so the integrands stay smooth up to the turning points.
//!
//! Everything here extends verbatim to the degenerate geometry `xB = 0`
//! (focus on the chord) except the direct class, which ceases to exist.

use crate::geometry::RectilinearEquivalent;
use crate::quad::{self, QuadratureFailure};

use std::f64::consts::PI;

/// Fractional margin below escape velocity: queries with
/// `vA > vE·(1 − ESCAPE_MARGIN)` are rejected rather than integrated,
/// because times of flight grow without bound (≈ 1e13 at the margin) and
/// no finite target lies beyond them.
pub const ESCAPE_MARGIN: f64 = 1e-9;

/// Absolute and relative tolerance for every time-of-flight quadrature.
/// Root-finding downstream asks for 1e-12-relative residuals, so the
/// integrals must be at least that good.
pub const QUAD_TOL: f64 = 1e-12;

/// Below this |vA|/vE, the indirect-time derivative at the degenerate
/// geometry switches to its analytic limit `xA²`: the quadrature peak
/// narrows like |vA| and is better replaced than resolved. The limit's
/// truncation error is O(|vA|·xA^{5/2}), negligible at this size.
const DERIVATIVE_LIMIT_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RectilinearError {
    #[error("rectilinear radii must satisfy xA > 0, 0 ≤ xB < xA (got xA={xa}, xB={xb})")]
    InvalidRadii { xa: f64, xb: f64 },
    #[error(
        "departure velocity {va} is above the admissible bound \
         {v_bound} (escape velocity {v_escape} less the escape margin)"
    )]
    EscapeVelocity {
        va: f64,
        v_escape: f64,
        v_bound: f64,
    },
    #[error("direct arcs do not exist when B sits at the focus (xB = 0)")]
    FocusEndpoint,
    #[error("period is undefined for unbound motion (energy {energy})")]
    NonElliptic { energy: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
}

/// A validated rectilinear arc query: radii plus departure velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcQuery {
    xa: f64,
    xb: f64,
    va: f64,
}

impl ArcQuery {
    pub fn new(xa: f64, xb: f64, va: f64) -> Result<Self, RectilinearError> {
        if !(xa.is_finite() && xb.is_finite() && va.is_finite())
            || xa <= 0.0
            || xb < 0.0
            || xb >= xa
        {
            return Err(RectilinearError::InvalidRadii { xa, xb });
        }
        let v_escape = escape_velocity(xa);
        let v_bound = v_escape * (1.0 - ESCAPE_MARGIN);
        if va > v_bound {
            return Err(RectilinearError::EscapeVelocity {
                va,
                v_escape,
                v_bound,
            });
        }
        Ok(ArcQuery { xa, xb, va })
    }

    pub fn from_equivalent(re: &RectilinearEquivalent, va: f64) -> Result<Self, RectilinearError> {
        Self::new(re.xa(), re.xb(), va)
    }

    pub fn xa(&self) -> f64 {
        self.xa
    }
    pub fn xb(&self) -> f64 {
        self.xb
    }
    pub fn va(&self) -> f64 {
        self.va
    }
    /// Specific orbital energy `vA²/2 − 1/xA`; negative for every bound
    /// query (the escape margin keeps it strictly so).
    ///
    /// Evaluated as `(vA − vE)(vA + vE)/2`: near escape the textbook form
    /// cancels two O(1) terms and loses the energy entirely, while the
    /// factored form keeps full relative precision (`vA − vE` is exact
    /// whenever the two are within a factor of two of each other).
    pub fn energy(&self) -> f64 {
        let ve = escape_velocity(self.xa);
        0.5 * (self.va - ve) * (self.va + ve)
    }
    /// Arrival velocity of the *direct* arc: `−√(vA² + 2/xB − 2/xA)`
    /// (direct arcs always arrive inbound). Meaningless for `xB = 0`.
    fn vb_direct(&self) -> f64 {
        // 2/xB + 2H has no cancellation: 2/xB ≥ 2/xA dominates the
        // (negative, tiny near escape) energy term.
        -(2.0 / self.xb + 2.0 * self.energy()).sqrt()
    }
}

/// Escape velocity from radius `xa`: `√(2/xa)`.
pub fn escape_velocity(xa: f64) -> f64 {
    (2.0 / xa).sqrt()
}

/// Radius along an arc as a function of the velocity drop `u = v − vA`,
/// from energy conservation: `x(u) = 1/(1/xA + vA·u + u²/2)`.
///
/// On the direct arc `u` runs from `vB − vA` (arrival) to `0` (departure);
/// the same expression also covers the culminating portion of outbound
/// starts, where the radius tops out at `x(−vA) = x_max`.
///
/// The denominator is evaluated in completed-square form,
/// `(u + vA)²/2 − H`: near escape it bottoms out at `−H ≈ 0`, and the
/// textbook three-term sum would compute that value by cancelling O(1)
/// quantities — noise of ~1e−16/|H| relative, which stalls the adaptive
/// quadrature long before the escape margin. Both terms of the completed
/// square are individually tiny at the culmination, so the profile stays
/// smooth to full precision.
pub fn x_of_u(q: &ArcQuery, u: f64) -> f64 {
    let w = u + q.va;
    let denom = 0.5 * w * w - q.energy();
    debug_assert!(denom > 0.0, "u outside the arc's velocity span");
    1.0 / denom
}

/// Integrate `f(u)` over the direct arc's velocity span `[uB, 0]`,
/// splitting at the culmination `u = −vA` for outbound starts, where the
/// integrands peak.
fn integrate_direct<F: Fn(f64) -> f64>(q: &ArcQuery, f: F) -> Result<f64, RectilinearError> {
    let ub = q.vb_direct() - q.va;
    debug_assert!(ub < 0.0);
    let mut total = 0.0;
    if q.va > 0.0 {
        let split = -q.va;
        total += quad::integrate(&f, ub, split, QUAD_TOL, QUAD_TOL)?.value;
        total += quad::integrate(&f, split, 0.0, QUAD_TOL, QUAD_TOL)?.value;
    } else {
        total += quad::integrate(&f, ub, 0.0, QUAD_TOL, QUAD_TOL)?.value;
    }
    Ok(total)
}

/// Time of flight along the direct arc, `T_D = ∫_{uB}^{0} x(u)² du`.
///
/// Strictly increasing and convex in `vA`; `T_D → 0` as `vA → −∞` (the
/// high-speed asymptote `(xA − xB)/|vA|`) and `T_D → ∞` at escape.
pub fn tof_direct(q: &ArcQuery) -> Result<f64, RectilinearError> {
    if q.xb == 0.0 {
        return Err(RectilinearError::FocusEndpoint);
    }
    integrate_direct(q, |u| {
        let x = x_of_u(q, u);
        x * x
    })
}

/// `dT_D/dvA`: analytic, via the boundary term plus a companion integral
/// in the same parametrization:
/// `−xB²·(vA/vB − 1) + 2·∫_0^{uB} x(u)³ u du`.
///
/// Always positive (the monotonicity half of the counting certificates).
pub fn tof_direct_derivative(q: &ArcQuery) -> Result<f64, RectilinearError> {
    if q.xb == 0.0 {
        return Err(RectilinearError::FocusEndpoint);
    }
    let vb = q.vb_direct();
    let boundary = -q.xb * q.xb * (q.va / vb - 1.0);
    let integral = integrate_direct(q, |u| {
        let x = x_of_u(q, u);
        x * x * x * u
    })?;
    // The formula's ∫_0^{uB} runs against our [uB, 0] orientation.
    Ok(boundary - 2.0 * integral)
}

/// `d²T_D/dvA²`: analytic, used by the multi-revolution minimum search.
/// Positive everywhere (convexity, the other half of the certificates).
pub fn tof_direct_second_derivative(q: &ArcQuery) -> Result<f64, RectilinearError> {
    if q.xb == 0.0 {
        return Err(RectilinearError::FocusEndpoint);
    }
    let vb = q.vb_direct();
    let xb2 = q.xb * q.xb;
    let term1 = -(xb2 / (vb * vb * vb)) * (vb * vb - q.va * q.va);
    let term2 = 2.0 * xb2 * q.xb * (vb - q.va) * (q.va - vb) / vb;
    let integral = integrate_direct(q, |u| {
        let x = x_of_u(q, u);
        x * x * x * x * u * u
    })?;
    Ok(term1 + term2 + 6.0 * integral)
}

/// Orbital period from the (elliptic) energy: `2π(−2H)^{−3/2}`.
pub fn period_from_energy(energy: f64) -> Result<f64, RectilinearError> {
    if energy >= 0.0 {
        return Err(RectilinearError::NonElliptic { energy });
    }
    Ok(2.0 * PI * (-2.0 * energy).powf(-1.5))
}

/// Orbital period of the query's osculating orbit.
pub fn period(q: &ArcQuery) -> Result<f64, RectilinearError> {
    period_from_energy(q.energy())
}

/// `d𝒯/dvA = 6π·vA·(−2H)^{−5/2}` (zero at vA = 0, where energy is
/// stationary). Caller guarantees `energy < 0`.
pub(crate) fn period_derivative(va: f64, energy: f64) -> f64 {
    debug_assert!(energy < 0.0);
    6.0 * PI * va * (-2.0 * energy).powf(-2.5)
}

/// `d²𝒯/dvA² = 6π(−2H)^{−5/2} + 30π·vA²·(−2H)^{−7/2}`: positive, so the
/// period is convex in vA on the elliptic range.
pub(crate) fn period_second_derivative(va: f64, energy: f64) -> f64 {
    debug_assert!(energy < 0.0);
    let w = -2.0 * energy;
    6.0 * PI * w.powf(-2.5) + 30.0 * PI * va * va * w.powf(-3.5)
}

/// Free-fall time from rest-frame radius `x_up` down to the focus along a
/// ray, for a trajectory of energy `h`: `∫_0^{x_up} dx/√(2h + 2/x)`.
///
/// Bound motion (`h < 0`) substitutes `x = x_max sin²s`, which turns the
/// upper-endpoint singularity into the perfectly smooth
/// `√2·x_max^{3/2}·sin²s`; unbound motion substitutes `x = x_up·τ²`,
/// removing the focus-end singularity the same way.
fn fall_time(x_up: f64, h: f64) -> Result<f64, RectilinearError> {
    if x_up == 0.0 {
        return Ok(0.0);
    }
    if h < 0.0 {
        let x_max = -1.0 / h;
        let s_up = (x_up / x_max).min(1.0).sqrt().asin();
        let scale = std::f64::consts::SQRT_2 * x_max.powf(1.5);
        let f = |s: f64| {
            let sin = s.sin();
            scale * sin * sin
        };
        Ok(quad::integrate(&f, 0.0, s_up, QUAD_TOL, QUAD_TOL)?.value)
    } else {
        let scale = 2.0 * x_up.powf(1.5);
        let f = |t: f64| scale * t * t / (2.0 + 2.0 * h * x_up * t * t).sqrt();
        Ok(quad::integrate(&f, 0.0, 1.0, QUAD_TOL, QUAD_TOL)?.value)
    }
}

/// `−∂/∂h` of the free-fall time: `∫_0^{x_up} (2h + 2/x)^{−3/2} dx`,
/// under the same substitutions. Requires `x_up` strictly inside the
/// allowed radius when `h < 0`.
fn fall_time_dh_integral(x_up: f64, h: f64) -> Result<f64, RectilinearError> {
    if x_up == 0.0 {
        return Ok(0.0);
    }
    if h < 0.0 {
        let x_max = -1.0 / h;
        let s_up = (x_up / x_max).min(1.0).sqrt().asin();
        let scale = x_max.powf(2.5) / std::f64::consts::SQRT_2;
        let f = |s: f64| {
            let (sin, cos) = s.sin_cos();
            let s2 = sin * sin;
            scale * s2 * s2 / (cos * cos)
        };
        Ok(quad::integrate(&f, 0.0, s_up, QUAD_TOL, QUAD_TOL)?.value)
    } else {
        let scale = 2.0 * x_up.powf(2.5);
        let f = |t: f64| {
            let t2 = t * t;
            scale * t2 * t2 * (2.0 + 2.0 * h * x_up * t2).powf(-1.5)
        };
        Ok(quad::integrate(&f, 0.0, 1.0, QUAD_TOL, QUAD_TOL)?.value)
    }
}

/// Time of flight along the indirect arc (through the focus).
///
/// Inbound starts (`vA < 0`) are two free falls joined at the focus:
/// `T_I = fall(xA) + fall(xB)`. Outbound starts ride out to apoapsis and
/// come all the way back through, which is one full period minus the
/// direct arc run backwards: `T_I = 𝒯 − T_D(−vA)` — evaluated literally
/// through [`tof_direct`] so the two code paths cross-check each other.
///
/// Strictly increasing in `vA`, from the high-speed asymptote
/// `(xA + xB)/|vA|` up to divergence at escape; not convex in general
/// (near-equal radii produce a concave stretch around vA = 0).
pub fn tof_indirect(q: &ArcQuery) -> Result<f64, RectilinearError> {
    let h = q.energy();
    if q.va < 0.0 {
        Ok(fall_time(q.xa, h)? + fall_time(q.xb, h)?)
    } else {
        // vA ≥ 0 is strictly bound (the escape margin guarantees h < 0).
        let t_period = period_from_energy(h)?;
        let back = if q.xb == 0.0 {
            // The mirrored direct arc degenerates into a plain fall.
            fall_time(q.xa, h)?
        } else {
            let mirrored = ArcQuery {
                xa: q.xa,
                xb: q.xb,
                va: -q.va,
            };
            tof_direct(&mirrored)?
        };
        Ok(t_period - back)
    }
}

/// `dT_I/dvA`: analytic, positive on the whole admissible range.
///
/// On the elliptic range the identity `T_I(vA) = 𝒯 − T_D(−vA)` gives
/// `𝒯′(vA) + T_D′(−vA)` with no singular integrands. Hyperbolic and
/// parabolic starts (`vA ≤ −vE`) differentiate the free falls under the
/// integral sign instead: `dT_I/dvA = −vA·(I(xA) + I(xB))` with
/// `I = ∫ (2h + 2/x)^{−3/2} dx`.
pub fn tof_indirect_derivative(q: &ArcQuery) -> Result<f64, RectilinearError> {
    let h = q.energy();
    if h < 0.0 {
        let dperiod = period_derivative(q.va, h);
        if q.xb == 0.0 {
            let ve = escape_velocity(q.xa);
            if q.va.abs() < DERIVATIVE_LIMIT_FRACTION * ve {
                // The companion integral's peak collapses with vA; its
                // limit is exactly xA².
                return Ok(dperiod + q.xa * q.xa);
            }
            return Ok(dperiod + q.va * fall_time_dh_integral(q.xa, h)?);
        }
        let mirrored = ArcQuery {
            xa: q.xa,
            xb: q.xb,
            va: -q.va,
        };
        Ok(dperiod + tof_direct_derivative(&mirrored)?)
    } else {
        let sum = fall_time_dh_integral(q.xa, h)? + fall_time_dh_integral(q.xb, h)?;
        Ok(-q.va * sum)
    }
}
