//! Times of flight on the symmetric configuration.
//!
//! The symmetric picture places both endpoints on radius `r` at polar
//! angles `θA` and `π − θA`, so every candidate arc is a conic
//! `ρ(θ) = r(1 − η sinθA)/(1 − η sinθ)` indexed by the single shooting
//! parameter `η`. Kepler's second law turns its transfer time into one
//! explicit integral,
//!
//! `T_D(η) = 2 r^{3/2} (1 − η sinθA)^{3/2} ∫_{θA}^{π/2} (1 − η sinθ)^{−2} dθ`,
//!
//! evaluated here by adaptive quadrature. This is a genuinely different
//! computation from the rectilinear route — different parametrization,
//! different integrand, different singular structure — which makes the
//! agreement of the two a strong end-to-end check on both.
//!
//! The indirect class has no similarly clean symmetric integral (the
//! conic sweeps through the focus), so [`tof_indirect_symmetric`] maps
//! `η` to the rectilinear departure velocity and defers to the
//! rectilinear evaluator.

use crate::geometry::{GeometryError, RectilinearEquivalent, SymmetricEquivalent};
use crate::maps::{self, MapsError};
use crate::quad::{self, QuadratureFailure};
use crate::rectilinear::{self, ArcQuery, RectilinearError, QUAD_TOL};

use std::f64::consts::FRAC_PI_2;

/// Margin below the direct-class escape parameter `η = 1`: times of
/// flight diverge there, so queries beyond `1 − ESCAPE_ETA_MARGIN` are
/// rejected. Matches the rectilinear escape margin through the map
/// `η(vE) = 1`.
pub const ESCAPE_ETA_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymmetricError {
    #[error(
        "η = {eta} is at or beyond the direct-class escape bound {bound}; \
         times of flight diverge there"
    )]
    EscapeEta { eta: f64, bound: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
    #[error(transparent)]
    Rectilinear(#[from] RectilinearError),
    #[error(transparent)]
    Maps(#[from] MapsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Invert the symmetric reduction: recover the rectilinear pair
/// `xA = r(1 + cosθA)`, `xB = r(1 − cosθA)` that generates this
/// configuration.
pub fn to_rectilinear(se: &SymmetricEquivalent) -> RectilinearEquivalent {
    let cos = se.theta_a().cos();
    RectilinearEquivalent::new(se.r() * (1.0 + cos), se.r() * (1.0 - cos))
        .expect("a valid symmetric configuration always yields valid radii")
}

fn check_eta(eta: f64) -> Result<(), SymmetricError> {
    let bound = 1.0 - ESCAPE_ETA_MARGIN;
    if !eta.is_finite() || eta > bound {
        return Err(SymmetricError::EscapeEta { eta, bound });
    }
    Ok(())
}

/// Direct-arc time of flight as an explicit function of `η`.
///
/// Strictly increasing on `η ∈ (−∞, 1)`, from 0 in the hyperbolic limit
/// to divergence at escape; the inbound parabola sits at `η = −1`.
pub fn tof_direct_symmetric(se: &SymmetricEquivalent, eta: f64) -> Result<f64, SymmetricError> {
    check_eta(eta)?;
    let p = se.sin_theta_a();
    let lead = 2.0 * se.r().powf(1.5) * (1.0 - eta * p).powf(1.5);
    // Integrate over t = π/2 − θ so the peak sits at an endpoint, with
    // the denominator in the form (1 − η) + 2η·sin²(t/2): near escape
    // (η → 1, t → 0) the textbook 1 − η·sinθ subtracts two O(1) numbers
    // to produce ~1e−9, drowning the profile in rounding noise; both
    // terms of the rearrangement are small there and carry full relative
    // precision.
    let f = |t: f64| {
        let d = stable_denominator(eta, t);
        1.0 / (d * d)
    };
    let integral = quad::integrate(&f, 0.0, FRAC_PI_2 - se.theta_a(), QUAD_TOL, QUAD_TOL)?;
    Ok(lead * integral.value)
}

/// `1 − η·cos t`, evaluated as `(1 − η) + 2η·sin²(t/2)`.
///
/// For `η ∈ (0, 1)` both terms are nonnegative (no cancellation even as
/// the sum approaches 0); for `η ≤ 0` the value is bounded below by 1.
fn stable_denominator(eta: f64, t: f64) -> f64 {
    let s = (0.5 * t).sin();
    (1.0 - eta) + 2.0 * eta * s * s
}

/// `dT_D/dη`, by differentiating under the integral sign:
///
/// `2 r^{3/2} ∫_{θA}^{π/2} (1 − ηp)^{1/2} (1 − ηq)^{−3} K dθ` with
/// `p = sinθA`, `q = sinθ`, and `K = (p/2)(1 − qη) + 2(q − p)`.
///
/// `K > 0` across the integration range, which exhibits the direct
/// class's strict monotonicity without any numerics.
pub fn tof_direct_symmetric_derivative(
    se: &SymmetricEquivalent,
    eta: f64,
) -> Result<f64, SymmetricError> {
    check_eta(eta)?;
    let p = se.sin_theta_a();
    let lead = 2.0 * se.r().powf(1.5);
    // Same t = π/2 − θ rearrangement as the time integral (q = cos t),
    // with q − p = cos t − cos t_up in product form: every factor that
    // can vanish is computed without cancellation.
    let t_up = FRAC_PI_2 - se.theta_a();
    let f = |t: f64| {
        let d = stable_denominator(eta, t);
        let q_minus_p = 2.0 * (0.5 * (t_up + t)).sin() * (0.5 * (t_up - t)).sin();
        let k = 0.5 * p * d + 2.0 * q_minus_p;
        (1.0 - eta * p).sqrt() * k / (d * d * d)
    };
    let integral = quad::integrate(&f, 0.0, t_up, QUAD_TOL, QUAD_TOL)?;
    Ok(lead * integral.value)
}

/// Indirect-arc time of flight at shooting parameter `η`, through the
/// rectilinear equivalence: the indirect map sends `η` to a departure
/// velocity, whose indirect rectilinear time equals the planar one.
///
/// Strictly increasing on `η ∈ (−1, m/g)`: `η → −1` is escape
/// (`vA → +vE`, rejected via the velocity bound), `η = +1` the
/// through-focus parabola, `η → m/g` the high-speed limit `T → 0`.
pub fn tof_indirect_symmetric(se: &SymmetricEquivalent, eta: f64) -> Result<f64, SymmetricError> {
    let re = to_rectilinear(se);
    let va = maps::va_from_eta_indirect(&re, eta)?;
    let q = ArcQuery::from_equivalent(&re, va)?;
    Ok(rectilinear::tof_indirect(&q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::reduce_to_symmetric;
    use std::f64::consts::{FRAC_PI_4, PI};

    /// The symmetric image of the rectilinear pair (2, 1):
    /// r = 3/2, sinθA = 2√2/3.
    fn se21() -> SymmetricEquivalent {
        reduce_to_symmetric(&RectilinearEquivalent::new(2.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn circular_arc_reference() {
        // η = 0 on r = 1 is the unit circular orbit: the sweep from π/4
        // to 3π/4 at unit mean motion takes exactly π/2.
        let se = SymmetricEquivalent::new(1.0, FRAC_PI_4).unwrap();
        let t = tof_direct_symmetric(&se, 0.0).unwrap();
        assert!((t - FRAC_PI_2).abs() < 1e-12, "{t}");
    }

    #[test]
    fn parabolic_direct_reference() {
        // η = −1 is the inbound parabola; on the (2,1) configuration its
        // time is (4 − √2)/3.
        let t = tof_direct_symmetric(&se21(), -1.0).unwrap();
        let expect = (4.0 - 2.0_f64.sqrt()) / 3.0;
        assert!((t - expect).abs() < 1e-11, "{t} vs {expect}");
    }

    #[test]
    fn rest_start_direct_reference() {
        // η = s = √(xB/xA) maps to vA = 0: the drop from rest, π/2 + 1.
        let t = tof_direct_symmetric(&se21(), 0.5_f64.sqrt()).unwrap();
        let expect = FRAC_PI_2 + 1.0;
        assert!((t - expect).abs() < 1e-11, "{t} vs {expect}");
    }

    #[test]
    fn parabolic_indirect_reference() {
        // η = +1 is the through-focus parabola: (4 + √2)/3 on (2, 1).
        let t = tof_indirect_symmetric(&se21(), 1.0).unwrap();
        let expect = (4.0 + 2.0_f64.sqrt()) / 3.0;
        assert!((t - expect).abs() < 1e-11, "{t} vs {expect}");
    }

    #[test]
    fn rest_start_indirect_reference() {
        let t = tof_indirect_symmetric(&se21(), 0.5_f64.sqrt()).unwrap();
        let expect = 3.0 * PI / 2.0 - 1.0;
        assert!((t - expect).abs() < 1e-11, "{t} vs {expect}");
    }

    #[test]
    fn direct_route_agrees_with_rectilinear_route() {
        // Same arcs, two unrelated quadratures.
        let se = se21();
        let re = to_rectilinear(&se);
        for &eta in &[-2.5, -1.0, -0.37, 0.0, 0.42, 0.9] {
            let t_sym = tof_direct_symmetric(&se, eta).unwrap();
            let va = maps::va_from_eta_direct(&re, eta).unwrap();
            let q = ArcQuery::from_equivalent(&re, va).unwrap();
            let t_rect = rectilinear::tof_direct(&q).unwrap();
            assert!(
                (t_sym - t_rect).abs() < 1e-10 * (1.0 + t_rect),
                "η={eta}: symmetric {t_sym} vs rectilinear {t_rect}"
            );
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let se = se21();
        for &eta in &[-1.8, -0.6, 0.0, 0.55, 0.9] {
            let h = 1e-6;
            let tp = tof_direct_symmetric(&se, eta + h).unwrap();
            let tm = tof_direct_symmetric(&se, eta - h).unwrap();
            let fd = (tp - tm) / (2.0 * h);
            let an = tof_direct_symmetric_derivative(&se, eta).unwrap();
            assert!(
                (fd - an).abs() < 1e-6 * an.abs().max(1.0),
                "η={eta}: fd {fd} vs analytic {an}"
            );
            assert!(an > 0.0, "strictly increasing in η");
        }
    }

    #[test]
    fn escape_parameter_is_rejected() {
        let se = se21();
        assert!(matches!(
            tof_direct_symmetric(&se, 1.0),
            Err(SymmetricError::EscapeEta { .. })
        ));
        assert!(matches!(
            tof_direct_symmetric(&se, f64::NAN),
            Err(SymmetricError::EscapeEta { .. })
        ));
        assert!(tof_direct_symmetric(&se, 1.0 - 2e-9).is_ok());
        // The indirect escape end η = −1 is outside the indirect map's
        // domain; just inside it, the velocity bound takes over.
        assert!(matches!(
            tof_indirect_symmetric(&se, -1.0),
            Err(SymmetricError::Maps(MapsError::EtaOutOfDomain { .. }))
        ));
        assert!(matches!(
            tof_indirect_symmetric(&se, -1.0 + 1e-13),
            Err(SymmetricError::Rectilinear(
                RectilinearError::EscapeVelocity { .. }
            ))
        ));
    }

    #[test]
    fn round_trip_through_rectilinear_preserves_the_pair() {
        let se = se21();
        let re = to_rectilinear(&se);
        assert!((re.xa() - 2.0).abs() < 1e-14);
        assert!((re.xb() - 1.0).abs() < 1e-14);
    }
}
