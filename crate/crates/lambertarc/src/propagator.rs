//! Exact two-body propagation, used as an independent verification oracle.
//!
//! Nothing in here shares formulas with the time-of-flight integrals: a
//! universal-variable solution of the Kepler problem advances any planar
//! state — elliptic, parabolic, or hyperbolic — through one code path,
//! with Stumpff functions evaluated by series near zero and closed forms
//! elsewhere. Every solution the solver emits is re-checked by
//! propagating its reconstructed initial state and measuring the arrival
//! miss; agreement means two unrelated computations concur.
//!
//! Rectilinear states (zero angular momentum) are advanced by the
//! closed-form radial Kepler equations instead, and only up to their
//! collision with the center — this oracle does not bounce through
//! collisions; regularized rectilinear times are the time-of-flight
//! modules' business.

use crate::vec2::Vec2;

use std::f64::consts::PI;

/// Convergence tolerance on the universal Kepler equation, as a time
/// residual relative to max(1, |t|).
pub const UV_TOLERANCE: f64 = 1e-14;

/// Iteration cap for the safeguarded Newton loops; with a maintained
/// bracket, 60 bisections alone reach 2⁻⁶⁰ of the initial interval, so
/// hitting the cap signals a genuine problem rather than slow progress.
const MAX_ITERATIONS: usize = 60;

/// Angular momentum below this fraction of `r·max(|v|, vE)` classifies
/// the state as rectilinear. States built on a ray are exactly zero;
/// the slack only absorbs roundoff from upstream rotations.
const RECTILINEAR_C_FRACTION: f64 = 1e-12;

/// |z| below which the Stumpff functions use their power series; ten
/// terms at |z| = 0.1 leave a truncation error near 1e-31.
const STUMPFF_SERIES_RADIUS: f64 = 0.1;

/// Half-width of the dimensionless energy band `|h|·r0` treated as
/// parabolic by the radial propagator. The elliptic/hyperbolic anomaly
/// parametrizations lose every significant digit as h → 0 (the
/// semi-major axis overflows), while the parabolic power law is their
/// common limit; 1e-10 is ~1e6 rounding errors wide yet keeps the
/// misclassification error in the reported times far below 1e-12.
const RADIAL_PARABOLIC_BAND: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PropagatorError {
    #[error(
        "trajectory reaches the center inside the requested span \
         (collision at t ≈ {time}); radial arcs are only propagated \
         between collisions"
    )]
    CollisionWithinInterval { time: f64 },
    #[error(
        "universal Kepler iteration did not converge after {iterations} \
         iterations (time residual {residual})"
    )]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("conic coefficients are undefined for a rectilinear state (C = 0)")]
    RectilinearState,
    #[error("state has non-finite components or zero radius")]
    NonFinite,
}

/// A planar two-body state (μ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeplerState {
    pub pos: Vec2,
    pub vel: Vec2,
}

impl KeplerState {
    pub fn new(pos: Vec2, vel: Vec2) -> Self {
        KeplerState { pos, vel }
    }

    pub fn radius(&self) -> f64 {
        self.pos.norm()
    }

    fn validate(&self) -> Result<(), PropagatorError> {
        if !self.pos.is_finite() || !self.vel.is_finite() || !(self.pos.norm() > 0.0) {
            return Err(PropagatorError::NonFinite);
        }
        Ok(())
    }
}

/// Specific orbital energy `|v|²/2 − 1/r`.
pub fn energy(s: &KeplerState) -> f64 {
    0.5 * s.vel.norm_squared() - 1.0 / s.pos.norm()
}

/// Scalar (out-of-plane) angular momentum `C = x·vy − y·vx`.
pub fn angular_momentum(s: &KeplerState) -> f64 {
    s.pos.cross(s.vel)
}

fn is_rectilinear(s: &KeplerState) -> bool {
    let r = s.pos.norm();
    let v_scale = s.vel.norm().max((2.0 / r).sqrt());
    angular_momentum(s).abs() <= RECTILINEAR_C_FRACTION * r * v_scale
}

/// Coefficients `(α, β, γ)` of the state's conic, `r = αx + βy + γ`:
/// the negated eccentricity vector plus the semi-latus rectum `γ = C²`.
///
/// First integrals of the motion — the conservation checks in the tests
/// compare them across propagation.
pub fn eccentricity_vector(s: &KeplerState) -> Result<(f64, f64, f64), PropagatorError> {
    s.validate()?;
    if is_rectilinear(s) {
        return Err(PropagatorError::RectilinearState);
    }
    let c = angular_momentum(s);
    let r = s.pos.norm();
    let alpha = s.pos.x / r - c * s.vel.y;
    let beta = s.pos.y / r + c * s.vel.x;
    Ok((alpha, beta, c * c))
}

/// Advance a state by time `t` (either sign) along its exact two-body
/// trajectory.
///
/// Planar states go through the universal-variable Kepler equation;
/// rectilinear states through the closed-form radial equations, failing
/// with [`PropagatorError::CollisionWithinInterval`] if the center is
/// reached inside the span.
pub fn propagate(s: &KeplerState, t: f64) -> Result<KeplerState, PropagatorError> {
    s.validate()?;
    if !t.is_finite() {
        return Err(PropagatorError::NonFinite);
    }
    if t == 0.0 {
        return Ok(*s);
    }
    if is_rectilinear(s) {
        propagate_radial(s, t)
    } else {
        propagate_universal(s, t)
    }
}

// --------------------------------------------------------------------
// Universal-variable path (planar states)
// --------------------------------------------------------------------

/// Stumpff pair `(C(z), S(z))`.
fn stumpff(z: f64) -> (f64, f64) {
    if z.abs() <= STUMPFF_SERIES_RADIUS {
        let mut c = 0.0;
        let mut s = 0.0;
        let mut term_c = 0.5; // 1/2!
        let mut term_s = 1.0 / 6.0; // 1/3!
        for k in 0..10 {
            c += term_c;
            s += term_s;
            let k2 = (2 * k) as f64;
            term_c *= -z / ((k2 + 3.0) * (k2 + 4.0));
            term_s *= -z / ((k2 + 4.0) * (k2 + 5.0));
        }
        (c, s)
    } else if z > 0.0 {
        let sq = z.sqrt();
        ((1.0 - sq.cos()) / z, (sq - sq.sin()) / (sq * sq * sq))
    } else {
        let sq = (-z).sqrt();
        ((sq.cosh() - 1.0) / -z, (sq.sinh() - sq) / (sq * sq * sq))
    }
}

fn propagate_universal(s: &KeplerState, t: f64) -> Result<KeplerState, PropagatorError> {
    let r0 = s.pos.norm();
    let rv0 = s.pos.dot(s.vel); // r0 · (radial speed)
    let alpha = 2.0 / r0 - s.vel.norm_squared(); // 1/semimajor axis

    // The universal Kepler equation F(χ) = t; F is strictly increasing
    // (F′ is the radius along the arc). Alongside the residual and
    // slope, report the magnitude of the terms that were summed: far
    // from the origin (many revolutions) they dwarf t itself, and their
    // rounding — not UV_TOLERANCE — sets the smallest residual any χ
    // can reach.
    let kepler = |chi: f64| -> (f64, f64, f64) {
        let z = alpha * chi * chi;
        let (cz, sz) = stumpff(z);
        let chi2 = chi * chi;
        let t1 = rv0 * chi2 * cz;
        let t2 = (1.0 - alpha * r0) * chi2 * chi * sz;
        let t3 = r0 * chi;
        let f = t1 + t2 + t3 - t;
        let fp = rv0 * chi * (1.0 - z * sz) + (1.0 - alpha * r0) * chi2 * cz + r0;
        let scale = t1.abs() + t2.abs() + t3.abs() + t.abs();
        (f, fp, scale)
    };

    // Bracket the root: F(0) = −t, so 0 is one end; march the other end
    // out geometrically. The elliptic guess χ ≈ α·t is exact over whole
    // periods. Hyperbolic needs a logarithmic starter — F grows like
    // exp(√−α·χ), so Newton from a linear guess would crawl at ~1/√−α
    // per step. In between, the small-time slope 1/r0 seeds the march.
    let guess = if alpha > 1e-12 {
        alpha * t
    } else if alpha < -1e-12 {
        let sqa = (-1.0 / alpha).sqrt();
        let arg = -2.0 * alpha * t / (rv0 + t.signum() * sqa * (1.0 - alpha * r0));
        let log_guess = t.signum() * sqa * arg.ln();
        if log_guess.is_finite() && log_guess * t > 0.0 {
            log_guess
        } else {
            t / r0
        }
    } else {
        t / r0
    };
    let dir = t.signum();
    let mut far = if guess * dir > 0.0 { guess } else { dir * 1e-3 };
    let mut expansions = 0;
    while kepler(far).0 * dir < 0.0 {
        far *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(PropagatorError::NoConvergence {
                iterations: expansions,
                residual: kepler(far).0.abs(),
            });
        }
    }
    let (mut lo, mut hi) = if t > 0.0 { (0.0, far) } else { (far, 0.0) };

    let tol = UV_TOLERANCE * t.abs().max(1.0);
    let mut chi = guess.clamp(lo, hi);
    let mut residual = f64::INFINITY;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let (f, fp, scale) = kepler(chi);
        residual = f.abs();
        // Converged when the residual reaches the target, or the noise
        // floor of the evaluation itself — whichever is coarser.
        if residual <= tol.max(16.0 * f64::EPSILON * scale) {
            converged = true;
            break;
        }
        if f < 0.0 {
            lo = chi;
        } else {
            hi = chi;
        }
        let newton = chi - f / fp;
        let next = if fp > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - chi).abs() <= f64::EPSILON * chi.abs() {
            // The bracket is a single ulp wide: this is the best
            // representable root regardless of the residual.
            chi = next;
            residual = kepler(chi).0.abs();
            converged = true;
            break;
        }
        chi = next;
    }
    if !converged {
        return Err(PropagatorError::NoConvergence {
            iterations: MAX_ITERATIONS,
            residual,
        });
    }

    // Lagrange coefficients.
    let z = alpha * chi * chi;
    let (cz, sz) = stumpff(z);
    let chi2 = chi * chi;
    let f = 1.0 - chi2 * cz / r0;
    let g = t - chi2 * chi * sz;
    let pos = f * s.pos + g * s.vel;
    let r1 = pos.norm();
    let fdot = chi * (z * sz - 1.0) / (r1 * r0);
    let gdot = 1.0 - chi2 * cz / r1;
    let vel = fdot * s.pos + gdot * s.vel;
    Ok(KeplerState { pos, vel })
}

// --------------------------------------------------------------------
// Radial path (rectilinear states)
// --------------------------------------------------------------------

fn propagate_radial(s: &KeplerState, t: f64) -> Result<KeplerState, PropagatorError> {
    let r0 = s.pos.norm();
    let unit = s.pos / r0;
    let v0 = s.vel.dot(unit);
    let h = 0.5 * v0 * v0 - 1.0 / r0;

    // Computing h cancels two O(1/r0) terms, so an exactly-parabolic
    // state lands a few ulps to either side of zero — and both
    // neighboring branches degrade badly there (a → ±∞, anomalies
    // ~√|h|). Route anything within the rounding band to the parabolic
    // form, which is exact in the limit.
    let (x1, v1) = if h * r0 < -RADIAL_PARABOLIC_BAND {
        radial_elliptic(r0, v0, h, t)?
    } else if h * r0 <= RADIAL_PARABOLIC_BAND {
        radial_parabolic(r0, v0, t)?
    } else {
        radial_hyperbolic(r0, v0, h, t)?
    };
    Ok(KeplerState {
        pos: unit * x1,
        vel: unit * v1,
    })
}

/// Bound radial motion: `x = a(1 − cos E)`, `t = a^{3/2}(E − sin E)`
/// from the collision. One full anomaly cycle separates consecutive
/// collisions; leaving (0, 2π) means the span contains one.
fn radial_elliptic(r0: f64, v0: f64, h: f64, t: f64) -> Result<(f64, f64), PropagatorError> {
    let a = -0.5 / h;
    let mut e0 = (1.0 - r0 / a).clamp(-1.0, 1.0).acos();
    if v0 < 0.0 {
        e0 = 2.0 * PI - e0;
    }
    let m0 = e0 - e0.sin();
    let mean_rate = a.powf(-1.5);
    let m1 = m0 + t * mean_rate;
    if m1 <= 0.0 || m1 >= 2.0 * PI {
        let time = if t > 0.0 {
            (2.0 * PI - m0) / mean_rate
        } else {
            -m0 / mean_rate
        };
        return Err(PropagatorError::CollisionWithinInterval { time });
    }
    let e1 = solve_kepler_elliptic(m1)?;
    let x1 = a * (1.0 - e1.cos());
    let v1 = e1.sin() / (a.sqrt() * (1.0 - e1.cos()));
    Ok((x1, v1))
}

/// Zero-energy radial motion: `|t_from_collision| = (√2/3) x^{3/2}`.
fn radial_parabolic(r0: f64, v0: f64, t: f64) -> Result<(f64, f64), PropagatorError> {
    let t0 = v0.signum() * std::f64::consts::SQRT_2 / 3.0 * r0.powf(1.5);
    let t1 = t0 + t;
    if t1 == 0.0 || (t1 > 0.0) != (t0 > 0.0) {
        return Err(PropagatorError::CollisionWithinInterval { time: -t0 });
    }
    let x1 = (4.5 * t1 * t1).powf(1.0 / 3.0);
    let v1 = t1.signum() * (2.0 / x1).sqrt();
    Ok((x1, v1))
}

/// Unbound radial motion: `x = a(cosh F − 1)`,
/// `t = a^{3/2}(sinh F − F)` from the collision, `F` signed like the
/// radial velocity.
fn radial_hyperbolic(r0: f64, v0: f64, h: f64, t: f64) -> Result<(f64, f64), PropagatorError> {
    let a = 0.5 / h;
    let f0 = v0.signum() * (1.0 + r0 / a).acosh();
    let m0 = f0.sinh() - f0;
    let mean_rate = a.powf(-1.5);
    let m1 = m0 + t * mean_rate;
    if m1 == 0.0 || (m1 > 0.0) != (m0 > 0.0) {
        return Err(PropagatorError::CollisionWithinInterval {
            time: -m0 / mean_rate,
        });
    }
    let f1 = m1.signum() * solve_kepler_hyperbolic(m1.abs())?;
    let x1 = a * (f1.cosh() - 1.0);
    let v1 = f1.signum() * (2.0 * h + 2.0 / x1).sqrt();
    Ok((x1, v1))
}

/// Solve `E − sin E = m` for `E ∈ (0, 2π)` (rectilinear eccentricity 1).
fn solve_kepler_elliptic(m: f64) -> Result<f64, PropagatorError> {
    // Cube-root behavior at both collision ends makes the plain M guess
    // useless there; seed accordingly.
    let mut e = if m < 0.5 {
        (6.0 * m).powf(1.0 / 3.0)
    } else if m > 2.0 * PI - 0.5 {
        2.0 * PI - (6.0 * (2.0 * PI - m)).powf(1.0 / 3.0)
    } else {
        m
    };
    let (mut lo, mut hi) = (0.0, 2.0 * PI);
    let tol = UV_TOLERANCE * m.max(1.0);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let g = e - e.sin() - m;
        residual = g.abs();
        if residual <= tol {
            return Ok(e);
        }
        if g < 0.0 {
            lo = e;
        } else {
            hi = e;
        }
        let gp = 1.0 - e.cos();
        let newton = e - g / gp;
        e = if gp > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(PropagatorError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// Solve `sinh F − F = m` for `F > 0`.
fn solve_kepler_hyperbolic(m: f64) -> Result<f64, PropagatorError> {
    let mut f = if m < 1.0 {
        (6.0 * m).powf(1.0 / 3.0)
    } else {
        m.asinh() + 1.0
    };
    let mut lo = 0.0;
    let mut hi = f.max(1.0);
    let mut expansions = 0;
    while hi.sinh() - hi < m {
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(PropagatorError::NoConvergence {
                iterations: expansions,
                residual: m,
            });
        }
    }
    let tol = UV_TOLERANCE * m.max(1.0);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let g = f.sinh() - f - m;
        residual = g.abs();
        if residual <= tol {
            return Ok(f);
        }
        if g < 0.0 {
            lo = f;
        } else {
            hi = f;
        }
        let gp = f.cosh() - 1.0;
        let newton = f - g / gp;
        f = if gp > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(PropagatorError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(px: f64, py: f64, vx: f64, vy: f64) -> KeplerState {
        KeplerState::new(Vec2::new(px, py), Vec2::new(vx, vy))
    }

    #[test]
    fn circular_quarter_turn() {
        let s = state(1.0, 0.0, 0.0, 1.0);
        let out = propagate(&s, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(
            (out.pos - Vec2::new(0.0, 1.0)).norm() < 1e-12,
            "{:?}",
            out.pos
        );
        assert!(
            (out.vel - Vec2::new(-1.0, 0.0)).norm() < 1e-12,
            "{:?}",
            out.vel
        );
    }

    #[test]
    fn zero_time_is_identity() {
        let s = state(1.3, -0.4, 0.2, 0.9);
        let out = propagate(&s, 0.0).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn conic_coefficients_reference() {
        // ((2,0),(0,1)): C = 2, r = αx + βy + γ with α = −1, β = 0, γ = 4.
        let s = state(2.0, 0.0, 0.0, 1.0);
        let (alpha, beta, gamma) = eccentricity_vector(&s).unwrap();
        assert!((alpha + 1.0).abs() < 1e-14);
        assert!(beta.abs() < 1e-14);
        assert!((gamma - 4.0).abs() < 1e-14);
        // Membership at the state itself.
        assert!((alpha * 2.0 + beta * 0.0 + gamma - 2.0).abs() < 1e-13);
        // This state is parabolic.
        assert!(energy(&s).abs() < 1e-15);
    }

    #[test]
    fn parabolic_arc_stays_on_its_conic() {
        let s = state(1.0, 0.0, 0.0, std::f64::consts::SQRT_2);
        let (alpha, beta, gamma) = eccentricity_vector(&s).unwrap();
        let out = propagate(&s, 10.0).unwrap();
        let r = out.pos.norm();
        let membership = alpha * out.pos.x + beta * out.pos.y + gamma - r;
        assert!(membership.abs() < 1e-10 * r.max(1.0), "{membership}");
        assert!(energy(&out).abs() < 1e-12);
    }

    #[test]
    fn first_integrals_survive_propagation() {
        // One state per conic type, pushed for a long while.
        let cases = [
            (state(1.0, 0.2, -0.3, 0.95), 1000.0), // elliptic
            (state(1.0, 0.0, 0.0, std::f64::consts::SQRT_2), 1000.0), // parabolic
            (state(0.8, -0.3, 1.1, 1.2), 1000.0),  // hyperbolic
        ];
        for (s, t) in cases {
            let h0 = energy(&s);
            let c0 = angular_momentum(&s);
            let (a0, b0, g0) = eccentricity_vector(&s).unwrap();
            let out = propagate(&s, t).unwrap();
            let h1 = energy(&out);
            let c1 = angular_momentum(&out);
            let (a1, b1, g1) = eccentricity_vector(&out).unwrap();
            let scale = h0.abs().max(1.0);
            assert!((h1 - h0).abs() < 1e-12 * scale, "H: {h0} -> {h1}");
            assert!((c1 - c0).abs() < 1e-12 * c0.abs(), "C: {c0} -> {c1}");
            assert!((a1 - a0).abs() < 1e-11, "alpha: {a0} -> {a1}");
            assert!((b1 - b0).abs() < 1e-11, "beta: {b0} -> {b1}");
            assert!((g1 - g0).abs() < 1e-11 * g0, "gamma: {g0} -> {g1}");
        }
    }

    #[test]
    fn flow_composes_as_a_semigroup() {
        let s = state(1.0, 0.2, -0.3, 0.95);
        let one = propagate(&s, 2.6).unwrap();
        let two = propagate(&propagate(&s, 0.7).unwrap(), 1.9).unwrap();
        assert!((one.pos - two.pos).norm() < 1e-10);
        assert!((one.vel - two.vel).norm() < 1e-10);
    }

    #[test]
    fn negative_time_reverses_the_flow() {
        let s = state(0.9, -0.1, 0.3, 1.1);
        let there = propagate(&s, 3.7).unwrap();
        let back = propagate(&there, -3.7).unwrap();
        assert!((back.pos - s.pos).norm() < 1e-10);
        assert!((back.vel - s.vel).norm() < 1e-10);
    }

    #[test]
    fn many_revolutions_stay_accurate() {
        let s = state(1.0, 0.0, 0.0, 1.0); // unit circle, period 2π
        let out = propagate(&s, 14.0 * PI + 0.3).unwrap();
        let reference = propagate(&s, 0.3).unwrap();
        assert!((out.pos - reference.pos).norm() < 1e-9);
        assert!((out.vel - reference.vel).norm() < 1e-9);
    }

    #[test]
    fn radial_fall_advances_and_collides() {
        // Rest at x = 3: energy −1/3, collision after half the period
        // of the degenerate orbit, π·1.5^{3/2} ≈ 5.7706.
        let s = state(3.0, 0.0, 0.0, 0.0);
        let t_coll = PI * 1.5_f64.powf(1.5);
        let mid = propagate(&s, 0.9 * t_coll).unwrap();
        assert!(mid.pos.y == 0.0 && mid.vel.y == 0.0, "stays on the ray");
        assert!(mid.pos.x > 0.0 && mid.pos.x < 3.0);
        assert!(mid.vel.x < 0.0, "falling");
        assert!((energy(&mid) + 1.0 / 3.0).abs() < 1e-12);
        match propagate(&s, 1.01 * t_coll) {
            Err(PropagatorError::CollisionWithinInterval { time }) => {
                assert!((time - t_coll).abs() < 1e-10 * t_coll, "{time}");
            }
            other => panic!("expected collision, got {other:?}"),
        }
        // Bound radial motion also collides backward in time.
        assert!(matches!(
            propagate(&s, -1.01 * t_coll),
            Err(PropagatorError::CollisionWithinInterval { .. })
        ));
    }

    #[test]
    fn radial_parabolic_collision_time() {
        // Inbound parabolic from x = 1: v = −√2, collision at √2/3.
        let s = state(1.0, 0.0, -std::f64::consts::SQRT_2, 0.0);
        let t_coll = std::f64::consts::SQRT_2 / 3.0;
        let before = propagate(&s, 0.6 * t_coll).unwrap();
        assert!(before.pos.x > 0.0 && before.vel.x < 0.0);
        assert!(energy(&before).abs() < 1e-12);
        match propagate(&s, 1.2 * t_coll) {
            Err(PropagatorError::CollisionWithinInterval { time }) => {
                assert!((time - t_coll).abs() < 1e-13, "{time}");
            }
            other => panic!("expected collision, got {other:?}"),
        }
    }

    #[test]
    fn radial_hyperbolic_passes_outbound_forever() {
        let s = state(2.0, 0.0, 2.0, 0.0); // H = 1.5, outbound
        let far = propagate(&s, 100.0).unwrap();
        assert!(far.pos.x > 100.0, "{}", far.pos.x);
        assert!((energy(&far) - 1.5).abs() < 1e-11);
        // Inbound mirror collides.
        let inbound = state(2.0, 0.0, -2.0, 0.0);
        assert!(matches!(
            propagate(&inbound, 1.0),
            Err(PropagatorError::CollisionWithinInterval { .. })
        ));
    }

    #[test]
    fn conic_extraction_rejects_rectilinear_states() {
        let s = state(1.0, 0.0, 0.5, 0.0);
        assert!(matches!(
            eccentricity_vector(&s),
            Err(PropagatorError::RectilinearState)
        ));
    }

    #[test]
    fn invalid_states_are_rejected() {
        let s = state(f64::NAN, 0.0, 0.0, 1.0);
        assert!(matches!(
            propagate(&s, 1.0),
            Err(PropagatorError::NonFinite)
        ));
        let origin = state(0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            propagate(&origin, 1.0),
            Err(PropagatorError::NonFinite)
        ));
    }
}
