//! From an abstract root back to geometry: the conic branch through the
//! endpoints, the departure velocity, arc classification, and the
//! extraction of the universal parameter β̂ from a reconstructed state.
//!
//! Everything here works in the problem's chord frame — the rotation
//! after which the chord is horizontal with the endpoints at a common
//! height above the center. In that frame the conic through both
//! endpoints is an affine family `r = αx + βy + γ`: α is fixed by the
//! triangle alone, and picking β (equivalently the solution's β̂)
//! determines γ and with it the full branch. The departure velocity
//! follows algebraically from the conic coefficients and the angular
//! momentum `C = ±√γ`, the sign chosen so the requested arc class
//! sweeps its side of the chord; a single propagation probe then
//! confirms the state actually arrives at `B`, so a wrong sign or an
//! inconsistent solution can never leave this module silently.

use crate::geometry::{self, BoundaryProblem, ChordFrame, GeometryError};
use crate::maps::{self, MapsError};
use crate::propagator::{self, KeplerState, PropagatorError};
use crate::solver::{ArcClass, LambertSolution, Tail};
use crate::vec2::Vec2;

use std::f64::consts::{PI, TAU};

/// Arrival-miss budget for the propagation probe, as a fraction of
/// `rA`. Root residuals and quadrature tolerances sit several orders
/// below this, so a miss here means an inconsistency, not roundoff.
const PROBE_MISS_FRACTION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReconstructError {
    #[error("problem carries no time of flight; reconstruction needs one to verify arrival")]
    MissingTof,
    #[error(
        "endpoints lie on one ray from the center (|α| → 1): the conic \
         family degenerates to rectilinear motion with no planar arc"
    )]
    RectilinearDegenerate,
    #[error(
        "no conic branch passes through both endpoints with this shape \
         parameter (semi-latus rectum γ = {gamma} ≤ 0)"
    )]
    NonpositiveLatus { gamma: f64 },
    #[error(
        "reconstructed state misses B by {miss_distance} after the full \
         time of flight — solution and problem are inconsistent"
    )]
    InconsistentSolution { miss_distance: f64 },
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Maps(#[from] MapsError),
}

impl ReconstructError {
    /// True when the failure is the caller's query rather than a
    /// numerical breakdown or internal inconsistency.
    pub fn is_domain_error(&self) -> bool {
        match self {
            ReconstructError::MissingTof => true,
            ReconstructError::RectilinearDegenerate => true,
            ReconstructError::NonpositiveLatus { .. } => true,
            ReconstructError::InconsistentSolution { .. } => false,
            ReconstructError::Propagator(e) => !matches!(e, PropagatorError::NoConvergence { .. }),
            ReconstructError::Geometry(_) => true,
            ReconstructError::Maps(_) => true,
        }
    }
}

/// Traversal orientation of an arc in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ccw,
    Cw,
}

/// One branch of a conic with the center at a focus, written
/// `r = αx + βy + γ`: `(α, β)` is the negated eccentricity vector and
/// `γ = C²` the semi-latus rectum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicBranch {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ConicBranch {
    /// Right-hand side of the conic equation at `pos`; equals `|pos|`
    /// exactly when `pos` lies on the branch.
    pub fn radius_at(&self, pos: Vec2) -> f64 {
        self.alpha * pos.x + self.beta * pos.y + self.gamma
    }

    /// Relative passage defect at `pos` (zero on the branch).
    pub fn passage_residual(&self, pos: Vec2) -> f64 {
        (self.radius_at(pos) - pos.norm()) / pos.norm()
    }

    /// Specific orbital energy of any motion along this branch.
    pub fn energy(&self) -> f64 {
        (self.alpha * self.alpha + self.beta * self.beta - 1.0) / (2.0 * self.gamma)
    }

    pub fn eccentricity(&self) -> f64 {
        (self.alpha * self.alpha + self.beta * self.beta).sqrt()
    }

    /// The conic of a planar state, in the same coordinates the state
    /// is expressed in.
    pub fn from_state(s: &KeplerState) -> Result<Self, ReconstructError> {
        let (alpha, beta, gamma) = propagator::eccentricity_vector(s)?;
        Ok(ConicBranch { alpha, beta, gamma })
    }
}

/// The conic branch through both endpoints with chord-frame
/// eccentricity component `beta` across the chord.
///
/// The two passage conditions are affine in `(α, β, γ)`: their
/// difference fixes `α` from the triangle, their sum then yields
/// `γ = ((1 − α²)(rA + rB) − 2β·h)/2` with `h` the endpoints' common
/// height. Values of `beta` outside the admissible interval drive
/// `γ ≤ 0` and are rejected.
pub fn conic_through(p: &BoundaryProblem, beta: f64) -> Result<ConicBranch, ReconstructError> {
    let frame = geometry::chord_frame(p);
    conic_in_frame(&frame, beta)
}

fn conic_in_frame(frame: &ChordFrame, beta: f64) -> Result<ConicBranch, ReconstructError> {
    let alpha = geometry::alpha(frame);
    let sum_r = frame.a().norm() + frame.b().norm();
    let gamma = 0.5 * ((1.0 - alpha * alpha) * sum_r - 2.0 * beta * frame.h());
    if !(gamma > 0.0) {
        return Err(ReconstructError::NonpositiveLatus { gamma });
    }
    Ok(ConicBranch { alpha, beta, gamma })
}

/// Classify an arc on `conic` from `framed_a` to `framed_b` (chord-frame
/// coordinates) traversed with the given orientation: direct iff the
/// swept polar angle is below π.
///
/// Only the simple classes are distinguishable from endpoint geometry —
/// full revolutions retrace the sweep — so multi-revolution callers
/// combine this tail with their own `n`.
pub fn classify_arc(
    conic: &ConicBranch,
    framed_a: Vec2,
    framed_b: Vec2,
    orientation: Sense,
) -> ArcClass {
    debug_assert!(
        conic.passage_residual(framed_a).abs() < 1e-9
            && conic.passage_residual(framed_b).abs() < 1e-9,
        "classify_arc expects both endpoints on the conic"
    );
    let ccw_sweep = (framed_b.y.atan2(framed_b.x) - framed_a.y.atan2(framed_a.x)).rem_euclid(TAU);
    let sweep = match orientation {
        Sense::Ccw => ccw_sweep,
        Sense::Cw => TAU - ccw_sweep,
    };
    if sweep < PI {
        ArcClass::DirectSimple
    } else {
        ArcClass::IndirectSimple
    }
}

/// Departure state for a solution, with the mirrored conic when
/// `mirrored` (reflection across the chord line: β and the traversal
/// sense both flip).
fn departure_state(
    p: &BoundaryProblem,
    sol: &LambertSolution,
    mirrored: bool,
) -> Result<KeplerState, ReconstructError> {
    let frame = geometry::chord_frame(p);
    let alpha = geometry::alpha(&frame);
    if alpha.abs() >= 1.0 {
        return Err(ReconstructError::RectilinearDegenerate);
    }
    let beta_sign = if mirrored { -1.0 } else { 1.0 };
    let beta = beta_sign * sol.beta_hat * (1.0 - alpha * alpha).sqrt();
    let conic = conic_in_frame(&frame, beta)?;

    // In this frame the center sits below the chord, so the
    // counterclockwise sweep from A to B is the short (< π) one exactly
    // when A lies to the right of B.
    let ccw_is_short = frame.a().x > frame.b().x;
    let ccw = match sol.arc_class.tail() {
        Tail::Direct => ccw_is_short,
        Tail::Indirect => !ccw_is_short,
    } != mirrored;
    let c = if ccw {
        conic.gamma.sqrt()
    } else {
        -conic.gamma.sqrt()
    };

    // Invert the eccentricity-vector relations for the velocity:
    // α = x/r − C·vy and β = C·vx + y/r give v in closed form, and the
    // resulting speed satisfies vis-viva identically.
    let a = frame.a();
    let r = a.norm();
    let v_frame = Vec2::new(
        c * (r * conic.beta - a.y) / (r * conic.gamma),
        c * (a.x - r * conic.alpha) / (r * conic.gamma),
    );
    Ok(KeplerState::new(
        p.pos_a(),
        frame.rotation().inverse().apply(v_frame),
    ))
}

fn probe(p: &BoundaryProblem, state: &KeplerState, t: f64) -> Result<(), ReconstructError> {
    let arrived = propagator::propagate(state, t)?;
    let miss = (arrived.pos - p.pos_b()).norm();
    if miss > PROBE_MISS_FRACTION * p.r_a() {
        return Err(ReconstructError::InconsistentSolution {
            miss_distance: miss,
        });
    }
    Ok(())
}

/// The departure state at `A` realizing a solution, verified by
/// propagating it for the problem's time of flight and checking arrival
/// at `B` within `1e-8·rA`.
///
/// The problem must carry its time of flight
/// ([`BoundaryProblem::with_tof`]); a missing probe budget is refused
/// rather than skipping verification.
pub fn initial_state(
    p: &BoundaryProblem,
    sol: &LambertSolution,
) -> Result<KeplerState, ReconstructError> {
    let t = p.tof().ok_or(ReconstructError::MissingTof)?;
    let state = departure_state(p, sol, false)?;
    probe(p, &state, t)?;
    Ok(state)
}

/// The mirror-image departure state for solutions that represent two
/// planar arcs (center on the segment, `multiplicity = 2`): the conic
/// reflected across the chord, traversed with the opposite sense.
/// `None` for ordinary solutions, which are unique.
pub fn mirror_initial_state(
    p: &BoundaryProblem,
    sol: &LambertSolution,
) -> Result<Option<KeplerState>, ReconstructError> {
    if sol.multiplicity < 2 {
        return Ok(None);
    }
    let t = p.tof().ok_or(ReconstructError::MissingTof)?;
    let state = departure_state(p, sol, true)?;
    probe(p, &state, t)?;
    Ok(Some(state))
}

/// Extract the universal parameter β̂ from a solution by rebuilding its
/// state and reading the eccentricity vector back in the chord frame.
///
/// This is the round trip that makes solutions frame-portable: β̂
/// computed here agrees with the solution's `eta` (the symmetric
/// image's signed eccentricity) and is shared by every triangle with
/// the same chord and radius sum.
pub fn beta_hat_of_solution(
    p: &BoundaryProblem,
    sol: &LambertSolution,
) -> Result<f64, ReconstructError> {
    let state = initial_state(p, sol)?;
    let (alpha_w, beta_w, _) = propagator::eccentricity_vector(&state)?;
    let frame = geometry::chord_frame(p);
    let ecc_frame = frame.rotation().apply(Vec2::new(alpha_w, beta_w));
    match maps::beta_hat(ecc_frame.x, ecc_frame.y) {
        Ok(bh) => Ok(bh),
        Err(MapsError::AlphaOutOfRange { .. }) => Err(ReconstructError::RectilinearDegenerate),
        Err(e) => Err(ReconstructError::Maps(e)),
    }
}
