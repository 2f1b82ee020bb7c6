//! Boundary geometry and its two classical reductions.
//!
//! A boundary problem is a center of attraction `O` (the origin), two
//! endpoints `A` and `B`, and an elapsed time. The triangle `O A B` enters
//! the dynamics only through its side lengths `rA = |OA|`, `rB = |OB|` and
//! the chord `c = |AB|`, and those in turn only through two combinations:
//!
//! * the **rectilinear equivalent** `xA = (rA + rB + c)/2`,
//!   `xB = (rA + rB − c)/2` — radii of a degenerate straight-line problem
//!   with the same times of flight, class by class;
//! * the **symmetric equivalent** `r = (xA + xB)/2` and half-opening `θA`
//!   with `tan(θA/2) = √(xB/xA)` — an isosceles configuration, again with
//!   the same times.
//!
//! This module owns those reductions plus the chord-aligned frame used when
//! arcs are rebuilt in the plane: a proper rotation after which `A` and `B`
//! share a y-coordinate `h ≥ 0`, with ties (collinear `O`) broken by
//! putting the larger radius on the positive x-axis.

use crate::vec2::{Rotation2, Vec2};

/// Below this fraction of `xA`, the inner radius is snapped to exactly
/// zero: the focus lies on the open chord `]B, A[` and the problem is
/// degenerate by construction, not by accident. Genuine near-degenerate
/// geometries (transfer angle within ~1e-7 of π) stay well above it.
const DEGENERATE_XB_TOL: f64 = 1e-18;

/// Endpoints closer than this fraction of the radius scale are treated as
/// coincident and rejected; no arc class has a well-defined limit there.
const COINCIDENT_TOL: f64 = 1e-14;

/// |sin θ| below this (with positive cos θ) means the endpoints sit on one
/// ray from the focus: the problem is natively one-dimensional and must be
/// posed in rectilinear form instead.
const SAME_RAY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("coordinates and times must be finite")]
    NonFinite,
    #[error("endpoint radius must be positive (got {0})")]
    ZeroRadius(f64),
    #[error("endpoints coincide; no arc is defined")]
    CoincidentEndpoints,
    #[error(
        "endpoints lie on one ray from the focus; pose the problem in \
         rectilinear form (xA, xB) instead"
    )]
    SameRayEndpoints,
    #[error("transfer angle must lie in (0, 2π), got {0}")]
    TransferAngleRange(f64),
    #[error(
        "chord {chord} is incompatible with radii {ra}, {rb} \
         (needs |rA − rB| < c ≤ rA + rB)"
    )]
    ChordTriangle { ra: f64, rb: f64, chord: f64 },
    #[error("time of flight must be positive, got {0}")]
    NonPositiveTof(f64),
    #[error(
        "focus lies on the chord (xB = 0); the symmetric reduction is \
         undefined for this geometry"
    )]
    DegenerateCollinear,
}

/// A planar two-point boundary problem around the origin.
///
/// The transfer angle is measured counter-clockwise from `A` to `B` and
/// lies in `(0, 2π)`; it is exactly `π` precisely when the focus sits on
/// the open segment `]B, A[` (the degenerate geometry, which is valid).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProblem {
    pos_a: Vec2,
    pos_b: Vec2,
    r_a: f64,
    r_b: f64,
    chord: f64,
    transfer_angle: f64,
    tof: Option<f64>,
}

impl BoundaryProblem {
    /// Build from cartesian endpoints (the focus is the origin).
    pub fn new(pos_a: Vec2, pos_b: Vec2) -> Result<Self, GeometryError> {
        if !pos_a.is_finite() || !pos_b.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let r_a = pos_a.norm();
        let r_b = pos_b.norm();
        if r_a <= 0.0 {
            return Err(GeometryError::ZeroRadius(r_a));
        }
        if r_b <= 0.0 {
            return Err(GeometryError::ZeroRadius(r_b));
        }
        let chord = (pos_b - pos_a).norm();
        if chord <= COINCIDENT_TOL * r_a.max(r_b) {
            return Err(GeometryError::CoincidentEndpoints);
        }

        let cross = pos_a.cross(pos_b);
        let dot = pos_a.dot(pos_b);
        let sin_theta = cross / (r_a * r_b);
        if sin_theta.abs() <= SAME_RAY_TOL && dot > 0.0 {
            return Err(GeometryError::SameRayEndpoints);
        }
        let mut transfer_angle = cross.atan2(dot);
        if transfer_angle <= 0.0 {
            // atan2 returns (−π, π]; fold the clockwise half into (π, 2π)
            // and snap the collinear-opposed case to exactly π.
            transfer_angle += 2.0 * std::f64::consts::PI;
        }
        if sin_theta.abs() <= SAME_RAY_TOL && dot < 0.0 {
            transfer_angle = std::f64::consts::PI;
        }

        Ok(BoundaryProblem {
            pos_a,
            pos_b,
            r_a,
            r_b,
            chord,
            transfer_angle,
            tof: None,
        })
    }

    /// Build from triangle scalars: radii and the counter-clockwise
    /// transfer angle in `(0, 2π)`. `A` is placed on the positive x-axis.
    pub fn from_triangle(r_a: f64, r_b: f64, theta: f64) -> Result<Self, GeometryError> {
        if !r_a.is_finite() || !r_b.is_finite() || !theta.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if r_a <= 0.0 {
            return Err(GeometryError::ZeroRadius(r_a));
        }
        if r_b <= 0.0 {
            return Err(GeometryError::ZeroRadius(r_b));
        }
        if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
            return Err(GeometryError::TransferAngleRange(theta));
        }
        let pos_a = Vec2::new(r_a, 0.0);
        let pos_b = Vec2::new(r_b * theta.cos(), r_b * theta.sin());
        let mut p = Self::new(pos_a, pos_b)?;
        // Trust the requested angle over the one recovered from sin/cos
        // round-trip; they agree to a few ulps but the caller's value is
        // the exact intent (π in particular must stay π).
        p.transfer_angle = theta;
        if (theta - std::f64::consts::PI).abs() < 1e-15 {
            p.pos_b = Vec2::new(-r_b, 0.0);
            p.chord = r_a + r_b;
            p.transfer_angle = std::f64::consts::PI;
        }
        Ok(p)
    }

    /// Build from radii and chord length. The chord fixes the triangle only
    /// up to reflection, so the transfer angle is taken in `(0, π]`; the
    /// mirrored problem has the same times, counts, and mirrored arcs.
    pub fn from_chord(r_a: f64, r_b: f64, chord: f64) -> Result<Self, GeometryError> {
        if !r_a.is_finite() || !r_b.is_finite() || !chord.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if r_a <= 0.0 {
            return Err(GeometryError::ZeroRadius(r_a));
        }
        if r_b <= 0.0 {
            return Err(GeometryError::ZeroRadius(r_b));
        }
        if chord <= (r_a - r_b).abs() || chord > r_a + r_b {
            // Equality on the low end is the same-ray configuration, which
            // needs the rectilinear form; beyond either end no triangle
            // exists.
            return if chord == (r_a - r_b).abs() && chord > 0.0 {
                Err(GeometryError::SameRayEndpoints)
            } else {
                Err(GeometryError::ChordTriangle {
                    ra: r_a,
                    rb: r_b,
                    chord,
                })
            };
        }
        if chord == r_a + r_b {
            return Self::from_triangle(r_a, r_b, std::f64::consts::PI);
        }
        let cos_theta = (r_a * r_a + r_b * r_b - chord * chord) / (2.0 * r_a * r_b);
        Self::from_triangle(r_a, r_b, cos_theta.clamp(-1.0, 1.0).acos())
    }

    /// Attach the elapsed time (must be positive).
    pub fn with_tof(mut self, tof: f64) -> Result<Self, GeometryError> {
        if !tof.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if tof <= 0.0 {
            return Err(GeometryError::NonPositiveTof(tof));
        }
        self.tof = Some(tof);
        Ok(self)
    }

    pub fn pos_a(&self) -> Vec2 {
        self.pos_a
    }
    pub fn pos_b(&self) -> Vec2 {
        self.pos_b
    }
    pub fn r_a(&self) -> f64 {
        self.r_a
    }
    pub fn r_b(&self) -> f64 {
        self.r_b
    }
    pub fn chord(&self) -> f64 {
        self.chord
    }
    /// Counter-clockwise transfer angle from A to B, in (0, 2π).
    pub fn transfer_angle(&self) -> f64 {
        self.transfer_angle
    }
    pub fn tof(&self) -> Option<f64> {
        self.tof
    }
}

/// The rectilinear reduction `(xA, xB)` of a boundary problem.
///
/// Invariants: `xA > 0`, `0 ≤ xB < xA`. `xB == 0.0` (exactly) marks the
/// degenerate geometry with the focus on the open chord; it is a valid
/// state, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectilinearEquivalent {
    xa: f64,
    xb: f64,
}

impl RectilinearEquivalent {
    /// Build directly from rectilinear radii (the native input mode for
    /// collinear problems).
    pub fn new(xa: f64, xb: f64) -> Result<Self, GeometryError> {
        if !xa.is_finite() || !xb.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if xa <= 0.0 {
            return Err(GeometryError::ZeroRadius(xa));
        }
        if xb < 0.0 || xb >= xa {
            return Err(GeometryError::ChordTriangle {
                ra: xa,
                rb: xb,
                chord: xa - xb,
            });
        }
        Ok(RectilinearEquivalent { xa, xb })
    }

    pub fn xa(&self) -> f64 {
        self.xa
    }
    pub fn xb(&self) -> f64 {
        self.xb
    }
    /// Chord of the generating triangle: `c = xA − xB`.
    pub fn chord(&self) -> f64 {
        self.xa - self.xb
    }
    /// Sum of the endpoint radii: `rA + rB = xA + xB`.
    pub fn radii_sum(&self) -> f64 {
        self.xa + self.xb
    }
    /// Escape speed from the outer radius, `√(2/xA)`: the supremum of
    /// admissible departure speeds for bounded arcs and the natural
    /// velocity scale of the problem.
    pub fn escape_velocity(&self) -> f64 {
        (2.0 / self.xa).sqrt()
    }
    /// True when the focus lies on the open chord `]B, A[` (xB = 0); both
    /// simple arcs are then of the indirect class and come in mirror pairs.
    pub fn is_degenerate(&self) -> bool {
        self.xb == 0.0
    }
}

/// Reduce a boundary problem to its rectilinear equivalent.
///
/// `xA` comes straight from the half-perimeter; `xB` is evaluated as
/// `rA·rB·(1 + cos θ)/(2 xA)` with `1 + cos θ = |r̂A + r̂B|²/2`, which stays
/// accurate where the textbook difference `(rA + rB − c)/2` cancels
/// catastrophically (transfer angles near π).
pub fn reduce_to_rectilinear(p: &BoundaryProblem) -> RectilinearEquivalent {
    let xa = 0.5 * (p.r_a + p.r_b + p.chord);
    let unit_sum = p.pos_a / p.r_a + p.pos_b / p.r_b;
    let one_plus_cos = 0.5 * unit_sum.norm_squared();
    let mut xb = p.r_a * p.r_b * one_plus_cos / (2.0 * xa);
    if xb < DEGENERATE_XB_TOL * xa {
        xb = 0.0;
    }
    RectilinearEquivalent { xa, xb }
}

/// The symmetric reduction: an isosceles configuration `rA = rB = r` with
/// half-opening `θA ∈ (0, π/2)` and the same times of flight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricEquivalent {
    r: f64,
    theta_a: f64,
}

impl SymmetricEquivalent {
    pub fn new(r: f64, theta_a: f64) -> Result<Self, GeometryError> {
        if !r.is_finite() || !theta_a.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if r <= 0.0 {
            return Err(GeometryError::ZeroRadius(r));
        }
        if !(theta_a > 0.0 && theta_a < std::f64::consts::FRAC_PI_2) {
            // θA = π/2 would mean A = B (chord zero), excluded upstream.
            return Err(GeometryError::TransferAngleRange(theta_a));
        }
        Ok(SymmetricEquivalent { r, theta_a })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn theta_a(&self) -> f64 {
        self.theta_a
    }
    /// sin θA, the `p` of the time-of-flight integrands; identically
    /// `2√(xA·xB)/(xA + xB)` for the generating rectilinear pair.
    pub fn sin_theta_a(&self) -> f64 {
        self.theta_a.sin()
    }
}

/// Reduce a rectilinear pair to its symmetric equivalent.
///
/// Fails only for the degenerate pair (xB = 0), whose symmetric image
/// would collapse to θA = 0.
pub fn reduce_to_symmetric(
    re: &RectilinearEquivalent,
) -> Result<SymmetricEquivalent, GeometryError> {
    if re.is_degenerate() {
        return Err(GeometryError::DegenerateCollinear);
    }
    let r = 0.5 * (re.xa + re.xb);
    let theta_a = 2.0 * (re.xb / re.xa).sqrt().atan();
    Ok(SymmetricEquivalent { r, theta_a })
}

/// A boundary problem expressed in its chord-aligned frame: a proper
/// rotation after which the chord is horizontal, `A` and `B` share
/// `y = h ≥ 0`, and (when `O` is on the chord line) the larger radius
/// sits on the positive x-axis.
#[derive(Debug, Clone, Copy)]
pub struct ChordFrame {
    rotation: Rotation2,
    a: Vec2,
    b: Vec2,
}

impl ChordFrame {
    pub fn rotation(&self) -> Rotation2 {
        self.rotation
    }
    /// `A` in frame coordinates.
    pub fn a(&self) -> Vec2 {
        self.a
    }
    /// `B` in frame coordinates.
    pub fn b(&self) -> Vec2 {
        self.b
    }
    /// Common height of the endpoints above the chord line through O.
    pub fn h(&self) -> f64 {
        self.a.y
    }
}

/// Compute the chord-aligned frame of a problem.
pub fn chord_frame(p: &BoundaryProblem) -> ChordFrame {
    let u = (p.pos_a - p.pos_b) / p.chord;
    let mut rotation = Rotation2::aligning(u);
    let mut a = rotation.apply(p.pos_a);
    let mut b = rotation.apply(p.pos_b);

    if a.y < 0.0 {
        rotation = rotation.flipped();
        a = -a;
        b = -b;
    }

    let tie_tol = 1e-13 * (p.r_a + p.r_b);
    if a.y.abs() <= tie_tol {
        // O on the chord line. Construction rejects same-ray input, so the
        // endpoints straddle the origin; orient the larger radius (A on a
        // tie) to positive x and snap to exact collinear coordinates.
        let a_positive = if p.r_a >= p.r_b { a.x > 0.0 } else { b.x > 0.0 };
        if !a_positive {
            rotation = rotation.flipped();
            a = -a;
            b = -b;
        }
        a = Vec2::new(f64::copysign(p.r_a, a.x), 0.0);
        b = Vec2::new(f64::copysign(p.r_b, b.x), 0.0);
    } else {
        // The two heights agree to rounding; store their mean in both so
        // the frame invariant y_A = y_B holds exactly.
        let h = 0.5 * (a.y + b.y);
        a.y = h;
        b.y = h;
    }

    ChordFrame { rotation, a, b }
}

/// Eccentricity-vector component along the chord, `α = (x̂A + x̂B)/(rA + rB)`
/// in frame coordinates (equivalently `(rA − rB)/(x̂A − x̂B)`); always in
/// `(−1, 1)` for valid problems.
pub fn alpha(frame: &ChordFrame) -> f64 {
    let ra = frame.a.norm();
    let rb = frame.b.norm();
    (frame.a.x + frame.b.x) / (ra + rb)
}

/// The dimensionless variables of the Lancaster–Blanchard tradition:
/// `x = vA/vE` and `q = ±√(xB/xA)`, the sign being that of the arrival
/// velocity (negative for direct arcs, which arrive inbound; positive for
/// indirect ones).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbVariables {
    pub x: f64,
    pub q: f64,
}

/// Translate a departure velocity into Lancaster–Blanchard variables.
pub fn lb_variables(re: &RectilinearEquivalent, va: f64, arrival_inbound: bool) -> LbVariables {
    let x = va / re.escape_velocity();
    let q_mag = (re.xb / re.xa).sqrt();
    LbVariables {
        x,
        q: if arrival_inbound { -q_mag } else { q_mag },
    }
}
