//! Two-body boundary-value solver: find every Keplerian arc that carries a
//! body from point `A` to point `B` around a fixed center `O` in a given
//! time, with the *number* of solutions known before any root is computed.
//!
//! Units are normalized so the gravitational parameter is 1: the dynamics
//! are `r̈ = −r/|r|³`. Callers with a physical `μ` rescale times by `√μ`
//! on the way in and velocities by `√μ` / energies by `μ` on the way out.
//!
//! The library is organized around two classical reductions of the
//! boundary geometry:
//!
//! * [`geometry`] turns the planar data `(O, A, B)` into the rectilinear
//!   pair `(xA, xB)` — half-perimeter splits of the triangle `O A B` — and
//!   into the symmetric configuration `(r, θA)`. Time of flight depends on
//!   the endpoints only through these reductions.
//! * [`rectilinear`] evaluates time of flight along degenerate straight-line
//!   arcs by adaptive quadrature; these times equal the planar ones class
//!   by class, which is what the solver actually inverts.
//! * [`symmetric`] evaluates the same times on the symmetric configuration
//!   by an independent integral, used to cross-check the rectilinear route.
//! * [`maps`] converts between the rectilinear velocity parameter `vA`, the
//!   conic parameter `η`, and energy; these maps are the bridge between the
//!   1-D root finds and the planar arcs.
//! * [`solver`] brackets and polishes the roots, counts solutions per
//!   revolution class (certified by monotonicity/convexity where the theory
//!   provides it), and reports a census.
//! * [`reconstruct`] rebuilds the planar conic and the departure velocity
//!   for each root, with a propagation probe as a final consistency check.
//! * [`propagator`] is a universal-variable Kepler propagator used as an
//!   independent oracle: every reconstructed solution is verified by
//!   propagating it and checking arrival.
//!
//! The solver never returns an unverified "solution": anything that fails
//! its class's residual bound or the propagation probe surfaces as an
//! error instead.

// Guards are written `!(x > 0.0)` rather than `x <= 0.0` on purpose: the
// negated form sends NaN into the rejecting branch, the "fixed" form lets
// it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geometry;
pub mod maps;
pub mod propagator;
pub mod reconstruct;
pub mod rectilinear;
pub mod solver;
pub mod symmetric;
pub mod vec2;

pub(crate) mod quad;

pub use geometry::{BoundaryProblem, ChordFrame, RectilinearEquivalent, SymmetricEquivalent};
pub use propagator::KeplerState;
pub use reconstruct::ConicBranch;
pub use solver::{ArcClass, Census, CensusRow, LambertSolution, Tail};
pub use vec2::Vec2;

/// Umbrella error for callers that do not care which stage failed.
///
/// Each module keeps its own error type (those are the ones embedded in
/// results throughout the crate); this enum exists so binaries can bubble
/// everything up with `?` and still classify failures afterwards.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Rectilinear(#[from] rectilinear::RectilinearError),
    #[error(transparent)]
    Symmetric(#[from] symmetric::SymmetricError),
    #[error(transparent)]
    Maps(#[from] maps::MapsError),
    #[error(transparent)]
    Propagator(#[from] propagator::PropagatorError),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error(transparent)]
    Reconstruct(#[from] reconstruct::ReconstructError),
}

impl Error {
    /// True when the failure is a malformed or out-of-domain query (as
    /// opposed to a numerical breakdown inside a valid query).
    pub fn is_domain_error(&self) -> bool {
        match self {
            Error::Geometry(_) => true,
            Error::Rectilinear(e) => !matches!(e, rectilinear::RectilinearError::Quadrature(_)),
            Error::Symmetric(e) => !matches!(
                e,
                symmetric::SymmetricError::Rectilinear(rectilinear::RectilinearError::Quadrature(
                    _
                )) | symmetric::SymmetricError::Quadrature(_)
            ),
            Error::Maps(_) => true,
            Error::Propagator(e) => !matches!(e, propagator::PropagatorError::NoConvergence { .. }),
            Error::Solver(e) => e.is_domain_error(),
            Error::Reconstruct(e) => e.is_domain_error(),
        }
    }
}
