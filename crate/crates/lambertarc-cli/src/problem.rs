//! Input-mode resolution and μ-rescaling.
//!
//! The solver works in normalized units (μ = 1). With lengths kept in
//! user units, a problem with gravitational parameter μ maps onto the
//! normalized one by compressing time: internal times are user times
//! times √μ, internal velocities are user velocities divided by √μ,
//! internal energies are user energies divided by μ. Every number the
//! CLI prints has been mapped back.

use lambertarc::geometry::reduce_to_rectilinear;
use lambertarc::{BoundaryProblem, RectilinearEquivalent, Vec2};

use crate::Failure;

/// Which of the three input modes the user chose, with its raw numbers
/// (user units). Carried alongside the resolved problem so reports can
/// echo the query back.
#[derive(Debug, Clone)]
pub enum ProblemSpec {
    Cartesian { ax: f64, ay: f64, bx: f64, by: f64 },
    Triangle { ra: f64, rb: f64, angle: AngleSpec },
    Rectilinear { xa: f64, xb: f64 },
}

#[derive(Debug, Clone, Copy)]
pub enum AngleSpec {
    Theta(f64),
    Chord(f64),
}

/// A resolved problem: planar geometry when endpoints are known, bare
/// rectilinear pair otherwise.
#[derive(Debug, Clone)]
pub enum Problem {
    Planar(BoundaryProblem),
    Rect(RectilinearEquivalent),
}

impl ProblemSpec {
    pub fn resolve(&self) -> Result<Problem, Failure> {
        match *self {
            ProblemSpec::Cartesian { ax, ay, bx, by } => {
                let p = BoundaryProblem::new(Vec2::new(ax, ay), Vec2::new(bx, by))
                    .map_err(Failure::from_lib)?;
                Ok(Problem::Planar(p))
            }
            ProblemSpec::Triangle { ra, rb, angle } => {
                let p = match angle {
                    AngleSpec::Theta(theta) => BoundaryProblem::from_triangle(ra, rb, theta),
                    AngleSpec::Chord(chord) => BoundaryProblem::from_chord(ra, rb, chord),
                }
                .map_err(Failure::from_lib)?;
                Ok(Problem::Planar(p))
            }
            ProblemSpec::Rectilinear { xa, xb } => {
                let re = RectilinearEquivalent::new(xa, xb).map_err(Failure::from_lib)?;
                Ok(Problem::Rect(re))
            }
        }
    }

    /// JSON echo of the query, user units.
    pub fn describe(&self, problem: &Problem) -> serde_json::Value {
        match (self, problem) {
            (ProblemSpec::Cartesian { ax, ay, bx, by }, Problem::Planar(p)) => {
                serde_json::json!({
                    "mode": "cartesian",
                    "a": [ax, ay],
                    "b": [bx, by],
                    "rA": p.r_a(),
                    "rB": p.r_b(),
                    "chord": p.chord(),
                    "theta": p.transfer_angle(),
                })
            }
            (ProblemSpec::Triangle { .. }, Problem::Planar(p)) => serde_json::json!({
                "mode": "triangle",
                "rA": p.r_a(),
                "rB": p.r_b(),
                "chord": p.chord(),
                "theta": p.transfer_angle(),
            }),
            (ProblemSpec::Rectilinear { xa, xb }, _) => serde_json::json!({
                "mode": "rectilinear",
                "xA": xa,
                "xB": xb,
            }),
            _ => unreachable!("spec and problem always resolve together"),
        }
    }
}

impl Problem {
    pub fn reduce(&self) -> RectilinearEquivalent {
        match self {
            Problem::Planar(p) => reduce_to_rectilinear(p),
            Problem::Rect(re) => *re,
        }
    }
}

/// Pick the input mode from the raw flag values; exactly one of the
/// three groups must be present and complete. Shared by the command
/// line and the batch-file parser, which accept the same fields.
#[allow(clippy::too_many_arguments)]
pub fn resolve_mode(
    ax: Option<f64>,
    ay: Option<f64>,
    bx: Option<f64>,
    by: Option<f64>,
    ra: Option<f64>,
    rb: Option<f64>,
    theta: Option<f64>,
    chord: Option<f64>,
    rectilinear: bool,
    xa: Option<f64>,
    xb: Option<f64>,
) -> Result<ProblemSpec, Failure> {
    let cart = [ax, ay, bx, by];
    let cart_given = cart.iter().any(Option::is_some);
    let tri_given = ra.is_some() || rb.is_some() || theta.is_some() || chord.is_some();
    let rect_given = rectilinear || xa.is_some() || xb.is_some();
    match (cart_given, tri_given, rect_given) {
        (true, false, false) => {
            let [Some(ax), Some(ay), Some(bx), Some(by)] = cart else {
                return Err(Failure::Usage(
                    "cartesian mode needs all of --ax --ay --bx --by".into(),
                ));
            };
            Ok(ProblemSpec::Cartesian { ax, ay, bx, by })
        }
        (false, true, false) => {
            let (Some(ra), Some(rb)) = (ra, rb) else {
                return Err(Failure::Usage(
                    "triangle mode needs both --ra and --rb".into(),
                ));
            };
            let angle = match (theta, chord) {
                (Some(t), None) => AngleSpec::Theta(t),
                (None, Some(c)) => AngleSpec::Chord(c),
                (Some(_), Some(_)) => {
                    return Err(Failure::Usage(
                        "pass exactly one of --theta or --chord".into(),
                    ))
                }
                (None, None) => {
                    return Err(Failure::Usage(
                        "triangle mode needs --theta or --chord".into(),
                    ))
                }
            };
            Ok(ProblemSpec::Triangle { ra, rb, angle })
        }
        (false, false, true) => {
            if !rectilinear {
                return Err(Failure::Usage(
                    "--xa/--xb need --rectilinear (endpoint coordinates are --ax/--ay)".into(),
                ));
            }
            let (Some(xa), Some(xb)) = (xa, xb) else {
                return Err(Failure::Usage(
                    "rectilinear mode needs both --xa and --xb".into(),
                ));
            };
            Ok(ProblemSpec::Rectilinear { xa, xb })
        }
        (false, false, false) => Err(Failure::Usage(
            "no geometry given; use --ax/--ay/--bx/--by, --ra/--rb with \
             --theta or --chord, or --rectilinear with --xa/--xb"
                .into(),
        )),
        _ => Err(Failure::Usage(
            "geometry flags from different input modes cannot be mixed".into(),
        )),
    }
}

/// Unit conversions for a gravitational parameter μ (user units in,
/// user units out; the library never sees μ).
#[derive(Debug, Clone, Copy)]
pub struct Scaling {
    sqrt_mu: f64,
    mu: f64,
}

impl Scaling {
    pub fn new(mu: f64) -> Result<Self, Failure> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Failure::Usage(format!(
                "--mu must be a positive finite number, got {mu}"
            )));
        }
        Ok(Scaling {
            sqrt_mu: mu.sqrt(),
            mu,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn time_in(&self, t_user: f64) -> f64 {
        t_user * self.sqrt_mu
    }
    pub fn time_out(&self, t: f64) -> f64 {
        t / self.sqrt_mu
    }
    pub fn velocity_in(&self, v_user: f64) -> f64 {
        v_user / self.sqrt_mu
    }
    pub fn velocity_out(&self, v: f64) -> f64 {
        v * self.sqrt_mu
    }
    pub fn energy_out(&self, h: f64) -> f64 {
        h * self.mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(
        cart: Option<(f64, f64, f64, f64)>,
        tri: (Option<f64>, Option<f64>, Option<f64>, Option<f64>),
        rect: (bool, Option<f64>, Option<f64>),
    ) -> Result<ProblemSpec, Failure> {
        let (ax, ay, bx, by) = match cart {
            Some((ax, ay, bx, by)) => (Some(ax), Some(ay), Some(bx), Some(by)),
            None => (None, None, None, None),
        };
        resolve_mode(
            ax, ay, bx, by, tri.0, tri.1, tri.2, tri.3, rect.0, rect.1, rect.2,
        )
    }

    #[test]
    fn each_complete_mode_resolves() {
        assert!(matches!(
            mode(
                Some((2.0, 0.0, 0.0, 1.0)),
                (None, None, None, None),
                (false, None, None)
            ),
            Ok(ProblemSpec::Cartesian { .. })
        ));
        assert!(matches!(
            mode(
                None,
                (Some(2.0), Some(1.0), Some(1.0), None),
                (false, None, None)
            ),
            Ok(ProblemSpec::Triangle { .. })
        ));
        assert!(matches!(
            mode(None, (None, None, None, None), (true, Some(2.0), Some(1.0))),
            Ok(ProblemSpec::Rectilinear { .. })
        ));
    }

    #[test]
    fn incomplete_or_mixed_modes_are_usage_errors() {
        // Missing --rb.
        assert!(mode(
            None,
            (Some(2.0), None, Some(1.0), None),
            (false, None, None)
        )
        .is_err());
        // Both --theta and --chord.
        assert!(mode(
            None,
            (Some(2.0), Some(1.0), Some(1.0), Some(2.5)),
            (false, None, None)
        )
        .is_err());
        // Triangle flags mixed with rectilinear ones.
        assert!(mode(
            None,
            (Some(2.0), Some(1.0), Some(1.0), None),
            (true, Some(2.0), Some(1.0))
        )
        .is_err());
        // --xa without --rectilinear.
        assert!(mode(
            None,
            (None, None, None, None),
            (false, Some(2.0), Some(1.0))
        )
        .is_err());
        // Nothing at all.
        assert!(mode(None, (None, None, None, None), (false, None, None)).is_err());
    }

    #[test]
    fn scaling_round_trips_between_unit_systems() {
        let sc = Scaling::new(4.0).unwrap();
        // μ = 4 halves times and doubles velocities relative to μ = 1.
        assert_eq!(sc.time_in(3.0), 6.0);
        assert_eq!(sc.time_out(6.0), 3.0);
        assert_eq!(sc.velocity_out(1.0), 2.0);
        assert_eq!(sc.velocity_in(2.0), 1.0);
        assert_eq!(sc.energy_out(-0.5), -2.0);
        assert!(Scaling::new(0.0).is_err());
        assert!(Scaling::new(f64::NAN).is_err());
    }
}
