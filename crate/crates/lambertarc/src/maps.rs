//! Parameter maps between the boundary-value pictures.
//!
//! Three coordinates describe the same family of transfer arcs:
//!
//! * `vA` — departure speed of the rectilinear equivalent (one copy per
//!   arc class);
//! * `η` — the conic shooting parameter of the symmetric equivalent, a
//!   single axis that meets both classes: direct arcs live on
//!   `η ∈ (−∞, 1]` with the parabola at `η = −1` and escape at `η = 1`,
//!   indirect arcs on `η ∈ (−1, m/g)` with the parabola at `η = +1` and
//!   the high-speed limit at `η = m/g`;
//! * `β̂` — the normalized conic coefficient recovered from a built
//!   trajectory, numerically equal to `η` and computable from nothing
//!   but the chord and the radius sum, which is what makes it invariant
//!   across boundary problems sharing those two lengths.
//!
//! With `s = √(xB/xA)`, `g = √(xA·xB)`, `m = (xA+xB)/2`, the forward
//! maps are `vA = ±(η − s)/√(m − ηg)` (+ direct, − indirect). They are
//! strictly monotone (increasing for direct, decreasing for indirect)
//! and invert in closed form; the inverses here use rationalized
//! arrangements that avoid cancellation and land the parabolic endpoints
//! `η(∓vE) = ∓1` exactly, with a one-step Newton polish as a safety net.

use crate::geometry::{RectilinearEquivalent, SymmetricEquivalent};

/// Round-trip residual (in vA, relative to max(1, |vA|)) above which the
/// closed-form inverse takes one Newton correction. The algebraic
/// inverse is exact; this only mops up floating-point noise in extreme
/// corners, so a loose threshold keeps the fast path branch-free.
const POLISH_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapsError {
    #[error("η = {eta} is outside this map's admissible range ({lo}, {hi})")]
    EtaOutOfDomain { eta: f64, lo: f64, hi: f64 },
    #[error(
        "vA = {va} is at or beyond escape velocity {v_escape}; \
         no bound arc exists there"
    )]
    EscapeVelocity { va: f64, v_escape: f64 },
    #[error("β̂ requires |α| < 1 (got α = {alpha}: center on the chord line)")]
    AlphaOutOfRange { alpha: f64 },
    #[error(
        "no conic with β̂ = {beta_hat} fits a chord of {chord} against a \
         radius sum of {sum_r}"
    )]
    BetaHatDomain {
        beta_hat: f64,
        sum_r: f64,
        chord: f64,
    },
}

/// Shared sub-expressions of the maps.
fn sgm(re: &RectilinearEquivalent) -> (f64, f64, f64) {
    let s = (re.xb() / re.xa()).sqrt();
    let g = (re.xa() * re.xb()).sqrt();
    let m = 0.5 * (re.xa() + re.xb());
    (s, g, m)
}

/// Supremum of the η domain, `m/g = (xA+xB)/(2√(xA·xB)) ≥ 1`; the
/// indirect map sends `η → m/g` to `vA → −∞`. Infinite for the
/// degenerate geometry `xB = 0`.
pub fn eta_sup(re: &RectilinearEquivalent) -> f64 {
    let (_, g, m) = sgm(re);
    if g == 0.0 {
        f64::INFINITY
    } else {
        m / g
    }
}

/// Direct-class map `η ↦ vA = (η − s)/√(m − ηg)` on `η ∈ (−∞, m/g)`.
///
/// Strictly increasing and convex; `η = −1` gives exactly `−vE` (the
/// inbound parabola) and `η = 1` exactly `+vE` (escape — admissible here,
/// rejected by the time-of-flight layer). Works unchanged for the
/// degenerate geometry, where it reduces to `vA = η·vE`.
pub fn va_from_eta_direct(re: &RectilinearEquivalent, eta: f64) -> Result<f64, MapsError> {
    let (s, g, m) = sgm(re);
    let disc = m - eta * g;
    if !(disc > 0.0) || !eta.is_finite() {
        return Err(MapsError::EtaOutOfDomain {
            eta,
            lo: f64::NEG_INFINITY,
            hi: eta_sup(re),
        });
    }
    Ok((eta - s) / disc.sqrt())
}

/// Indirect-class map `η ↦ vA = (s − η)/√(m − ηg)` on `η ∈ (−1, m/g)`:
/// the direct map's mirror image. Strictly decreasing and concave;
/// `η = 1` gives exactly `−vE` (the through-focus parabola), `η → −1`
/// approaches `+vE` (escape, outside the domain), and `η → m/g` the
/// high-speed limit `vA → −∞`.
pub fn va_from_eta_indirect(re: &RectilinearEquivalent, eta: f64) -> Result<f64, MapsError> {
    if !(eta > -1.0) {
        return Err(MapsError::EtaOutOfDomain {
            eta,
            lo: -1.0,
            hi: eta_sup(re),
        });
    }
    va_from_eta_direct(re, eta).map(|va| -va)
}

/// `dvA/dη` of the direct map (used by the Newton polish).
fn dva_deta_direct(re: &RectilinearEquivalent, eta: f64) -> f64 {
    let (s, g, m) = sgm(re);
    let disc = m - eta * g;
    (disc + 0.5 * g * (eta - s)) * disc.powf(-1.5)
}

/// Closed-form inverse of the direct map, without the physical-range
/// check (callers validate). Solving the quadratic behind
/// `vA√(m − ηg) = η − s` gives `η = g·(1/xA − vA²/2 + vA·|vB|/2)` with
/// `|vB| = √(vA² + d)`, `d = 2/xB − 2/xA`. Each sign of `vA` gets the
/// arrangement free of cancellation, so `η(±vE) = ±1` to the last bit.
fn eta_from_va_raw(re: &RectilinearEquivalent, va: f64) -> f64 {
    let (xa, xb) = (re.xa(), re.xb());
    if xb == 0.0 {
        // Degenerate geometry: the map is the pure scaling vA = η·vE.
        return va / re.escape_velocity();
    }
    let g = (xa * xb).sqrt();
    let d = 2.0 / xb - 2.0 / xa;
    let eta = if va >= 0.0 {
        g * (1.0 / xa + 0.5 * va * d / ((va * va + d).sqrt() + va))
    } else {
        let w = -va;
        g * (1.0 / xa - 0.5 * w * (w + (w * w + d).sqrt()))
    };
    polish_direct(re, eta, va)
}

/// Inverse of the direct map. Requires `vA < vE`: at and beyond escape
/// no direct arc exists, so the inverse is not offered there.
pub fn eta_from_va_direct(re: &RectilinearEquivalent, va: f64) -> Result<f64, MapsError> {
    let v_escape = re.escape_velocity();
    if !(va < v_escape) {
        return Err(MapsError::EscapeVelocity { va, v_escape });
    }
    Ok(eta_from_va_raw(re, va))
}

/// Inverse of the indirect map: the raw direct inverse evaluated at
/// `−vA`. Requires `vA < vE` (the indirect escape); arbitrarily negative
/// `vA` is fine and lands in `η ∈ [1, m/g)`, the hyperbolic tail.
pub fn eta_from_va_indirect(re: &RectilinearEquivalent, va: f64) -> Result<f64, MapsError> {
    let v_escape = re.escape_velocity();
    if !(va < v_escape) {
        return Err(MapsError::EscapeVelocity { va, v_escape });
    }
    Ok(eta_from_va_raw(re, -va))
}

fn polish_direct(re: &RectilinearEquivalent, eta: f64, va: f64) -> f64 {
    match va_from_eta_direct(re, eta) {
        Ok(back) => {
            if (back - va).abs() <= POLISH_THRESHOLD * va.abs().max(1.0) {
                eta
            } else {
                eta - (back - va) / dva_deta_direct(re, eta)
            }
        }
        Err(_) => eta,
    }
}

/// Specific orbital energy of a rectilinear arc: `H = vA²/2 − 1/xA`.
pub fn energy_rect(re: &RectilinearEquivalent, va: f64) -> f64 {
    0.5 * va * va - 1.0 / re.xa()
}

/// Specific orbital energy in symmetric coordinates:
/// `H = (η² − 1)/(2r(1 − η·sinθA))`.
///
/// Zero exactly at the parabolas `η = ±1`, negative between them,
/// and `−1/(2r)` for the circular arc `η = 0`.
pub fn energy_sym(se: &SymmetricEquivalent, eta: f64) -> Result<f64, MapsError> {
    let p = se.sin_theta_a();
    let denom = 1.0 - eta * p;
    if !(denom > 0.0) || !eta.is_finite() {
        return Err(MapsError::EtaOutOfDomain {
            eta,
            lo: f64::NEG_INFINITY,
            hi: 1.0 / p,
        });
    }
    Ok((eta * eta - 1.0) / (2.0 * se.r() * denom))
}

/// The universal parameter: `β̂ = β/√(1 − α²)`.
///
/// `α` is fixed by the triangle alone, `β` by the chosen arc; dividing
/// out the `α`-geometry makes `β̂` comparable across triangles, and it
/// equals the symmetric image's `η`.
pub fn beta_hat(alpha: f64, beta: f64) -> Result<f64, MapsError> {
    if !(alpha.abs() < 1.0) {
        return Err(MapsError::AlphaOutOfRange { alpha });
    }
    Ok(beta / (1.0 - alpha * alpha).sqrt())
}

/// Specific orbital energy from the universal parameter and the two
/// deformation invariants:
/// `H = (β̂² − 1)/(Σr − β̂·√(Σr² − c²))` with `Σr = rA + rB`, `c` the
/// chord. Because only `Σr` and `c` enter, every boundary problem
/// sharing those lengths assigns the same energy to the same `β̂`.
pub fn energy_from_beta_hat(beta_hat: f64, sum_r: f64, chord: f64) -> Result<f64, MapsError> {
    if !(chord > 0.0) || !(sum_r >= chord) || !beta_hat.is_finite() {
        return Err(MapsError::BetaHatDomain {
            beta_hat,
            sum_r,
            chord,
        });
    }
    let denom = sum_r - beta_hat * (sum_r * sum_r - chord * chord).sqrt();
    if !(denom > 0.0) {
        return Err(MapsError::BetaHatDomain {
            beta_hat,
            sum_r,
            chord,
        });
    }
    Ok((beta_hat * beta_hat - 1.0) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{reduce_to_symmetric, RectilinearEquivalent};

    fn re21() -> RectilinearEquivalent {
        RectilinearEquivalent::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn direct_map_reference_points() {
        let re = re21();
        // η = 0 → vA = −s/√m = −1/√3.
        let va = va_from_eta_direct(&re, 0.0).unwrap();
        assert!((va + 1.0 / 3.0_f64.sqrt()).abs() < 1e-15, "{va}");
        // η = ±1 → exactly ±vE (vE = 1 here).
        let ve = re.escape_velocity();
        assert!((va_from_eta_direct(&re, 1.0).unwrap() - ve).abs() < 1e-14);
        assert!((va_from_eta_direct(&re, -1.0).unwrap() + ve).abs() < 1e-14);
    }

    #[test]
    fn indirect_map_reference_points() {
        let re = re21();
        let ve = re.escape_velocity();
        assert!((va_from_eta_indirect(&re, 1.0).unwrap() + ve).abs() < 1e-14);
        // η = s puts the indirect departure at rest.
        let s = (0.5_f64).sqrt();
        assert!(va_from_eta_indirect(&re, s).unwrap().abs() < 1e-15);
        // η ≤ −1 is outside the indirect domain (the escape end).
        assert!(matches!(
            va_from_eta_indirect(&re, -1.0),
            Err(MapsError::EtaOutOfDomain { .. })
        ));
        // Just inside, the velocity approaches +vE from below.
        let va = va_from_eta_indirect(&re, -1.0 + 1e-9).unwrap();
        assert!(va < ve && va > ve * (1.0 - 1e-8), "{va}");
    }

    #[test]
    fn map_domain_ends_at_eta_sup() {
        let re = re21();
        let sup = eta_sup(&re);
        assert!((sup - 1.5 / 2.0_f64.sqrt()).abs() < 1e-15);
        assert!(va_from_eta_direct(&re, sup).is_err());
        assert!(va_from_eta_direct(&re, sup - 1e-9).is_ok());
        assert!(va_from_eta_direct(&re, f64::NAN).is_err());
        // The indirect map dives to −∞ at the supremum.
        assert!(va_from_eta_indirect(&re, sup - 1e-12).unwrap() < -1e5);
    }

    #[test]
    fn inverse_recovers_eta_across_the_domain() {
        let re = re21();
        for &eta in &[-3.0, -1.5, -1.0, -0.3, 0.0, 0.4, 0.9, 0.99] {
            let va = va_from_eta_direct(&re, eta).unwrap();
            let back = eta_from_va_direct(&re, va).unwrap();
            assert!((back - eta).abs() < 1e-12, "direct η={eta}: back={back}");
        }
        for &eta in &[-0.99, -0.3, 0.4, 1.0, 1.05] {
            let va_i = va_from_eta_indirect(&re, eta).unwrap();
            let back_i = eta_from_va_indirect(&re, va_i).unwrap();
            assert!(
                (back_i - eta).abs() < 1e-12,
                "indirect η={eta}: back={back_i}"
            );
        }
    }

    #[test]
    fn inverse_recovers_va_across_the_range() {
        let re = re21();
        for &va in &[-12.0, -1.0, -0.25, 0.0, 0.5, 0.999] {
            let eta = eta_from_va_direct(&re, va).unwrap();
            let back = va_from_eta_direct(&re, eta).unwrap();
            assert!(
                (back - va).abs() < 1e-12 * va.abs().max(1.0),
                "vA={va}: back={back}"
            );
        }
    }

    #[test]
    fn inverses_reject_escape_and_beyond() {
        let re = re21();
        let ve = re.escape_velocity();
        assert!(matches!(
            eta_from_va_direct(&re, ve),
            Err(MapsError::EscapeVelocity { .. })
        ));
        assert!(eta_from_va_direct(&re, ve - 1e-12).is_ok());
        assert!(matches!(
            eta_from_va_indirect(&re, 2.0 * ve),
            Err(MapsError::EscapeVelocity { .. })
        ));
        // Deeply hyperbolic indirect velocities are legitimate and land
        // in η ∈ [1, m/g).
        let eta = eta_from_va_indirect(&re, -50.0).unwrap();
        assert!(eta > 1.0 && eta < eta_sup(&re), "{eta}");
    }

    #[test]
    fn parabolic_endpoints_are_exact() {
        let re = re21();
        let ve = re.escape_velocity();
        assert!((eta_from_va_direct(&re, -ve).unwrap() + 1.0).abs() < 1e-15);
        assert!((eta_from_va_indirect(&re, -ve).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_geometry_maps_are_pure_scalings() {
        let re = RectilinearEquivalent::new(2.0, 0.0).unwrap();
        let ve = re.escape_velocity();
        let va = va_from_eta_direct(&re, 0.5).unwrap();
        assert!((va - 0.5 * ve).abs() < 1e-15);
        assert!((eta_from_va_direct(&re, va).unwrap() - 0.5).abs() < 1e-15);
        assert!((eta_from_va_indirect(&re, -0.25 * ve).unwrap() - 0.25).abs() < 1e-15);
        assert!(eta_sup(&re).is_infinite());
    }

    #[test]
    fn energies_agree_between_pictures() {
        let re = re21();
        let se = reduce_to_symmetric(&re).unwrap();
        for &eta in &[-2.0, -1.0, -0.4, 0.0, 0.6, 0.95] {
            let va = va_from_eta_direct(&re, eta).unwrap();
            let h_rect = energy_rect(&re, va);
            let h_sym = energy_sym(&se, eta).unwrap();
            assert!(
                (h_rect - h_sym).abs() < 1e-13 * h_rect.abs().max(1.0),
                "η={eta}: {h_rect} vs {h_sym}"
            );
        }
        // The indirect map reaches the same energy from the mirrored
        // velocity.
        for &eta in &[-0.4, 0.0, 0.6, 0.95] {
            let va_i = va_from_eta_indirect(&re, eta).unwrap();
            let h_ind = energy_rect(&re, va_i);
            let h_sym = energy_sym(&se, eta).unwrap();
            assert!((h_ind - h_sym).abs() < 1e-13 * h_sym.abs().max(1.0));
        }
    }

    #[test]
    fn beta_hat_normalizes_the_conic_coefficient() {
        // α = 1/3, β = √8/3: the normalization is exactly 1.
        let b = beta_hat(1.0 / 3.0, 8.0_f64.sqrt() / 3.0).unwrap();
        assert!((b - 1.0).abs() < 1e-15, "{b}");
        assert!((beta_hat(0.0, 0.7).unwrap() - 0.7).abs() < 1e-15);
        assert!(beta_hat(0.3, 0.0).unwrap() == 0.0);
        assert!(matches!(
            beta_hat(1.0, 0.5),
            Err(MapsError::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn beta_hat_energy_reference() {
        // Unit circle seen as a boundary problem: Σr = 2, c = √2, β̂ = 0
        // must give the circular energy −1/2.
        let h = energy_from_beta_hat(0.0, 2.0, 2.0_f64.sqrt()).unwrap();
        assert!((h + 0.5).abs() < 1e-15, "{h}");
        // Parabolic arcs have zero energy regardless of the lengths.
        assert!(energy_from_beta_hat(1.0, 3.7, 1.2).unwrap().abs() < 1e-15);
        assert!(energy_from_beta_hat(-1.0, 3.7, 1.2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn beta_hat_energy_matches_symmetric_energy() {
        let re = re21();
        let se = reduce_to_symmetric(&re).unwrap();
        let sum_r = 2.0 * se.r();
        let chord = re.chord();
        for &eta in &[-1.5, -0.5, 0.0, 0.5, 0.9] {
            let via_beta = energy_from_beta_hat(eta, sum_r, chord).unwrap();
            let via_sym = energy_sym(&se, eta).unwrap();
            assert!(
                (via_beta - via_sym).abs() < 1e-13 * via_sym.abs().max(1.0),
                "η={eta}: {via_beta} vs {via_sym}"
            );
        }
    }

    #[test]
    fn beta_hat_domain_is_guarded() {
        assert!(energy_from_beta_hat(0.0, 1.0, 2.0).is_err());
        assert!(energy_from_beta_hat(0.0, 0.0, 0.0).is_err());
        // β̂ large enough to null the denominator is rejected.
        assert!(energy_from_beta_hat(10.0, 2.0, 1.0).is_err());
        // Collinear-through-focus geometry (c = Σr) is fine.
        assert!(energy_from_beta_hat(0.3, 2.0, 2.0).is_ok());
    }
}
