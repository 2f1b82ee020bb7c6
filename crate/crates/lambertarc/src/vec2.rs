//! Minimal plane vectors and rotations.
//!
//! The dynamics here are strictly planar, so a hand-rolled pair type keeps
//! the formulas close to their written form without a linear-algebra
//! dependency.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point or vector in the orbital plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product: positive when `other` points
    /// counter-clockwise of `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

/// A proper rotation of the plane (determinant +1), stored as the image of
/// the first basis vector.
#[derive(Debug, Clone, Copy)]
pub struct Rotation2 {
    cos: f64,
    sin: f64,
}

impl Rotation2 {
    pub const IDENTITY: Rotation2 = Rotation2 { cos: 1.0, sin: 0.0 };

    /// The rotation that maps the unit vector `u` onto `(1, 0)`.
    ///
    /// `u` must be normalized; no check is made beyond a debug assertion.
    pub fn aligning(u: Vec2) -> Self {
        debug_assert!((u.norm() - 1.0).abs() < 1e-12);
        Rotation2 { cos: u.x, sin: u.y }
    }

    /// This rotation composed with a rotation by π (both axes negated).
    pub fn flipped(self) -> Self {
        Rotation2 {
            cos: -self.cos,
            sin: -self.sin,
        }
    }

    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(
            self.cos * v.x + self.sin * v.y,
            -self.sin * v.x + self.cos * v.y,
        )
    }

    pub fn inverse(self) -> Self {
        Rotation2 {
            cos: self.cos,
            sin: -self.sin,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_sign_follows_orientation() {
        let e1 = Vec2::new(1.0, 0.0);
        let e2 = Vec2::new(0.0, 1.0);
        assert!(e1.cross(e2) > 0.0, "e2 is counter-clockwise of e1");
        assert!(e2.cross(e1) < 0.0);
    }

    #[test]
    fn aligning_sends_u_to_e1() {
        let u = Vec2::new(0.6, 0.8);
        let r = Rotation2::aligning(u);
        let img = r.apply(u);
        assert!((img.x - 1.0).abs() < 1e-15);
        assert!(img.y.abs() < 1e-15);
    }

    #[test]
    fn inverse_round_trips() {
        let r = Rotation2::aligning(Vec2::new(0.6, 0.8));
        let v = Vec2::new(-2.5, 1.25);
        let back = r.inverse().apply(r.apply(v));
        assert!((back - v).norm() < 1e-14);
    }

    #[test]
    fn rotation_preserves_norm_and_orientation() {
        let r = Rotation2::aligning(Vec2::new(-0.8, 0.6));
        let a = Vec2::new(1.0, 2.0);
        let b = Vec2::new(-3.0, 0.5);
        assert!((r.apply(a).norm() - a.norm()).abs() < 1e-14);
        assert!((r.apply(a).cross(r.apply(b)) - a.cross(b)).abs() < 1e-12);
    }
}
