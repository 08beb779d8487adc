use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Angle comparison tolerance for endpoint coincidence checks.
pub const ANGLE_TOL: f64 = 1e-12;

/// Normalizes an angle into [0, 2pi).
pub fn norm_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Anticlockwise circular distance from `a` to `b`, in (0, 2pi].
pub fn ccw_dist(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d == 0.0 {
        TAU
    } else {
        d
    }
}

/// Oriented open arc (a, b) on the unit circle, traversed anticlockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleArc {
    a: f64,
    b: f64,
}

impl CircleArc {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let a = norm_angle(a);
        let b = norm_angle(b);
        if (a - b).abs() < ANGLE_TOL || (TAU - (a - b).abs()) < ANGLE_TOL {
            return Err(Error::InvalidParams {
                what: "arc endpoints coincide".into(),
            });
        }
        Ok(Self { a, b })
    }

    /// The full circle minus the point at `a` (written `(a^-, a^+)`).
    pub fn punctured(a: f64) -> Self {
        let a = norm_angle(a);
        Self {
            a: norm_angle(a + ANGLE_TOL),
            b: a,
        }
    }

    pub fn left(&self) -> f64 {
        self.a
    }

    pub fn right(&self) -> f64 {
        self.b
    }

    /// Euclidean length (b - a) mod 2pi, in (0, 2pi).
    pub fn length(&self) -> f64 {
        ccw_dist(self.a, self.b)
    }

    /// Euclidean midpoint angle.
    pub fn midpoint(&self) -> f64 {
        norm_angle(self.a + 0.5 * self.length())
    }

    /// Open-arc membership.
    pub fn contains(&self, theta: f64) -> bool {
        let t = (theta - self.a).rem_euclid(TAU);
        t > 0.0 && t < self.length()
    }

    /// Strict membership with a margin on both sides.
    pub fn contains_with_margin(&self, theta: f64, margin: f64) -> bool {
        let t = (theta - self.a).rem_euclid(TAU);
        t > margin && t < self.length() - margin
    }

    /// The complementary arc (b, a).
    pub fn complement(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    /// Grows the arc by the same euclidean length on each side.
    pub fn pad(&self, each_side: f64) -> Result<Self> {
        if self.length() + 2.0 * each_side >= TAU {
            return Err(Error::TargetTooLarge {
                target: self.length() + 2.0 * each_side,
                limit: TAU,
            });
        }
        CircleArc::new(self.a - each_side, self.b + each_side)
    }

    /// Position of `theta` inside the arc as a fraction of its length.
    pub fn fraction_of(&self, theta: f64) -> f64 {
        (theta - self.a).rem_euclid(TAU) / self.length()
    }

    /// Angle at a given fraction along the arc.
    pub fn at_fraction(&self, t: f64) -> f64 {
        norm_angle(self.a + t * self.length())
    }
}
