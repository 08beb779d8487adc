use super::arc::{norm_angle, CircleArc};
use crate::error::{Error, Result};
use crate::rotation::RotationNumber;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A marked critical point on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub angle: f64,
    pub local_degree: u32,
}

/// Analytic circle homeomorphism: rigid rotation or the degree-3 Blaschke
/// family `B_t(z) = e^{2 pi i t} z^2 (z-3)/(1-3z)`, which fixes the unit
/// circle and carries one critical point at z = 1 of local degree 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameter")]
pub enum CircleMap {
    RigidRotation(f64),
    Blaschke(f64),
}

impl CircleMap {
    /// Rotation by `alpha` turns.
    pub fn rotation(alpha: f64) -> Self {
        CircleMap::RigidRotation(alpha)
    }

    pub fn blaschke(t: f64) -> Self {
        CircleMap::Blaschke(t)
    }

    /// Image angle of `e^{i theta}` under the map, in [0, 2pi).
    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            CircleMap::RigidRotation(alpha) => norm_angle(theta + TAU * alpha),
            CircleMap::Blaschke(t) => {
                let z = Complex64::from_polar(1.0, theta);
                let w = blaschke_value(t, z);
                norm_angle(w.arg())
            }
        }
    }

    /// Planar extension of the map at a point of the complex plane.
    pub fn eval_planar(&self, z: Complex64) -> Complex64 {
        match *self {
            CircleMap::RigidRotation(alpha) => Complex64::from_polar(1.0, TAU * alpha) * z,
            CircleMap::Blaschke(t) => blaschke_value(t, z),
        }
    }

    /// Complex derivative of the planar extension.
    pub fn derivative_planar(&self, z: Complex64) -> Complex64 {
        match *self {
            CircleMap::RigidRotation(alpha) => Complex64::from_polar(1.0, TAU * alpha),
            CircleMap::Blaschke(t) => blaschke_derivative(t, z),
        }
    }

    /// Lift displacement `(eval(theta) - theta) mod 2pi`, in [0, 2pi).
    pub fn displacement(&self, theta: f64) -> f64 {
        let d = (self.eval(theta) - theta).rem_euclid(TAU);
        if d >= TAU {
            0.0
        } else {
            d
        }
    }

    /// Critical points on the unit circle.
    pub fn circle_critical_points(&self) -> Vec<CriticalPoint> {
        match self {
            CircleMap::RigidRotation(_) => Vec::new(),
            CircleMap::Blaschke(_) => vec![CriticalPoint {
                angle: 0.0,
                local_degree: 3,
            }],
        }
    }

    /// Critical values on the unit circle (the set CV).
    pub fn circle_critical_values(&self) -> Vec<f64> {
        match *self {
            CircleMap::RigidRotation(_) => Vec::new(),
            CircleMap::Blaschke(t) => vec![norm_angle(TAU * t)],
        }
    }

    /// Number of distinct critical points on the circle.
    pub fn t0(&self) -> usize {
        self.circle_critical_points().len()
    }

    /// Poincare rotation number estimated from an `n`-iterate orbit.
    /// The standard bound gives an error of at most 1/n.
    pub fn rotation_number(&self, n: usize) -> f64 {
        match *self {
            CircleMap::RigidRotation(alpha) => alpha.rem_euclid(1.0),
            CircleMap::Blaschke(_) => {
                let mut theta = 0.73; // arbitrary base point away from the critical point
                let mut total = 0.0;
                for _ in 0..n {
                    let d = self.displacement(theta);
                    total += d;
                    theta = norm_angle(theta + d);
                }
                total / (TAU * n as f64)
            }
        }
    }

    /// Inverse of the circle restriction: the unique angle mapping to `y`.
    pub fn inverse(&self, y: f64) -> f64 {
        match *self {
            CircleMap::RigidRotation(alpha) => norm_angle(y - TAU * alpha),
            CircleMap::Blaschke(_) => {
                // Lift L(theta) = theta + displacement(theta) is continuous and
                // increasing on [0, 2pi] with L(2pi) = L(0) + 2pi.
                let l0 = self.displacement(0.0);
                let mut target = y.rem_euclid(TAU);
                while target < l0 {
                    target += TAU;
                }
                // target in [L(0), L(0) + 2pi)
                let (mut lo, mut hi) = (0.0f64, TAU);
                for _ in 0..90 {
                    let mid = 0.5 * (lo + hi);
                    let lm = mid + self.displacement(mid);
                    if lm < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                norm_angle(0.5 * (lo + hi))
            }
        }
    }

    /// Forward image of an arc (the map is an orientation-preserving homeomorphism).
    pub fn image_arc(&self, arc: CircleArc) -> Result<CircleArc> {
        CircleArc::new(self.eval(arc.left()), self.eval(arc.right()))
    }

    /// The unique arc J with G(J) = I.
    pub fn preimage_arc(&self, arc: CircleArc) -> Result<CircleArc> {
        CircleArc::new(self.inverse(arc.left()), self.inverse(arc.right()))
    }

    /// Checks that the lift is increasing on an `n`-point grid.
    pub fn lift_monotone_on_grid(&self, n: usize) -> bool {
        let mut prev = 0.0 + self.displacement(0.0);
        for i in 1..=n {
            let theta = TAU * i as f64 / n as f64;
            let lift = theta + self.displacement(theta);
            if lift < prev - 1e-9 {
                return false;
            }
            prev = lift;
        }
        true
    }
}

fn blaschke_value(t: f64, z: Complex64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, TAU * t);
    rot * z * z * (z - 3.0) / (1.0 - 3.0 * z)
}

fn blaschke_derivative(t: f64, z: Complex64) -> Complex64 {
    // d/dz [z^3 - 3z^2]/(1 - 3z) by the quotient rule.
    let rot = Complex64::from_polar(1.0, TAU * t);
    let den = 1.0 - 3.0 * z;
    let num_d = 3.0 * z * z - 6.0 * z;
    let num = z * z * z - 3.0 * z * z;
    rot * (num_d * den + 3.0 * num) / (den * den)
}

/// Tunes the Blaschke parameter so that the rotation number matches `alpha`,
/// by bisection in t (the rotation number is non-decreasing in t).
///
/// The orbit length grows geometrically; the result is certified only when
/// the orbit-estimate error bound 1/N fits inside `tol`.
pub fn tune_to_rotation(alpha: &RotationNumber, tol: f64) -> Result<CircleMap> {
    tune_to_rotation_value(alpha.value(), tol)
}

pub fn tune_to_rotation_value(alpha: f64, tol: f64) -> Result<CircleMap> {
    if !(0.0 < alpha && alpha < 1.0) || tol <= 0.0 {
        return Err(Error::InvalidParams {
            what: format!("alpha = {alpha}, tol = {tol}"),
        });
    }
    const MAX_BISECTIONS: usize = 200;
    const N_MAX: usize = 2_000_000;
    if tol < 1.0 / N_MAX as f64 {
        // The orbit-estimate error bound can never fit inside tol, so the
        // bisection cap would be exhausted without certification.
        return Err(Error::NoConvergence {
            iterations: MAX_BISECTIONS,
            best: 1.0 / N_MAX as f64,
        });
    }
    let mut lo = 1e-3;
    let mut hi = 1.0 - 1e-3;
    let mut n = 50_000usize;
    let mut best = f64::INFINITY;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let map = CircleMap::Blaschke(mid);
        let rho = map.rotation_number(n);
        let err = (rho - alpha).abs();
        best = best.min(err + 1.0 / n as f64);
        if err + 1.0 / n as f64 <= tol {
            return Ok(map);
        }
        if rho < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        n = ((n as f64 * 1.25) as usize).min(N_MAX);
    }
    Err(Error::NoConvergence {
        iterations: MAX_BISECTIONS,
        best,
    })
}
