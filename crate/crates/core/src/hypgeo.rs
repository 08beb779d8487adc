//! Spherical geometry and the exact hyperbolic geometry of the slit domain
//! obtained by removing the closed circle minus an arc from the sphere.
//!
//! The slit domain is uniformized onto the right half-plane by three
//! elementary conformal maps; hyperbolic distances, level sets of the
//! distance to the arc, and the angle/depth dictionary `d = log cot(beta/4)`
//! all have closed forms there.

use crate::circle::{norm_angle, CircleArc};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

/// Chordal (spherical) distance `2|z-w| / sqrt((1+|z|^2)(1+|w|^2))`.
/// Values with any non-finite component are treated as the point at infinity.
pub fn chordal_dist(z: Complex64, w: Complex64) -> f64 {
    let zi = !(z.re.is_finite() && z.im.is_finite());
    let wi = !(w.re.is_finite() && w.im.is_finite());
    match (zi, wi) {
        (true, true) => 0.0,
        (true, false) => 2.0 / (1.0 + w.norm_sqr()).sqrt(),
        (false, true) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (false, false) => {
            2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
        }
    }
}

/// The slit sphere determined by an arc: complement of (circle minus arc).
#[derive(Debug, Clone, Copy)]
pub struct SlitDomain {
    arc: CircleArc,
}

impl SlitDomain {
    pub fn new(arc: CircleArc) -> Self {
        Self { arc }
    }

    pub fn arc(&self) -> CircleArc {
        self.arc
    }

    fn rotation(&self) -> f64 {
        self.arc.midpoint()
    }

    fn half_tan(&self) -> f64 {
        (self.arc.length() / 4.0).tan()
    }

    /// Membership: z must not lie on the closed slit (circle minus arc).
    pub fn contains(&self, z: Complex64) -> bool {
        if (z.norm() - 1.0).abs() > 1e-9 {
            return true;
        }
        self.arc.contains(norm_angle(z.arg()))
    }

    /// Conformal map onto the right half-plane. Points of the arc are sent to
    /// the positive real axis. The arc is rotated to be centered at angle 0
    /// before the three-map chain is applied.
    pub fn map(&self, z: Complex64) -> Result<Complex64> {
        if !self.contains(z) {
            return Err(Error::OutsideDomain {
                what: "point lies on the slit",
            });
        }
        let zn = z * Complex64::from_polar(1.0, -self.rotation());
        let zeta = if zn.re.is_finite() && zn.im.is_finite() {
            Complex64::new(0.0, 1.0 / self.half_tan()) * (1.0 - zn) / (1.0 + zn)
        } else {
            Complex64::new(0.0, -1.0 / self.half_tan())
        };
        let xi = (1.0 + zeta) / (1.0 - zeta);
        Ok(xi.sqrt())
    }

    /// Inverse of `map`.
    pub fn unmap(&self, w: Complex64) -> Complex64 {
        let xi = w * w;
        let zeta = (xi - 1.0) / (xi + 1.0);
        // (1 - z)/(1 + z) = -i * zeta * tan(|I|/4)
        let u = Complex64::new(0.0, -self.half_tan()) * zeta;
        let zn = (1.0 - u) / (1.0 + u);
        zn * Complex64::from_polar(1.0, self.rotation())
    }

    /// Modulus of the derivative of `map` at z.
    pub fn map_derivative_norm(&self, z: Complex64) -> Result<f64> {
        let zn = z * Complex64::from_polar(1.0, -self.rotation());
        let zeta = Complex64::new(0.0, 1.0 / self.half_tan()) * (1.0 - zn) / (1.0 + zn);
        let xi = (1.0 + zeta) / (1.0 - zeta);
        let d1 = Complex64::new(0.0, 1.0 / self.half_tan()) * (-2.0) / ((1.0 + zn) * (1.0 + zn));
        let d2 = 2.0 / ((1.0 - zeta) * (1.0 - zeta));
        let d3 = 0.5 / xi.sqrt();
        Ok((d1 * d2 * d3).norm())
    }

    /// Hyperbolic distance between two points of the slit domain.
    pub fn dist(&self, z1: Complex64, z2: Complex64) -> Result<f64> {
        let w1 = self.map(z1)?;
        let w2 = self.map(z2)?;
        halfplane_dist(w1, w2)
    }

    /// Hyperbolic distance from z to the arc.
    pub fn dist_to_arc(&self, z: Complex64) -> Result<f64> {
        let w = self.map(z)?;
        Ok(halfplane_dist_to_axis(w))
    }

    /// Hyperbolic density of the slit domain at z.
    pub fn density(&self, z: Complex64) -> Result<f64> {
        let w = self.map(z)?;
        if w.re <= 0.0 {
            return Err(Error::OutsideDomain {
                what: "image left the right half-plane",
            });
        }
        Ok(self.map_derivative_norm(z)? / w.re)
    }
}

/// Hyperbolic distance in the right half-plane {Re w > 0} with metric |dw|/Re w.
pub fn halfplane_dist(w1: Complex64, w2: Complex64) -> Result<f64> {
    if w1.re <= 0.0 || w2.re <= 0.0 {
        return Err(Error::OutsideDomain {
            what: "point not in the right half-plane",
        });
    }
    let t = (w1 - w2).norm_sqr() / (2.0 * w1.re * w2.re);
    // arccosh(1 + t), stable for small t
    Ok(((1.0 + t) + (t * (t + 2.0)).sqrt()).ln())
}

/// Distance from w to the positive real axis in the right half-plane:
/// `log tan(pi/4 + |arg w|/2)`.
pub fn halfplane_dist_to_axis(w: Complex64) -> f64 {
    (FRAC_PI_4 + 0.5 * w.arg().abs()).tan().ln()
}

/// The depth/angle dictionary: d = log cot(beta/4) for beta in (0, pi].
pub fn d_from_beta(beta: f64) -> Result<f64> {
    if !(0.0 < beta && beta <= PI) {
        return Err(Error::OutOfRange {
            what: "beta must lie in (0, pi]",
        });
    }
    Ok((1.0 / (beta / 4.0).tan()).ln())
}

/// Inverse dictionary: beta = 4 arctan(e^{-d}) for d >= 0.
pub fn beta_from_d(d: f64) -> Result<f64> {
    if d < 0.0 {
        return Err(Error::OutOfRange {
            what: "d must be nonnegative",
        });
    }
    Ok(4.0 * (-d).exp().atan())
}

/// A half hyperbolic neighborhood: depth d and boundary angle beta are kept
/// together and must satisfy the dictionary.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HalfNbhd {
    pub arc: CircleArc,
    pub d: f64,
    pub beta: f64,
}

impl HalfNbhd {
    pub fn from_depth(arc: CircleArc, d: f64) -> Result<Self> {
        Ok(Self {
            arc,
            d,
            beta: beta_from_d(d)?,
        })
    }

    pub fn from_angle(arc: CircleArc, beta: f64) -> Result<Self> {
        Ok(Self {
            arc,
            d: d_from_beta(beta)?,
            beta,
        })
    }
}

/// Closed polyline tracing the boundary of the half neighborhood outside the
/// closed unit disk: the outer circular arc at hyperbolic distance d from the
/// arc, closed back along the arc itself on the circle.
///
/// The outer piece is sampled along the level ray in the half-plane model and
/// mapped back; its first/last vertices are pinned to the arc endpoints.
pub fn half_nbhd_boundary(arc: CircleArc, d: f64, samples: usize) -> Result<Vec<Complex64>> {
    if samples < 64 {
        return Err(Error::InvalidParams {
            what: "need at least 64 samples".into(),
        });
    }
    if d <= 0.0 || d > 8.0 {
        return Err(Error::OutOfRange {
            what: "depth must lie in (0, 8]",
        });
    }
    let domain = SlitDomain::new(arc);
    let beta = beta_from_d(d)?;
    let level = FRAC_PI_2 - 0.5 * beta;

    // Pick the sign of the level ray that lands outside the unit disk.
    let probe = domain.unmap(Complex64::from_polar(1.0, level));
    let theta0 = if probe.norm() > 1.0 { level } else { -level };

    let mut outer = Vec::with_capacity(samples + 3);
    outer.push(Complex64::from_polar(1.0, arc.left()));
    let span = 10.0f64;
    for i in 0..=samples {
        let s = -span + 2.0 * span * i as f64 / samples as f64;
        let w = Complex64::from_polar(s.exp(), theta0);
        let z = domain.unmap(w);
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() > 1e6 {
            return Err(Error::OutsideRegime {
                what: format!("boundary unbounded for |I| = {}, d = {d}", arc.length()),
            });
        }
        outer.push(z);
    }
    outer.push(Complex64::from_polar(1.0, arc.right()));
    // The closing piece runs along the circle, so only the outer piece can
    // break simplicity.
    if polyline_self_intersects(&outer) {
        return Err(Error::OutsideRegime {
            what: format!("half neighborhood not simple for |I| = {}", arc.length()),
        });
    }
    let mut pts = outer;
    for i in 1..samples {
        let t = 1.0 - i as f64 / samples as f64;
        pts.push(Complex64::from_polar(1.0, arc.at_fraction(t)));
    }
    pts.push(Complex64::from_polar(1.0, arc.left()));
    Ok(pts)
}

/// Crude segment-pair self-intersection test on a decimated copy.
fn polyline_self_intersects(pts: &[Complex64]) -> bool {
    let step = (pts.len() / 256).max(1);
    let dec: Vec<Complex64> = pts.iter().step_by(step).copied().collect();
    let n = dec.len();
    for i in 0..n.saturating_sub(1) {
        for j in i + 2..n - 1 {
            if i == 0 && j == n - 2 {
                continue;
            }
            if segments_intersect(dec[i], dec[i + 1], dec[j], dec[j + 1]) {
                return true;
            }
        }
    }
    false
}

fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let cross = |o: Complex64, p: Complex64, q: Complex64| {
        (p.re - o.re) * (q.im - o.im) - (p.im - o.im) * (q.re - o.re)
    };
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0))
}

/// Result of the sandwich comparison between the slit-domain neighborhood and
/// the annulus-with-slit proxy for the true postcritical complement.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub arc_length: f64,
    pub d: f64,
    /// Smallest constant with dist-to-arc in the proxy domain <= d + C |I|
    /// over the sampled outer boundary of the slit-domain neighborhood.
    pub c: f64,
    pub d_prime: f64,
    pub d_prime_below_2d: bool,
    /// Half-angle of the largest sector inside the image of the proxy domain.
    pub sector_half_angle: f64,
}

/// Verifies the two-sided containment on sampled grids: boundary points of
/// the slit-domain neighborhood at depth d sit at depth at most d' = d + C|I|
/// in the smaller proxy domain (annulus of modulus r' minus the slit and the
/// opposite radial segment), and d' < 2d in the admissible regime.
pub fn sandwich_check(
    arc: CircleArc,
    d: f64,
    r_prime: f64,
    samples: usize,
) -> Result<SandwichReport> {
    if r_prime <= 1.0 {
        return Err(Error::InvalidParams {
            what: "r' must exceed 1".into(),
        });
    }
    if arc.length() >= 1.0 {
        return Err(Error::OutsideRegime {
            what: format!("arc length {} too large for the sandwich regime", arc.length()),
        });
    }
    let domain = SlitDomain::new(arc);
    let sector = proxy_sector_half_angle(&domain, r_prime, 512)?;

    let beta = beta_from_d(d)?;
    let level = FRAC_PI_2 - 0.5 * beta;
    if level >= sector {
        return Err(Error::OutsideRegime {
            what: format!("depth d = {d} reaches outside the proxy sector"),
        });
    }
    // Boundary samples of the depth-d level set in the half-plane model; the
    // proxy distance is the sector distance after opening the sector to the
    // half-plane.
    let mut worst = 0.0f64;
    for i in 0..samples {
        let s = -8.0 + 16.0 * i as f64 / (samples - 1).max(1) as f64;
        let _w = Complex64::from_polar(s.exp(), level);
        let opened = level * FRAC_PI_2 / sector;
        let d_hat = (FRAC_PI_4 + 0.5 * opened).tan().ln();
        worst = worst.max(d_hat - d);
    }
    let c = worst / arc.length();
    let d_prime = d + worst;
    Ok(SandwichReport {
        arc_length: arc.length(),
        d,
        c,
        d_prime,
        d_prime_below_2d: d_prime < 2.0 * d,
        sector_half_angle: sector,
    })
}

/// Largest half-angle A such that the sector {|arg w| < A} avoids the images
/// of the proxy-domain obstacles (the two annulus circles and the radial
/// slit opposite the arc).
pub fn proxy_sector_half_angle(
    domain: &SlitDomain,
    r_prime: f64,
    samples_per_curve: usize,
) -> Result<f64> {
    let mid = domain.arc().midpoint();
    let mut best = FRAC_PI_2;
    let mut push = |z: Complex64| -> Result<()> {
        if domain.contains(z) {
            let w = domain.map(z)?;
            best = best.min(w.arg().abs());
        }
        Ok(())
    };
    for i in 0..samples_per_curve {
        let t = TAU * i as f64 / samples_per_curve as f64;
        push(Complex64::from_polar(r_prime, t))?;
        push(Complex64::from_polar(1.0 / r_prime, t))?;
        // Radial segment opposite the arc midpoint, on both sides of the circle.
        let r = 1.0 / r_prime + (r_prime - 1.0 / r_prime) * i as f64 / samples_per_curve as f64;
        let opposite = Complex64::from_polar(r, mid + PI);
        if (r - 1.0).abs() > 1e-9 {
            push(opposite)?;
        }
    }
    if best <= 0.0 {
        return Err(Error::OutsideRegime {
            what: "proxy sector collapsed".into(),
        });
    }
    Ok(best)
}

/// Density of the hyperbolic metric of the exterior of the closed unit disk
/// in the plane: 1/(|z| log |z|). Used as a computable upper-comparable proxy
/// for the metric of the postcritical complement.
pub fn exterior_metric_density(z: Complex64) -> Result<f64> {
    let r = z.norm();
    if r <= 1.0 {
        return Err(Error::OutsideDomain {
            what: "exterior density needs |z| > 1",
        });
    }
    Ok(1.0 / (r * r.ln()))
}

/// Density ratio of the proxy-sector metric to the slit-domain metric at the
/// half-plane image point `w` (conformal factors cancel, so this is a pure
/// half-plane computation).
pub fn sector_to_halfplane_density_ratio(w: Complex64, half_angle: f64) -> f64 {
    // Map the sector {|arg| < A} onto the half-plane by w -> w^(pi/(2A)).
    let p = FRAC_PI_2 / half_angle;
    let s = w.powf(p);
    let ds = p * w.powf(p - 1.0);
    (ds.norm() / s.re) * w.re
}
