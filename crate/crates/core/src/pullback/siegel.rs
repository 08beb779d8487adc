use super::curve::JordanCurve;
use super::map::QuadSiegel;
use crate::error::{Error, Result};
use crate::hypgeo::chordal_dist;
use num_complex::Complex64;

/// Escape guard for invariant-boundary sampling.
pub const ESCAPE_RADIUS: f64 = 10.0;

/// Samples the invariant-disk boundary as the closure of the critical orbit,
/// sorted by angle around the indifferent fixed point at the origin.
///
/// For bounded-type multipliers the critical point lies on the boundary and
/// its orbit is dense there. The orbit escaping the radius-10 disk or leaving
/// large angular gaps signals a degenerate multiplier or precision loss.
pub fn siegel_boundary(f: &QuadSiegel, n: usize) -> Result<Vec<Complex64>> {
    if n < 1000 {
        return Err(Error::InvalidParams {
            what: format!("need at least 1000 orbit points, got {n}"),
        });
    }
    let mut z = f.critical_point();
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        pts.push(z);
        z = f.eval(z);
        if z.norm() > ESCAPE_RADIUS {
            return Err(Error::Escape {
                radius: ESCAPE_RADIUS,
                iterate: i + 1,
            });
        }
    }
    let angle = |z: &Complex64| z.arg().rem_euclid(std::f64::consts::TAU);
    pts.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap());
    // A quasi-circle around the origin leaves no large angular gap.
    let mut max_gap = 0.0f64;
    for i in 0..pts.len() {
        let a = angle(&pts[i]);
        let b = angle(&pts[(i + 1) % pts.len()]);
        let gap = if i + 1 == pts.len() {
            b - a + std::f64::consts::TAU
        } else {
            b - a
        };
        max_gap = max_gap.max(gap);
    }
    if max_gap > 0.5 {
        return Err(Error::Degenerate {
            what: format!("angular gap {max_gap:.3} rad: orbit does not encircle the fixed point"),
        });
    }
    Ok(pts)
}

/// Largest distance from the forward image of boundary segment midpoints to
/// the polyline, normalized tube check for the sampled boundary.
pub fn boundary_invariance_residual(f: &QuadSiegel, boundary: &[Complex64]) -> f64 {
    let n = boundary.len();
    let step = (n / 512).max(1);
    let mut worst = 0.0f64;
    for i in (0..n).step_by(step) {
        let mid = 0.5 * (boundary[i] + boundary[(i + 1) % n]);
        let img = f.eval(mid);
        let mut best = f64::INFINITY;
        for p in boundary {
            best = best.min((img - p).norm());
        }
        worst = worst.max(best);
    }
    worst
}

/// Largest gap between consecutive sampled boundary points.
pub fn boundary_sample_gap(boundary: &[Complex64]) -> f64 {
    let n = boundary.len();
    let mut max_gap = 0.0f64;
    for i in 0..n {
        max_gap = max_gap.max((boundary[(i + 1) % n] - boundary[i]).norm());
    }
    max_gap
}

/// Deduplicated postcritical sample: f^k(c) for 1 <= k <= n over the finite
/// critical points, plus the fixed point at infinity.
pub fn postcritical_sample(f: &QuadSiegel, n: usize) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    let mut push = |z: Complex64| {
        if !out.iter().any(|w| chordal_dist(*w, z) < 1e-9) {
            out.push(z);
        }
    };
    let mut z = f.critical_point();
    for _ in 0..n {
        z = f.eval(z);
        push(z);
        if z.norm() > 1e12 {
            break;
        }
    }
    push(Complex64::new(f64::INFINITY, 0.0));
    out
}

/// Builds a seed disk of the requested chordal diameter touching the sampled
/// boundary at the anchor index, centered along the outward radial direction.
///
/// The disk closure meets the boundary sample only near the anchor, which is
/// checked against the polyline with the given tolerance.
pub fn seed_disk_touching(
    boundary: &[Complex64],
    anchor_index: usize,
    chordal_diameter: f64,
    vertices: usize,
    touch_tol: f64,
) -> Result<JordanCurve> {
    let p = boundary[anchor_index % boundary.len()];
    let outward = if p.norm() > 0.0 {
        p / p.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // Euclidean radius from the chordal target by bisection.
    let mut lo = 1e-6;
    let mut hi = 2.0;
    for _ in 0..60 {
        let r = 0.5 * (lo + hi);
        let center = p + outward * r;
        let d = chordal_dist(center - r * outward, center + r * outward);
        if d < chordal_diameter {
            lo = r;
        } else {
            hi = r;
        }
    }
    let r = 0.5 * (lo + hi);
    let center = p + outward * r;
    let curve = JordanCurve::circle(center, r, vertices);

    // Hypothesis check: the curve approaches the boundary sample only near
    // the anchor point.
    for b in boundary {
        let mut close = false;
        for q in curve.open_points() {
            if (q - b).norm() < touch_tol {
                close = true;
                break;
            }
        }
        if close && (b - p).norm() > 4.0 * (touch_tol + r * 0.5) {
            return Err(Error::Degenerate {
                what: format!(
                    "seed disk touches the boundary away from the anchor (at {b})"
                ),
            });
        }
    }
    Ok(curve)
}

/// Inscribed polyline strictly inside the invariant disk: the sampled
/// boundary scaled radially toward the fixed point.
pub fn inscribed_curve(boundary: &[Complex64], scale: f64, vertices: usize) -> Result<JordanCurve> {
    if !(0.0 < scale && scale < 1.0) {
        return Err(Error::InvalidParams {
            what: format!("scale {scale} must be in (0,1)"),
        });
    }
    let step = (boundary.len() / vertices).max(1);
    let pts: Vec<Complex64> = boundary.iter().step_by(step).map(|&z| z * scale).collect();
    JordanCurve::new(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::RotationNumber;

    #[test]
    fn golden_boundary_is_bounded_and_closed() {
        let f = QuadSiegel::new(&RotationNumber::golden());
        let b = siegel_boundary(&f, 20_000).unwrap();
        assert_eq!(b.len(), 20_000);
        let max_r = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(max_r < 1.0, "max |z| = {max_r}");
        // Invariance: images of midpoints stay within twice the sample gap.
        let residual = boundary_invariance_residual(&f, &b);
        assert!(residual <= 2.0 * boundary_sample_gap(&b), "residual {residual}");
    }

    #[test]
    fn parabolic_multiplier_is_degenerate() {
        let f = QuadSiegel::with_multiplier(Complex64::new(1.0, 0.0));
        match siegel_boundary(&f, 5_000) {
            Err(Error::Degenerate { .. }) | Err(Error::Escape { .. }) => {}
            other => panic!("expected Degenerate or Escape, got {other:?}"),
        }
    }

    #[test]
    fn postcritical_single_iterate_is_critical_value() {
        let f = QuadSiegel::new(&RotationNumber::golden());
        let s = postcritical_sample(&f, 1);
        assert_eq!(s.len(), 2); // critical value + infinity
        assert!((s[0] - f.critical_value()).norm() < 1e-12);
    }

    #[test]
    fn postcritical_tracks_boundary() {
        let f = QuadSiegel::new(&RotationNumber::golden());
        let boundary = siegel_boundary(&f, 30_000).unwrap();
        let sample = postcritical_sample(&f, 400);
        for z in sample.iter().skip(100).filter(|z| z.re.is_finite()) {
            let best = boundary
                .iter()
                .map(|b| chordal_dist(*z, *b))
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-2, "postcritical point {z} strays {best}");
        }
    }

    #[test]
    fn seed_disk_has_requested_size() {
        let f = QuadSiegel::new(&RotationNumber::golden());
        let boundary = siegel_boundary(&f, 10_000).unwrap();
        let seed = seed_disk_touching(&boundary, 137, 0.2, 128, 1e-3).unwrap();
        assert!((seed.chordal_diam() - 0.2).abs() < 0.02);
        let touch = seed.min_dist_to(&boundary);
        assert!(touch < 1e-2, "seed does not touch: {touch}");
    }
}
