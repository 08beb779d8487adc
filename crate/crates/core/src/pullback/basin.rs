//! Equipotential curves and ray segments in the super-attracting basin of
//! infinity of the quadratic family, built by pulling back a large base
//! circle with angle-doubling bookkeeping.

use super::curve::track_path;
use super::map::QuadSiegel;
use crate::error::{Error, Result};
use crate::hypgeo::chordal_dist;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Minimal escape-guaranteed base radius.
pub const MIN_BASE_RADIUS: f64 = 4.0;

/// The curves Gamma_0 .. Gamma_n sampled at a fixed even angle grid, with
/// f(Gamma_{k+1}(theta)) = Gamma_k(2 theta) holding grid-exactly.
#[derive(Debug, Clone)]
pub struct EquipotentialFamily {
    pub levels: Vec<Vec<Complex64>>,
    pub base_radius: f64,
}

pub fn equipotential_family(
    f: &QuadSiegel,
    n: usize,
    samples: usize,
    base_radius: f64,
) -> Result<EquipotentialFamily> {
    if base_radius < MIN_BASE_RADIUS {
        return Err(Error::InvalidParams {
            what: format!("base radius {base_radius} below the escape bound 4"),
        });
    }
    if samples < 16 || samples % 2 != 0 {
        return Err(Error::InvalidParams {
            what: "need an even number of samples >= 16".into(),
        });
    }
    let mut levels = Vec::with_capacity(n + 1);
    let base: Vec<Complex64> = (0..samples)
        .map(|j| Complex64::from_polar(base_radius, TAU * j as f64 / samples as f64))
        .collect();
    levels.push(base);
    for k in 0..n {
        let parent = &levels[k];
        let next = pull_back_level(f, parent)?;
        levels.push(next);
    }
    Ok(EquipotentialFamily {
        levels,
        base_radius,
    })
}

/// One level pull-back: traverse the parent polyline twice and record the
/// tracked preimage at every second waypoint.
fn pull_back_level(f: &QuadSiegel, parent: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = parent.len();
    // Doubled closed path through every parent vertex.
    let mut path = Vec::with_capacity(2 * k + 1);
    for lap in 0..2 {
        let _ = lap;
        path.extend_from_slice(parent);
    }
    path.push(parent[0]);

    // Start root: the preimage of parent[0] nearest to parent[0] keeps the
    // angular labeling anchored near the positive real direction.
    let candidates = f.map().preimages(path[0])?;
    let w0 = candidates
        .into_iter()
        .filter(|w| w.re.is_finite())
        .min_by(|a, b| {
            (a - path[0])
                .norm()
                .partial_cmp(&(b - path[0]).norm())
                .unwrap()
        })
        .ok_or_else(|| Error::TrackingLost {
            what: "no finite preimage for the level seed".into(),
        })?;

    // Track along the doubled path, recording values only at the waypoints.
    let mut out = Vec::with_capacity(k);
    let mut current = w0;
    let mut fiber = f.map().preimages(path[0])?;
    out.push(current);
    let mut recorded = 1usize;
    for m in 1..path.len() {
        let (w, roots) = track_segment(f, current, &fiber, path[m - 1], path[m])?;
        current = w;
        fiber = roots;
        if m < path.len() - 1 && m % 2 == 0 {
            out.push(current);
            recorded += 1;
        }
    }
    if (current - w0).norm() > 1e-7 {
        return Err(Error::TrackingLost {
            what: format!("level did not close: {:.3e}", (current - w0).norm()),
        });
    }
    if recorded != k {
        return Err(Error::TrackingLost {
            what: format!("recorded {recorded} of {k} level points"),
        });
    }
    Ok(out)
}

/// Tracks one straight segment with adaptive bisection.
fn track_segment(
    f: &QuadSiegel,
    mut current: Complex64,
    fiber: &[Complex64],
    a: Complex64,
    b: Complex64,
) -> Result<(Complex64, Vec<Complex64>)> {
    let mut fiber = fiber.to_vec();
    let mut lo = a;
    let mut pending = vec![b];
    let mut depth = 0usize;
    while let Some(t) = pending.last().copied() {
        match try_step(f, current, &fiber, t) {
            Ok((w, roots)) => {
                current = w;
                fiber = roots;
                lo = t;
                pending.pop();
                depth = depth.saturating_sub(1);
            }
            Err(_) if depth < 48 => {
                pending.push(0.5 * (lo + t));
                depth += 1;
            }
            Err(e) => return Err(e),
        }
    }
    Ok((current, fiber))
}

fn try_step(
    f: &QuadSiegel,
    current: Complex64,
    fiber: &[Complex64],
    target: Complex64,
) -> Result<(Complex64, Vec<Complex64>)> {
    let finite: Vec<Complex64> = fiber.iter().copied().filter(|w| w.re.is_finite()).collect();
    let warm = if finite.len() == f.map().degree() {
        Some(finite.as_slice())
    } else {
        None
    };
    let roots = f.map().preimages_warm(target, warm)?;
    let mut best = None;
    let mut best_d = f64::INFINITY;
    for r in roots.iter().filter(|r| r.re.is_finite()) {
        let d = (r - current).norm();
        if d < best_d {
            best = Some(*r);
            best_d = d;
        }
    }
    let mut gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            gap = gap.min((roots[i] - roots[j]).norm());
        }
    }
    match best {
        Some(w) if best_d < gap / 3.0 => Ok((w, roots)),
        _ => Err(Error::TrackingLost {
            what: format!("step {best_d:.3e} vs gap {gap:.3e}"),
        }),
    }
}

impl EquipotentialFamily {
    /// sup over the angle grid of chordal(Gamma_k, Gamma_{k+1}).
    pub fn level_gap(&self, k: usize) -> Result<f64> {
        if k + 1 >= self.levels.len() {
            return Err(Error::IndexOutOfRange {
                index: k + 1,
                len: self.levels.len(),
            });
        }
        Ok(self.levels[k]
            .iter()
            .zip(self.levels[k + 1].iter())
            .map(|(a, b)| chordal_dist(*a, *b))
            .fold(0.0, f64::max))
    }

    pub fn gaps(&self) -> Vec<f64> {
        (0..self.levels.len() - 1)
            .map(|k| self.level_gap(k).unwrap())
            .collect()
    }

    /// Largest functional-equation residual chordal(f(Gamma_{k+1}(t)), Gamma_k(2t)).
    pub fn functional_residual(&self, f: &QuadSiegel, k: usize) -> Result<f64> {
        if k + 1 >= self.levels.len() {
            return Err(Error::IndexOutOfRange {
                index: k + 1,
                len: self.levels.len(),
            });
        }
        let parent = &self.levels[k];
        let child = &self.levels[k + 1];
        let kk = parent.len();
        let mut worst = 0.0f64;
        for (j, w) in child.iter().enumerate() {
            let target = parent[(2 * j) % kk];
            worst = worst.max(chordal_dist(f.eval(*w), target));
        }
        Ok(worst)
    }
}

/// A ray segment: the pulled-back path from the base circle at angle theta
/// down to level n, with the level crossing points recorded.
#[derive(Debug, Clone)]
pub struct RaySegment {
    pub points: Vec<Complex64>,
    /// w_0(theta), ..., w_n(theta): crossings of the equipotential levels.
    pub level_points: Vec<Complex64>,
}

/// Builds the ray segment at angle `theta` (in turns) down to level n.
///
/// The base piece at angle phi is the straight segment from f(w_0(phi)) in to
/// w_0(2 phi); deeper pieces are tracked preimages of the previous piece at
/// the doubled angle, grounded entirely outside the critical region.
pub fn ray_segment(
    f: &QuadSiegel,
    theta: f64,
    n: usize,
    base_radius: f64,
    base_samples: usize,
) -> Result<RaySegment> {
    if n < 1 {
        return Err(Error::InvalidParams {
            what: "need n >= 1".into(),
        });
    }
    if base_radius < MIN_BASE_RADIUS {
        return Err(Error::InvalidParams {
            what: format!("base radius {base_radius} below the escape bound 4"),
        });
    }
    let theta = theta.rem_euclid(1.0);
    let w0 = |phi: f64| Complex64::from_polar(base_radius, TAU * phi);
    let base_path = |phi: f64| -> Vec<Complex64> {
        let from = f.eval(w0(phi));
        let to = w0((2.0 * phi).rem_euclid(1.0));
        (0..=base_samples)
            .map(|i| {
                let t = i as f64 / base_samples as f64;
                from + (to - from) * t
            })
            .collect()
    };

    // paths[m] at stage k holds P_k(2^m theta); stage 0 from the base pieces.
    let mut paths: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for m in 0..n {
        let phi = (theta * 2f64.powi(m as i32)).rem_euclid(1.0);
        let piece = track_path(f.map(), &base_path(phi), w0(phi))?;
        paths.push(piece);
    }
    let mut full: Vec<Complex64> = Vec::new();
    let mut level_points = vec![w0(theta)];
    full.extend_from_slice(&paths[0]);
    level_points.push(*paths[0].last().unwrap());
    for k in 1..n {
        let mut next: Vec<Vec<Complex64>> = Vec::with_capacity(n - k);
        for m in 0..n - k {
            let start = *paths[m].last().unwrap();
            let piece = track_path(f.map(), &paths[m + 1], start)?;
            next.push(piece);
        }
        full.extend_from_slice(&next[0]);
        level_points.push(*next[0].last().unwrap());
        paths = next;
    }
    Ok(RaySegment {
        points: full,
        level_points,
    })
}

/// Distance from a point to a polyline (segment-wise).
pub fn dist_to_polyline(z: Complex64, pts: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for w in pts.windows(2) {
        best = best.min(dist_to_segment(z, w[0], w[1]));
    }
    best
}

fn dist_to_segment(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> QuadSiegel {
        QuadSiegel::with_multiplier(Complex64::new(0.0, 0.0))
    }

    #[test]
    fn base_level_is_the_circle() {
        let f = square();
        let fam = equipotential_family(&f, 0, 64, 8.0).unwrap();
        assert_eq!(fam.levels.len(), 1);
        for (j, z) in fam.levels[0].iter().enumerate() {
            let want = Complex64::from_polar(8.0, TAU * j as f64 / 64.0);
            assert!((z - want).norm() < 1e-12);
        }
    }

    #[test]
    fn square_map_levels_are_exact_circles() {
        let f = square();
        let r0 = 8.0f64;
        let fam = equipotential_family(&f, 6, 64, r0).unwrap();
        for (k, level) in fam.levels.iter().enumerate() {
            let want_r = r0.powf(1.0 / 2f64.powi(k as i32));
            for (j, z) in level.iter().enumerate() {
                assert!((z.norm() - want_r).abs() < 1e-10, "level {k}: |z| = {}", z.norm());
                let want = Complex64::from_polar(want_r, TAU * j as f64 / 64.0);
                assert!((z - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn functional_equation_residuals() {
        let f = QuadSiegel::new(&crate::rotation::RotationNumber::golden());
        let fam = equipotential_family(&f, 5, 128, 8.0).unwrap();
        for k in 0..5 {
            assert!(fam.functional_residual(&f, k).unwrap() < 1e-9);
        }
    }

    #[test]
    fn square_ray_is_a_real_segment() {
        let f = square();
        let ray = ray_segment(&f, 0.0, 5, 8.0, 32).unwrap();
        for z in &ray.points {
            assert!(z.im.abs() < 1e-10);
            assert!(z.re >= 8.0f64.powf(1.0 / 32.0) - 1e-9);
            assert!(z.re <= 64.0 + 1e-9);
        }
        let last = ray.level_points.last().unwrap();
        assert!((last.re - 8.0f64.powf(1.0 / 32.0)).abs() < 1e-9);
    }

    #[test]
    fn opposite_rays_disjoint_for_square() {
        let f = square();
        let a = ray_segment(&f, 0.0, 4, 8.0, 32).unwrap();
        let b = ray_segment(&f, 0.5, 4, 8.0, 32).unwrap();
        for z in &a.points {
            for w in &b.points {
                assert!((z - w).norm() > 0.1);
            }
        }
    }

    #[test]
    fn ray_functional_equation() {
        let f = QuadSiegel::new(&crate::rotation::RotationNumber::golden());
        let n = 4;
        let theta = 0.1375;
        let ray = ray_segment(&f, theta, n, 8.0, 48).unwrap();
        let parent = ray_segment(&f, (2.0 * theta).rem_euclid(1.0), n - 1, 8.0, 48).unwrap();
        // Image points of the deeper tail must land on the parent polyline.
        let skip = ray
            .points
            .iter()
            .position(|z| (z.norm() - 8.0).abs() < 1e-9)
            .unwrap_or(0);
        let mut worst = 0.0f64;
        for z in ray.points.iter().skip(skip) {
            let img = f.eval(*z);
            worst = worst.max(dist_to_polyline(img, &parent.points).min(
                // The outermost piece maps outside the parent segment range.
                if img.norm() >= 8.0 { 0.0 } else { f64::INFINITY },
            ));
        }
        assert!(worst < 1e-9, "worst residual {worst}");
    }
}
