use super::map::RationalMap;
use crate::error::{Error, Result};
use crate::hypgeo::chordal_dist;
use num_complex::Complex64;
use serde::Serialize;

/// Per-curve vertex cap; tracking output is decimated down to this.
pub const VERTEX_CAP: usize = 1 << 14;
/// Minimal margin between a curve and the critical values.
pub const CRITICAL_MARGIN: f64 = 1e-6;
/// Closure detection tolerance for monodromy loops.
const LOOP_TOL: f64 = 1e-8;
/// Maximal segment-bisection depth during tracking.
const MAX_REFINE: usize = 48;

/// Closed polyline in the plane; the first vertex is repeated at the end.
#[derive(Debug, Clone, Serialize)]
pub struct JordanCurve {
    points: Vec<Complex64>,
}

impl JordanCurve {
    pub fn new(mut points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 16 {
            return Err(Error::InvalidParams {
                what: format!("curve needs at least 16 vertices, got {}", points.len()),
            });
        }
        let first = points[0];
        let last = *points.last().unwrap();
        if (first - last).norm() > 1e-12 {
            points.push(first);
        }
        Ok(Self { points })
    }

    pub fn circle(center: Complex64, radius: f64, n: usize) -> Self {
        let mut points: Vec<Complex64> = (0..n)
            .map(|i| center + Complex64::from_polar(radius, std::f64::consts::TAU * i as f64 / n as f64))
            .collect();
        points.push(points[0]);
        Self { points }
    }

    /// All vertices including the closing repeat.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Vertices without the closing repeat.
    pub fn open_points(&self) -> &[Complex64] {
        &self.points[..self.points.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Chordal diameter over (decimated) vertices.
    pub fn chordal_diam(&self) -> f64 {
        let pts = decimate(self.open_points(), 1024);
        let mut best = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                best = best.max(chordal_dist(pts[i], pts[j]));
            }
        }
        best
    }

    pub fn euclidean_diam(&self) -> f64 {
        let pts = decimate(self.open_points(), 1024);
        let mut best = 0.0f64;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                best = best.max((pts[i] - pts[j]).norm());
            }
        }
        best
    }

    pub fn centroid(&self) -> Complex64 {
        let pts = self.open_points();
        pts.iter().sum::<Complex64>() / pts.len() as f64
    }

    /// Winding number of the curve around a point (0 when outside).
    pub fn winding_number(&self, z: Complex64) -> i32 {
        let mut total = 0.0f64;
        for w in self.points.windows(2) {
            let a = w[0] - z;
            let b = w[1] - z;
            total += (b / a).arg();
        }
        (total / std::f64::consts::TAU).round() as i32
    }

    /// Simplicity at polyline resolution (decimated O(n^2) check).
    pub fn is_simple(&self) -> bool {
        let pts = decimate(&self.points, 512);
        let n = pts.len();
        for i in 0..n - 1 {
            for j in i + 2..n - 1 {
                if i == 0 && j == n - 2 {
                    continue;
                }
                if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn min_dist_to(&self, targets: &[Complex64]) -> f64 {
        let mut best = f64::INFINITY;
        for p in self.open_points() {
            for t in targets {
                best = best.min((p - t).norm());
            }
        }
        best
    }

    /// Radial perturbation away from the centroid (degenerate-input rescue).
    pub fn perturb_radially(&self, amount: f64) -> Self {
        let c = self.centroid();
        let points = self
            .points
            .iter()
            .map(|&p| {
                let dir = p - c;
                let n = dir.norm();
                if n > 0.0 {
                    p + dir / n * amount
                } else {
                    p
                }
            })
            .collect();
        Self { points }
    }
}

fn decimate(pts: &[Complex64], max: usize) -> Vec<Complex64> {
    if pts.len() <= max {
        return pts.to_vec();
    }
    let step = pts.len() as f64 / max as f64;
    (0..max)
        .map(|i| pts[(i as f64 * step) as usize])
        .collect()
}

fn segments_cross(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let cross = |o: Complex64, p: Complex64, q: Complex64| {
        (p.re - o.re) * (q.im - o.im) - (p.im - o.im) * (q.re - o.re)
    };
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0))
}

/// One tracking step: preimages of `target` warm-started from the previous
/// fiber, matched by the nearest root to `current`. The step is accepted only
/// if the matched root moved less than a third of the minimal pairwise root
/// gap, which prevents branch swaps near critical values.
fn step_once(
    f: &RationalMap,
    current: Complex64,
    fiber: &[Complex64],
    target: Complex64,
) -> Result<(Complex64, Vec<Complex64>)> {
    let finite_warm: Vec<Complex64> = fiber.iter().copied().filter(|w| w.re.is_finite()).collect();
    let warm = if finite_warm.len() == f.degree() {
        Some(finite_warm.as_slice())
    } else {
        None
    };
    let roots = f.preimages_warm(target, warm)?;
    let (mut best_i, mut best_d) = (0usize, f64::INFINITY);
    for (i, r) in roots.iter().enumerate() {
        let d = if r.re.is_finite() {
            (r - current).norm()
        } else {
            f64::INFINITY
        };
        if d < best_d {
            best_i = i;
            best_d = d;
        }
    }
    let mut gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i].re.is_finite() && roots[j].re.is_finite() {
                gap = gap.min((roots[i] - roots[j]).norm());
            }
        }
    }
    if best_d < gap / 3.0 {
        let w = roots[best_i];
        Ok((w, roots))
    } else {
        Err(Error::TrackingLost {
            what: format!("step {best_d:.3e} vs gap {gap:.3e}"),
        })
    }
}

/// Tracks the inverse branch through `f` along an open path, starting from
/// the preimage `w0` of `path[0]`. Returns the accepted preimage points
/// (refined adaptively, including all path vertices).
pub fn track_path(f: &RationalMap, path: &[Complex64], w0: Complex64) -> Result<Vec<Complex64>> {
    if path.len() < 2 {
        return Err(Error::InvalidParams {
            what: "path needs at least 2 points".into(),
        });
    }
    let mut out = Vec::with_capacity(path.len());
    let mut current = w0;
    let mut fiber = f.preimages(path[0])?;
    out.push(current);
    for seg in path.windows(2) {
        let (mut a, b) = (seg[0], seg[1]);
        // Stack of pending subsegment endpoints (adaptive bisection).
        let mut pending = vec![b];
        let mut depth = 0usize;
        while let Some(t) = pending.last().copied() {
            match step_once(f, current, &fiber, t) {
                Ok((w, roots)) => {
                    current = w;
                    fiber = roots;
                    a = t;
                    pending.pop();
                    out.push(current);
                    depth = depth.saturating_sub(1);
                }
                Err(_) if depth < MAX_REFINE => {
                    pending.push(0.5 * (a + t));
                    depth += 1;
                }
                Err(e) => return Err(e),
            }
            if out.len() > 64 * VERTEX_CAP {
                return Err(Error::TrackingLost {
                    what: "refinement exploded".into(),
                });
            }
        }
    }
    Ok(out)
}

/// Outcome of pulling back a closed curve: the preimage components with
/// their monodromy loop counts.
#[derive(Debug, Clone)]
pub struct PullbackComponents {
    pub components: Vec<(JordanCurve, usize)>,
    pub warnings: Vec<String>,
}

/// All components of f^{-1}(curve), by tracking each starting root around
/// the input loop until it closes up; distinct monodromy cycles are distinct
/// components. The input must avoid the critical values of f.
pub fn pullback_curve(f: &RationalMap, curve: &JordanCurve) -> Result<PullbackComponents> {
    let mut warnings = Vec::new();
    let cvs: Vec<Complex64> = f
        .critical_values()
        .into_iter()
        .filter(|v| v.re.is_finite() && v.im.is_finite())
        .collect();
    let mut work = curve.clone();
    if work.min_dist_to(&cvs) < CRITICAL_MARGIN {
        work = work.perturb_radially(CRITICAL_MARGIN);
        warnings.push("curve perturbed radially by 1e-6 away from a critical value".into());
        if work.min_dist_to(&cvs) < CRITICAL_MARGIN {
            return Err(Error::CriticalValueOnCurve {
                margin: CRITICAL_MARGIN,
            });
        }
    }

    let base = work.points();
    let start_roots: Vec<Complex64> = f
        .preimages(base[0])?
        .into_iter()
        .filter(|w| w.re.is_finite())
        .collect();
    let mut consumed = vec![false; start_roots.len()];
    let mut components = Vec::new();

    for i in 0..start_roots.len() {
        if consumed[i] {
            continue;
        }
        consumed[i] = true;
        let mut loops = 0usize;
        let mut all_points: Vec<Complex64> = Vec::new();
        let mut w = start_roots[i];
        loop {
            let tracked = track_path(f, base, w)?;
            loops += 1;
            all_points.extend_from_slice(&tracked[..tracked.len() - 1]);
            w = *tracked.last().unwrap();
            if (w - start_roots[i]).norm() < LOOP_TOL {
                break;
            }
            // Mark the intermediate start root as part of this component.
            let mut matched = false;
            for (j, r) in start_roots.iter().enumerate() {
                if (w - r).norm() < LOOP_TOL {
                    if consumed[j] && j != i {
                        return Err(Error::TrackingLost {
                            what: "monodromy cycle collision".into(),
                        });
                    }
                    consumed[j] = true;
                    matched = true;
                    break;
                }
            }
            if !matched {
                return Err(Error::TrackingLost {
                    what: format!("loop endpoint missed every start root by > {LOOP_TOL:e}"),
                });
            }
            if loops > f.degree() {
                return Err(Error::TrackingLost {
                    what: "loop count exceeded the degree".into(),
                });
            }
        }
        let pts = decimate(&all_points, VERTEX_CAP);
        components.push((JordanCurve::new(pts)?, loops));
    }
    Ok(PullbackComponents {
        components,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square_map() -> RationalMap {
        RationalMap::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn circle_away_from_origin_gives_two_components() {
        // f(z) = z^2, unit circle centered at 3: no critical value (0) inside,
        // so the monodromy is trivial and each root closes after one loop.
        let f = square_map();
        let curve = JordanCurve::circle(c(3.0, 0.0), 1.0, 128);
        let out = pullback_curve(&f, &curve).unwrap();
        assert_eq!(out.components.len(), 2);
        for (comp, loops) in &out.components {
            assert_eq!(*loops, 1);
            for p in comp.open_points() {
                assert!(chordal_dist(f.eval(*p), f.eval(*p)) == 0.0);
            }
        }
    }

    #[test]
    fn circle_around_critical_value_winds_twice() {
        let f = square_map();
        let curve = JordanCurve::circle(c(0.0, 0.0), 2.0, 128);
        let out = pullback_curve(&f, &curve).unwrap();
        assert_eq!(out.components.len(), 1);
        assert_eq!(out.components[0].1, 2);
    }

    #[test]
    fn residual_contract_on_vertices() {
        let f = square_map();
        let curve = JordanCurve::circle(c(3.0, 0.0), 1.0, 64);
        let out = pullback_curve(&f, &curve).unwrap();
        for (comp, _) in &out.components {
            for w in comp.open_points() {
                // Every tracked vertex is a polished preimage of some input point.
                let img = f.eval(*w);
                let best = curve
                    .points()
                    .iter()
                    .map(|p| chordal_dist(img, *p))
                    .fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9, "vertex residual {best}");
            }
        }
    }

    #[test]
    fn winding_number_detects_interior() {
        let curve = JordanCurve::circle(c(1.0, 1.0), 0.5, 64);
        assert_eq!(curve.winding_number(c(1.0, 1.0)), 1);
        assert_eq!(curve.winding_number(c(3.0, 3.0)), 0);
    }

    #[test]
    fn perturbation_on_critical_value_contact() {
        let f = square_map();
        // Curve passing exactly through the critical value 0.
        let curve = JordanCurve::circle(c(1.0, 0.0), 1.0, 128);
        let out = pullback_curve(&f, &curve).unwrap();
        assert!(!out.warnings.is_empty());
    }

    #[test]
    fn simplicity_check() {
        let curve = JordanCurve::circle(c(0.0, 0.0), 1.0, 64);
        assert!(curve.is_simple());
        // Figure-eight built from two touching loops is not simple.
        let mut pts = Vec::new();
        for i in 0..32 {
            let t = std::f64::consts::TAU * i as f64 / 32.0;
            pts.push(c(t.cos() - 1.0, t.sin()));
        }
        for i in 0..32 {
            let t = std::f64::consts::TAU * i as f64 / 32.0;
            pts.push(c(1.0 - t.cos(), -t.sin()));
        }
        let eight = JordanCurve::new(pts).unwrap();
        assert!(!eight.is_simple());
    }

    #[test]
    fn track_open_path() {
        let f = square_map();
        // Path from 4 to 9 along the real axis; branch through +2.
        let path: Vec<Complex64> = (0..=50).map(|i| c(4.0 + 5.0 * i as f64 / 50.0, 0.0)).collect();
        let tracked = track_path(&f, &path, c(2.0, 0.0)).unwrap();
        let end = *tracked.last().unwrap();
        assert!((end - c(3.0, 0.0)).norm() < 1e-9);
    }
}
