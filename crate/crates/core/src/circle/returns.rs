use super::arc::CircleArc;
use super::map::CircleMap;
use crate::error::{Error, Result};
use crate::exec;
use serde::Serialize;

/// Default iterate cap for first-return searches.
pub const DEFAULT_RETURN_CAP: usize = 10_000_000;

/// First return time N(x, I) = min { n >= 1 : G^n(x) in I }.
pub fn first_return(map: &CircleMap, arc: CircleArc, x: f64, cap: usize) -> Result<usize> {
    let mut theta = x;
    for n in 1..=cap {
        theta = map.eval(theta);
        if arc.contains(theta) {
            return Ok(n);
        }
    }
    Err(Error::CapExceeded { cap })
}

/// Min/max first-return statistics over a sample grid inside the arc.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReturnStats {
    pub min_return: usize,
    pub max_return: usize,
    pub ratio: f64,
}

pub fn return_stats(
    map: &CircleMap,
    arc: CircleArc,
    samples: usize,
    cap: usize,
) -> Result<ReturnStats> {
    if samples < 2 {
        return Err(Error::InvalidParams {
            what: "need at least 2 samples".into(),
        });
    }
    let results = exec::map_indexed(samples, |i| {
        // Interior grid, offset from both endpoints.
        let t = (i as f64 + 0.5) / samples as f64;
        first_return(map, arc, arc.at_fraction(t), cap)
    });
    let mut min_return = usize::MAX;
    let mut max_return = 0usize;
    for r in results {
        let n = r?;
        min_return = min_return.min(n);
        max_return = max_return.max(n);
    }
    Ok(ReturnStats {
        min_return,
        max_return,
        ratio: max_return as f64 / min_return as f64,
    })
}

/// First and second return data for a single point, together with the
/// geometry of the three points x, G^{n1}(x), G^{n2}(x).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReturnTriple {
    pub n1: usize,
    pub n2: usize,
    /// sigma of the smallest arc determined by the three points, divided by sigma(I).
    pub min_arc_ratio: f64,
    /// Whether the two returns land on opposite sides of x within the arc.
    pub opposite_sides: bool,
}

pub fn return_triple(
    map: &CircleMap,
    mu: &super::measure::InvariantMeasure,
    arc: CircleArc,
    x: f64,
    cap: usize,
) -> Result<ReturnTriple> {
    let n1 = first_return(map, arc, x, cap)?;
    let mut y = x;
    for _ in 0..n1 {
        y = map.eval(y);
    }
    let m = first_return(map, arc, y, cap)?;
    let n2 = n1 + m;
    let mut z = y;
    for _ in 0..m {
        z = map.eval(z);
    }

    // Smallest sigma over the shorter arc of each pair.
    let sigma_i = mu.sigma(arc);
    let mut min_sigma = f64::INFINITY;
    for (p, q) in [(x, y), (y, z), (x, z)] {
        let fwd = CircleArc::new(p, q);
        let bwd = CircleArc::new(q, p);
        if let (Ok(f), Ok(b)) = (fwd, bwd) {
            min_sigma = min_sigma.min(mu.sigma(f).min(mu.sigma(b)));
        }
    }
    let fx = arc.fraction_of(x);
    let (fy, fz) = (arc.fraction_of(y), arc.fraction_of(z));
    let opposite_sides = (fy < fx) != (fz < fx);
    Ok(ReturnTriple {
        n1,
        n2,
        min_arc_ratio: min_sigma / sigma_i,
        opposite_sides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::measure::InvariantMeasure;
    use std::f64::consts::TAU;

    const GOLDEN: f64 = 0.618033988749894848;

    #[test]
    fn full_circle_returns_immediately() {
        let map = CircleMap::rotation(GOLDEN);
        let arc = CircleArc::punctured(1.0);
        assert_eq!(first_return(&map, arc, 2.0, 10).unwrap(), 1);
        let stats = return_stats(&map, arc, 100, 10).unwrap();
        assert_eq!(stats.min_return, 1);
        assert_eq!(stats.max_return, 1);
        assert_eq!(stats.ratio, 1.0);
    }

    #[test]
    fn tiny_arc_small_cap_exceeds() {
        let map = CircleMap::rotation(GOLDEN);
        let arc = CircleArc::new(0.0, 1e-6).unwrap();
        match first_return(&map, arc, 0.5e-6, 10) {
            Err(Error::CapExceeded { cap: 10 }) => {}
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn golden_rotation_level_scale_returns() {
        // Arc of length 0.4 turns: every return time is a denominator scale
        // q1 = 1, q2 = 2 or q3 = 3 (the 1 occurs only in the last
        // alpha - 0.6 = 0.018 turns of the arc, where one step wraps back in).
        let map = CircleMap::rotation(GOLDEN);
        let arc = CircleArc::new(0.0, TAU * 0.4).unwrap();
        let stats = return_stats(&map, arc, 200, 100).unwrap();
        assert_eq!(stats.min_return, 1);
        assert_eq!(stats.max_return, 3);
        // Away from the wrap zone the returns are exactly {2, 3}.
        let inner = CircleArc::new(0.0, TAU * 0.38).unwrap();
        for i in 0..100 {
            let x = inner.at_fraction((i as f64 + 0.5) / 100.0);
            let n = first_return(&map, arc, x, 100).unwrap();
            assert!(n == 2 || n == 3, "n = {n}");
        }
    }

    #[test]
    fn triple_return_trivial_case() {
        let map = CircleMap::rotation(GOLDEN);
        let mu = InvariantMeasure::new(map.clone(), 10_000, 0.0).unwrap();
        let arc = CircleArc::punctured(1.0);
        let t = return_triple(&map, &mu, arc, 2.0, 100).unwrap();
        assert_eq!(t.n1, 1);
        assert_eq!(t.n2, 2);
    }

    #[test]
    fn triple_return_midpoint_opposite_sides() {
        let map = CircleMap::rotation(GOLDEN);
        let mu = InvariantMeasure::new(map.clone(), 50_000, 0.0).unwrap();
        // Level-q_k arc around x: take the closest-return gap scale at k = 4
        // (q4 = 5, gap ~ 0.09 turns) centered at x.
        let gap = TAU * 0.09016994;
        let x = 1.0;
        let arc = CircleArc::new(x - gap, x + gap).unwrap();
        let t = return_triple(&map, &mu, arc, x, 1000).unwrap();
        assert!(t.opposite_sides);
    }
}
