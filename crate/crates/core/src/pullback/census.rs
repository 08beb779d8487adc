//! Component census for the grand orbit of the invariant disk: per-depth
//! counts of preimage components whose spherical diameter exceeds a
//! threshold.

use super::curve::{pullback_curve, JordanCurve};
use super::map::QuadSiegel;
use super::siegel::{inscribed_curve, siegel_boundary};
use crate::error::{Error, Result};
use crate::exec;
use crate::hypgeo::chordal_dist;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CensusOptions {
    /// Components below this chordal diameter are dropped (recorded, not
    /// recursed into). An acknowledged approximation: a component of diameter
    /// tau can have children up to ~sqrt-scale larger near the critical value.
    pub prune_diameter: f64,
    pub level_cap: usize,
    /// Radial scale of the inscribed seed polyline.
    pub seed_scale: f64,
    pub boundary_samples: usize,
    pub seed_vertices: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            prune_diameter: 2e-4,
            level_cap: 10_000,
            seed_scale: 0.85,
            boundary_samples: 20_000,
            seed_vertices: 512,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub epsilon: f64,
    /// counts[k] = number of components first appearing at depth k with
    /// chordal diameter > epsilon (depth 0 counts the disk and the basin of
    /// infinity marker).
    pub counts: Vec<usize>,
    pub pruned_per_depth: Vec<usize>,
    pub disk_diameter: f64,
    pub basin_diameter: f64,
    /// First depth from which all counts vanish (None if they never do).
    pub vanish_depth: Option<usize>,
}

/// Runs the census to the given depth.
///
/// Depth-k components are the new components of f^{-k}(disk): level 1 keeps
/// only the preimage component that is not the disk itself (detected by the
/// winding number around the fixed point); deeper preimages of new
/// components are always new.
pub fn fatou_census(
    f: &QuadSiegel,
    depth: usize,
    epsilon: f64,
    opts: &CensusOptions,
) -> Result<CensusReport> {
    if depth > 20 {
        return Err(Error::InvalidParams {
            what: format!("depth {depth} above the census cap 20"),
        });
    }
    let boundary = siegel_boundary(f, opts.boundary_samples)?;
    let seed = inscribed_curve(&boundary, opts.seed_scale, opts.seed_vertices)?;
    let disk_diameter = chordal_diam_of(&boundary);
    let basin_diameter = basin_of_infinity_diameter(f);

    let mut counts = vec![0usize; depth + 1];
    let mut pruned = vec![0usize; depth + 1];
    counts[0] = usize::from(disk_diameter > epsilon) + usize::from(basin_diameter > epsilon);

    // Level 1: drop the component that is the disk again.
    let mut frontier: Vec<JordanCurve> = Vec::new();
    if depth >= 1 {
        let out = pullback_curve(f.map(), &seed)?;
        for (comp, _) in out.components {
            if comp.winding_number(Complex64::new(0.0, 0.0)) != 0 {
                continue; // the disk itself
            }
            let d = comp.chordal_diam();
            if d > epsilon {
                counts[1] += 1;
            }
            if d >= opts.prune_diameter {
                frontier.push(comp);
            } else {
                pruned[1] += 1;
            }
        }
    }

    for k in 2..=depth {
        if frontier.is_empty() {
            break;
        }
        let results = exec::map_slice(&frontier, |comp| pullback_curve(f.map(), comp));
        let mut next = Vec::new();
        for res in results {
            let out = res?;
            for (comp, _) in out.components {
                if next.len() >= opts.level_cap {
                    return Err(Error::NodeCap {
                        cap: opts.level_cap,
                    });
                }
                let d = comp.chordal_diam();
                if d > epsilon {
                    counts[k] += 1;
                }
                if d >= opts.prune_diameter {
                    next.push(comp);
                } else {
                    pruned[k] += 1;
                }
            }
        }
        frontier = next;
    }

    let vanish_depth = (0..counts.len())
        .find(|&k| counts[k..].iter().all(|&c| c == 0));
    Ok(CensusReport {
        epsilon,
        counts,
        pruned_per_depth: pruned,
        disk_diameter,
        basin_diameter,
        vanish_depth,
    })
}

fn chordal_diam_of(pts: &[Complex64]) -> f64 {
    let step = (pts.len() / 512).max(1);
    let dec: Vec<&Complex64> = pts.iter().step_by(step).collect();
    let mut best = 0.0f64;
    for i in 0..dec.len() {
        for j in i + 1..dec.len() {
            best = best.max(chordal_dist(*dec[i], *dec[j]));
        }
    }
    best
}

/// Chordal diameter of the basin of infinity, estimated from a coarse escape
/// grid together with the point at infinity.
fn basin_of_infinity_diameter(f: &QuadSiegel) -> f64 {
    let inf = Complex64::new(f64::INFINITY, 0.0);
    let mut best = 0.0f64;
    for i in 0..64 {
        for j in 0..64 {
            let z = Complex64::new(
                -2.0 + 4.0 * i as f64 / 63.0,
                -2.0 + 4.0 * j as f64 / 63.0,
            );
            let mut w = z;
            let mut escaped = false;
            for _ in 0..200 {
                w = f.eval(w);
                if w.norm() > 1e6 {
                    escaped = true;
                    break;
                }
            }
            if escaped {
                best = best.max(chordal_dist(z, inf));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::RotationNumber;

    #[test]
    fn nothing_is_antipodally_huge() {
        let f = QuadSiegel::new(&RotationNumber::golden());
        let rep = fatou_census(&f, 2, 2.0, &CensusOptions::default()).unwrap();
        assert!(rep.counts.iter().all(|&c| c == 0));
        assert_eq!(rep.vanish_depth, Some(0));
    }

    #[test]
    fn depth_zero_counts_disk_when_small_epsilon() {
        let f = QuadSiegel::new(&RotationNumber::golden());
        let rep = fatou_census(&f, 0, 0.1, &CensusOptions::default()).unwrap();
        assert_eq!(rep.counts.len(), 1);
        assert_eq!(rep.counts[0], 2, "disk + basin marker: {rep:?}");
    }

    #[test]
    fn level_one_finds_the_mirror_component() {
        let f = QuadSiegel::new(&RotationNumber::golden());
        let rep = fatou_census(&f, 1, 0.05, &CensusOptions::default()).unwrap();
        assert_eq!(rep.counts[1], 1, "{rep:?}");
    }
}
