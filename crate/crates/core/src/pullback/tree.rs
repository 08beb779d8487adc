use super::curve::{pullback_curve, JordanCurve};
use super::map::RationalMap;
use crate::error::{Error, Result};
use crate::exec;
use num_complex::Complex64;
use serde::Serialize;

/// Default per-level node cap.
pub const LEVEL_NODE_CAP: usize = 10_000;

/// The shortest angular interval (around the origin) containing the points
/// where a component touches the sampled invariant-curve boundary.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArcTouch {
    pub theta_lo: f64,
    pub theta_hi: f64,
}

/// One component of f^{-n}(V_0) with its provenance and size.
#[derive(Debug, Clone, Serialize)]
pub struct PullbackNode {
    pub curve: JordanCurve,
    pub depth: usize,
    pub parent: Option<usize>,
    /// Branch label: component indices chosen at each level (root-track signature).
    pub branch: Vec<u8>,
    pub chordal_diam: f64,
    pub touches_boundary: bool,
    pub touch_arc: Option<ArcTouch>,
}

#[derive(Debug, Clone, Copy)]
pub enum TreePolicy {
    /// All components per level, capped.
    All,
    /// One seeded random branch per level.
    RandomBranch { seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct PullbackTree {
    pub nodes: Vec<PullbackNode>,
    /// Node ids per depth.
    pub levels: Vec<Vec<usize>>,
    /// Branches pruned due to tracking failures.
    pub pruned: Vec<String>,
}

impl PullbackTree {
    /// Per-depth maximum chordal diameter; length depth + 1.
    pub fn max_diam_profile(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|ids| {
                ids.iter()
                    .map(|&i| self.nodes[i].chordal_diam)
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

/// Branch-tracked pull-back tree of a Jordan curve.
///
/// `boundary` (when given) is the sampled invariant boundary used for
/// touch detection with tolerance `touch_tol`.
pub fn pullback_tree(
    f: &RationalMap,
    seed_curve: &JordanCurve,
    depth: usize,
    policy: TreePolicy,
    boundary: Option<&[Complex64]>,
    touch_tol: f64,
) -> Result<PullbackTree> {
    if f.degree() < 2 {
        return Err(Error::InvalidParams {
            what: "pull-back trees need degree >= 2".into(),
        });
    }
    let root = make_node(seed_curve.clone(), 0, None, Vec::new(), boundary, touch_tol);
    let mut nodes = vec![root];
    let mut levels = vec![vec![0usize]];
    let mut pruned = Vec::new();

    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = match policy {
        TreePolicy::RandomBranch { seed } => Some(rand_chacha::ChaCha8Rng::seed_from_u64(seed)),
        TreePolicy::All => None,
    };

    for d in 0..depth {
        let current = levels[d].clone();
        let selected: Vec<usize> = match rng.as_mut() {
            Some(r) => {
                if current.is_empty() {
                    break;
                }
                vec![current[r.gen_range(0..current.len())]]
            }
            None => current,
        };
        // Components of distinct parents are independent.
        let results: Vec<(usize, Result<super::curve::PullbackComponents>)> = {
            let f_ref = &f;
            let node_curves: Vec<(usize, JordanCurve)> = selected
                .iter()
                .map(|&id| (id, nodes[id].curve.clone()))
                .collect();
            exec::map_slice(&node_curves, move |(id, curve)| {
                (*id, pullback_curve(f_ref, curve))
            })
        };
        let mut next_level = Vec::new();
        for (parent_id, res) in results {
            match res {
                Ok(out) => {
                    for (ci, (comp, _loops)) in out.components.into_iter().enumerate() {
                        if next_level.len() >= LEVEL_NODE_CAP {
                            return Err(Error::NodeCap {
                                cap: LEVEL_NODE_CAP,
                            });
                        }
                        let mut branch = nodes[parent_id].branch.clone();
                        branch.push(ci as u8);
                        let id = nodes.len();
                        nodes.push(make_node(
                            comp,
                            d + 1,
                            Some(parent_id),
                            branch,
                            boundary,
                            touch_tol,
                        ));
                        next_level.push(id);
                    }
                    for w in out.warnings {
                        pruned.push(format!("depth {}: {w}", d + 1));
                    }
                }
                Err(e) => pruned.push(format!("depth {} node {parent_id}: {e}", d + 1)),
            }
        }
        if next_level.is_empty() {
            break;
        }
        levels.push(next_level);
    }
    Ok(PullbackTree {
        nodes,
        levels,
        pruned,
    })
}

fn make_node(
    curve: JordanCurve,
    depth: usize,
    parent: Option<usize>,
    branch: Vec<u8>,
    boundary: Option<&[Complex64]>,
    touch_tol: f64,
) -> PullbackNode {
    let chordal_diam = curve.chordal_diam();
    let (touches, arc) = match boundary {
        Some(b) => touch_arc(&curve, b, touch_tol),
        None => (false, None),
    };
    PullbackNode {
        curve,
        depth,
        parent,
        branch,
        chordal_diam,
        touches_boundary: touches,
        touch_arc: arc,
    }
}

/// Finds the boundary samples within `tol` of the curve and wraps them in the
/// shortest angular interval around the origin.
fn touch_arc(curve: &JordanCurve, boundary: &[Complex64], tol: f64) -> (bool, Option<ArcTouch>) {
    let mut angles = Vec::new();
    let pts = curve.open_points();
    for b in boundary {
        let mut close = false;
        for p in pts {
            if (p - b).norm() < tol {
                close = true;
                break;
            }
        }
        if close {
            angles.push(b.arg());
        }
    }
    if angles.is_empty() {
        return (false, None);
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Shortest containing interval: complement of the largest gap.
    let mut best_gap = 0.0;
    let mut split = 0usize;
    for i in 0..angles.len() {
        let next = angles[(i + 1) % angles.len()];
        let gap = (next - angles[i]).rem_euclid(std::f64::consts::TAU);
        if gap > best_gap {
            best_gap = gap;
            split = i;
        }
    }
    let lo = angles[(split + 1) % angles.len()];
    let hi = angles[split];
    (
        true,
        Some(ArcTouch {
            theta_lo: lo,
            theta_hi: hi,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn depth_zero_is_the_seed() {
        let f = RationalMap::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let seed = JordanCurve::circle(c(3.0, 0.0), 0.5, 64);
        let tree = pullback_tree(&f, &seed, 0, TreePolicy::All, None, 1e-3).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        let profile = tree.max_diam_profile();
        assert_eq!(profile.len(), 1);
        assert!((profile[0] - seed.chordal_diam()).abs() < 1e-12);
    }

    #[test]
    fn node_count_bounded_by_degree_power() {
        let f = RationalMap::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let seed = JordanCurve::circle(c(3.0, 0.0), 0.5, 64);
        let tree = pullback_tree(&f, &seed, 4, TreePolicy::All, None, 1e-3).unwrap();
        for (d, level) in tree.levels.iter().enumerate() {
            assert!(level.len() <= 2usize.pow(d as u32));
        }
    }

    #[test]
    fn degree_one_rejected() {
        let f = RationalMap::polynomial(vec![c(0.1, 0.0), c(1.0, 0.0)]).unwrap();
        let seed = JordanCurve::circle(c(3.0, 0.0), 0.5, 64);
        match pullback_tree(&f, &seed, 2, TreePolicy::All, None, 1e-3) {
            Err(Error::InvalidParams { .. }) => {}
            other => panic!("expected InvalidParams, got {other:?}"),
        }
    }

    #[test]
    fn random_branch_single_path() {
        let f = RationalMap::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let seed = JordanCurve::circle(c(3.0, 0.0), 0.5, 64);
        let tree = pullback_tree(
            &f,
            &seed,
            6,
            TreePolicy::RandomBranch { seed: 1 },
            None,
            1e-3,
        )
        .unwrap();
        for level in tree.levels.iter().skip(1) {
            assert!(level.len() <= 2);
        }
        assert_eq!(tree.levels.len(), 7);
    }
}
