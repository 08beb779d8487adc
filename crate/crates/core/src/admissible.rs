//! Successor rules for arcs on the circle, admissible sequence generation,
//! and the shortening/deviation measurements.
//!
//! An arc is pulled back either through the unique non-critical inverse
//! branch, or through a critical branch attached to a critical point, with
//! the child's dynamical length prescribed by the rule type: (i) shrink to
//! (1 - eta/3), (ii) grow to (1 + delta), (iii) halve.

use crate::circle::{CircleArc, CircleMap, InvariantMeasure, Side};
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Parameters of the successor rules and the depth used downstream.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AdmissibleParams {
    pub delta: f64,
    pub eta: f64,
    /// Hyperbolic depth for half neighborhoods built on the sequence.
    pub d: f64,
    pub r0_prime: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl Default for AdmissibleParams {
    fn default() -> Self {
        Self {
            delta: 0.01,
            eta: 0.2,
            // log cot(pi/32), the depth whose boundary angle is pi/8.
            d: 2.3124383412727525,
            r0_prime: 0.25,
            r1: 0.1,
            r2: 0.05,
            r3: 0.0125,
        }
    }
}

impl AdmissibleParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.delta && self.delta < self.eta && self.eta < 0.5) {
            return Err(Error::InvalidParams {
                what: format!("need 0 < delta < eta < 1/2, got {}, {}", self.delta, self.eta),
            });
        }
        if self.delta > self.eta / 10.0 {
            return Err(Error::InvalidParams {
                what: format!("delta {} must be <= eta/10 = {}", self.delta, self.eta / 10.0),
            });
        }
        if self.d <= 0.0 {
            return Err(Error::InvalidParams {
                what: "depth d must be positive".into(),
            });
        }
        let r = [self.r0_prime, self.r1, self.r2, self.r3];
        if r.iter().any(|&x| x <= 0.0) || r.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams {
                what: "thresholds must be positive and decreasing".into(),
            });
        }
        Ok(())
    }

    /// Same rule set at a different scale: all thresholds multiplied by s.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            r0_prime: self.r0_prime * s,
            r1: self.r1 * s,
            r2: self.r2 * s,
            r3: self.r3 * s,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SuccessorKind {
    NonCritical,
    CritI,
    CritII,
    CritIII,
}

impl SuccessorKind {
    pub fn is_critical(&self) -> bool {
        !matches!(self, SuccessorKind::NonCritical)
    }
}

/// One pull-back step: child is a successor of parent.
#[derive(Debug, Clone, Serialize)]
pub struct SuccessorStep {
    pub parent: CircleArc,
    pub child: CircleArc,
    pub kind: SuccessorKind,
    /// Which preimage branch (1..=l-1) for critical kinds; 0 when non-critical.
    pub branch_index: usize,
    /// Singular points of the inverse branch: the adjacent critical values
    /// (v-, v+), or the single v for a middle branch.
    pub singular_points: Vec<f64>,
    /// The attached critical point for critical kinds.
    pub critical_point: Option<f64>,
    pub sigma_parent: f64,
    pub sigma_child: f64,
    /// sigma solver tolerance recorded for audit.
    pub sigma_tol: f64,
}

/// Computes every successor the rules permit for the arc `I`.
///
/// Case split: a critical value inside I gives type (i)/(ii) branches on both
/// sides of the critical point; a critical value in the 2-delta fattening
/// (but not in I) gives type (iii) branches alongside the non-critical
/// successor; otherwise only the non-critical successor exists.
pub fn successors(
    map: &CircleMap,
    mu: &InvariantMeasure,
    arc: CircleArc,
    params: &AdmissibleParams,
) -> Result<Vec<SuccessorStep>> {
    params.validate()?;
    let sigma_i = mu.sigma(arc);
    if sigma_i >= params.r2 / 2.0 {
        return Err(Error::ArcTooLong {
            sigma: sigma_i,
            limit: params.r2 / 2.0,
        });
    }
    if sigma_i <= 0.0 {
        return Err(Error::InvalidParams {
            what: "arc has zero measure at the orbit resolution".into(),
        });
    }
    let tol = mu.resolution();

    let cvs = map.circle_critical_values();
    let doubled = mu.scale_arc(arc, 2.0)?;
    let crowded = cvs
        .iter()
        .filter(|&&v| doubled.contains(v) || on_closure(doubled, v))
        .count();
    if crowded > 1 {
        return Err(Error::AmbiguousCriticalValue);
    }

    let fattened = mu.scale_arc(arc, 1.0 + 2.0 * params.delta)?;
    let cv_inside = cvs.iter().copied().find(|&v| arc.contains(v));
    let cv_band = cvs
        .iter()
        .copied()
        .find(|&v| fattened.contains(v) && !arc.contains(v) && !on_closure(arc, v));

    let mut steps = Vec::new();
    match cv_inside {
        Some(v) => {
            // Case (1): types (i)/(ii), one step per side and branch.
            let cp = critical_point_for_value(map, v)?;
            let branches = branch_count(cp);
            for side in [Side::Right, Side::Left] {
                let outer = match side {
                    // (c, x) covers the preimage of (v, b); the rule tests
                    // the length left between v and that endpoint.
                    Side::Right => CircleArc::new(v, arc.right()),
                    Side::Left => CircleArc::new(arc.left(), v),
                }?;
                let (kind, target) = if mu.sigma(outer) < (1.0 - params.eta) * sigma_i {
                    (SuccessorKind::CritI, (1.0 - params.eta / 3.0) * sigma_i)
                } else {
                    (SuccessorKind::CritII, (1.0 + params.delta) * sigma_i)
                };
                for branch in 1..=branches {
                    let child = mu.arc_with_sigma(cp.angle, side, target)?;
                    steps.push(SuccessorStep {
                        parent: arc,
                        child,
                        kind,
                        branch_index: branch,
                        singular_points: singular_pair(map, v, branch),
                        critical_point: Some(cp.angle),
                        sigma_parent: sigma_i,
                        sigma_child: mu.sigma(child),
                        sigma_tol: tol,
                    });
                }
            }
        }
        None => {
            // Non-critical successor exists whenever no critical value is in I.
            let child = map.preimage_arc(arc)?;
            steps.push(SuccessorStep {
                parent: arc,
                child,
                kind: SuccessorKind::NonCritical,
                branch_index: 0,
                singular_points: adjacent_critical_values(map),
                critical_point: None,
                sigma_parent: sigma_i,
                sigma_child: mu.sigma(child),
                sigma_tol: tol,
            });
            if let Some(v) = cv_band {
                // Case (2): type (iii) branches on both sides of c.
                let cp = critical_point_for_value(map, v)?;
                let branches = branch_count(cp);
                for side in [Side::Right, Side::Left] {
                    for branch in 1..=branches {
                        let child = mu.arc_with_sigma(cp.angle, side, sigma_i / 2.0)?;
                        steps.push(SuccessorStep {
                            parent: arc,
                            child,
                            kind: SuccessorKind::CritIII,
                            branch_index: branch,
                            singular_points: vec![v],
                            critical_point: Some(cp.angle),
                            sigma_parent: sigma_i,
                            sigma_child: mu.sigma(child),
                            sigma_tol: tol,
                        });
                    }
                }
            }
        }
    }
    Ok(steps)
}

fn on_closure(arc: CircleArc, theta: f64) -> bool {
    let wrap = |x: f64| x.rem_euclid(std::f64::consts::TAU);
    wrap(theta - arc.left()).min(wrap(arc.left() - theta)) < 1e-12
        || wrap(theta - arc.right()).min(wrap(arc.right() - theta)) < 1e-12
}

fn critical_point_for_value(map: &CircleMap, v: f64) -> Result<crate::circle::CriticalPoint> {
    map.circle_critical_points()
        .into_iter()
        .find(|cp| {
            let img = map.eval(cp.angle);
            let delta = (img - v).rem_euclid(std::f64::consts::TAU);
            delta < 1e-9 || delta > std::f64::consts::TAU - 1e-9
        })
        .ok_or_else(|| Error::Degenerate {
            what: format!("no critical point maps to {v}"),
        })
}

/// l - 1 branches where the local degree is 2l - 1.
fn branch_count(cp: crate::circle::CriticalPoint) -> usize {
    (((cp.local_degree as usize) + 1) / 2 - 1).max(1)
}

/// The pair (v-, v+) of critical values adjacent to an arc; with a single
/// critical value the pair degenerates to that value on both sides.
fn adjacent_critical_values(map: &CircleMap) -> Vec<f64> {
    let cvs = map.circle_critical_values();
    match cvs.len() {
        0 => vec![],
        1 => vec![cvs[0], cvs[0]],
        _ => cvs,
    }
}

fn singular_pair(map: &CircleMap, v: f64, branch: usize) -> Vec<f64> {
    let cvs = map.circle_critical_values();
    if branch == 1 || cvs.len() <= 1 {
        // Attached branch: two singular points (degenerate when only one CV).
        vec![v, v]
    } else {
        vec![v]
    }
}

/// Generation policy for admissible sequences.
#[derive(Debug, Clone, Copy)]
pub enum Policy {
    Random { seed: u64 },
    FirstBranch,
}

/// A chained admissible sequence of successor steps.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleSequence {
    pub steps: Vec<SuccessorStep>,
    pub params: AdmissibleParams,
    /// Indices n with I_{n+1} a critical successor of I_n.
    pub critical_positions: Vec<usize>,
    /// Early-stop findings (rule violations recorded, not crashed on).
    pub findings: Vec<String>,
}

impl AdmissibleSequence {
    /// The arcs I_0, I_1, ..., in order.
    pub fn arcs(&self) -> Vec<CircleArc> {
        let mut arcs = Vec::with_capacity(self.steps.len() + 1);
        if let Some(first) = self.steps.first() {
            arcs.push(first.parent);
        }
        arcs.extend(self.steps.iter().map(|s| s.child));
        arcs
    }

    pub fn sigmas(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        if let Some(first) = self.steps.first() {
            out.push(first.sigma_parent);
        }
        out.extend(self.steps.iter().map(|s| s.sigma_child));
        out
    }
}

/// Generates an admissible sequence of the given depth.
pub fn generate(
    map: &CircleMap,
    mu: &InvariantMeasure,
    start: CircleArc,
    params: &AdmissibleParams,
    depth: usize,
    policy: Policy,
) -> Result<AdmissibleSequence> {
    params.validate()?;
    let sigma0 = mu.sigma(start);
    if sigma0 >= params.r3 {
        return Err(Error::ArcTooLong {
            sigma: sigma0,
            limit: params.r3,
        });
    }
    let mut rng = match policy {
        Policy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Policy::FirstBranch => None,
    };
    let mut steps: Vec<SuccessorStep> = Vec::with_capacity(depth);
    let mut critical_positions = Vec::new();
    let mut findings = Vec::new();
    let mut current = start;
    for n in 0..depth {
        let options = match successors(map, mu, current, params) {
            Ok(list) => list,
            Err(e) => {
                findings.push(format!("step {n}: {e}"));
                break;
            }
        };
        let pick = match rng.as_mut() {
            Some(r) => r.gen_range(0..options.len()),
            None => 0,
        };
        let step = options.into_iter().nth(pick).expect("non-empty options");
        if step.kind.is_critical() {
            critical_positions.push(n);
        }
        current = step.child;
        steps.push(step);
    }
    Ok(AdmissibleSequence {
        steps,
        params: *params,
        critical_positions,
        findings,
    })
}

/// A node of the exhaustive successor tree.
#[derive(Debug, Clone, Serialize)]
pub struct TreeNode {
    pub arc: CircleArc,
    pub depth: usize,
    pub parent: Option<usize>,
    /// The step leading into this node (None at the root).
    pub step: Option<SuccessorStep>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceTree {
    pub nodes: Vec<TreeNode>,
    pub findings: Vec<String>,
    pub leaf_ids: Vec<usize>,
}

impl SequenceTree {
    /// Reconstructs the root-to-leaf step path for a leaf.
    pub fn path(&self, leaf: usize) -> Vec<&SuccessorStep> {
        let mut path = Vec::new();
        let mut cur = leaf;
        while let Some(step) = self.nodes[cur].step.as_ref() {
            path.push(step);
            cur = self.nodes[cur].parent.expect("non-root has a parent");
        }
        path.reverse();
        path
    }
}

pub const TREE_NODE_CAP: usize = 100_000;

/// Explores every branch to the given depth (breadth-first).
pub fn generate_tree(
    map: &CircleMap,
    mu: &InvariantMeasure,
    start: CircleArc,
    params: &AdmissibleParams,
    depth: usize,
) -> Result<SequenceTree> {
    params.validate()?;
    let sigma0 = mu.sigma(start);
    if sigma0 >= params.r3 {
        return Err(Error::ArcTooLong {
            sigma: sigma0,
            limit: params.r3,
        });
    }
    let mut nodes = vec![TreeNode {
        arc: start,
        depth: 0,
        parent: None,
        step: None,
    }];
    let mut findings = Vec::new();
    let mut frontier = vec![0usize];
    let mut leaf_ids = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for &id in &frontier {
            let arc = nodes[id].arc;
            match successors(map, mu, arc, params) {
                Ok(options) => {
                    for step in options {
                        let child_id = nodes.len();
                        if child_id >= TREE_NODE_CAP {
                            return Err(Error::TreeCap { cap: TREE_NODE_CAP });
                        }
                        nodes.push(TreeNode {
                            arc: step.child,
                            depth: nodes[id].depth + 1,
                            parent: Some(id),
                            step: Some(step),
                        });
                        next.push(child_id);
                    }
                }
                Err(e) => {
                    findings.push(format!("node {id}: {e}"));
                    leaf_ids.push(id);
                }
            }
        }
        frontier = next;
    }
    leaf_ids.extend(frontier);
    Ok(SequenceTree {
        nodes,
        findings,
        leaf_ids,
    })
}

/// Shortening diagnostics: the global ratio bound and the empirical halving
/// window size.
#[derive(Debug, Clone, Serialize)]
pub struct ShorteningReport {
    /// max over s < t of sigma_t / sigma_s.
    pub max_ratio: f64,
    pub ratio_below_2: bool,
    /// Minimal number of critical steps that forces halving across every
    /// window containing that many (None when no window qualifies).
    pub empirical_halving_count: Option<usize>,
    pub sigma_first: f64,
    pub sigma_last: f64,
    pub critical_steps: usize,
}

pub fn check_shortening(seq: &AdmissibleSequence) -> Result<ShorteningReport> {
    let sigmas = seq.sigmas();
    if sigmas.len() < 2 {
        return Err(Error::InvalidParams {
            what: "sequence too short".into(),
        });
    }
    let mut max_ratio: f64 = 0.0;
    let mut running_min = sigmas[0];
    for &s in &sigmas[1..] {
        max_ratio = max_ratio.max(s / running_min);
        running_min = running_min.min(s);
    }

    let crit = &seq.critical_positions;
    let mut prefix_min = vec![f64::INFINITY; sigmas.len()];
    let mut m = f64::INFINITY;
    for (i, &s) in sigmas.iter().enumerate() {
        m = m.min(s);
        prefix_min[i] = m;
    }
    let mut empirical = None;
    'outer: for cand in 1..=crit.len() {
        for t in 1..sigmas.len() {
            // Critical positions n_j with n_j < t; the constraint binds at
            // s* = the cand-th critical position counting back from t.
            let upto = crit.partition_point(|&n| n < t);
            if upto < cand {
                continue;
            }
            let s_star = crit[upto - cand];
            if sigmas[t] >= 0.5 * prefix_min[s_star] {
                continue 'outer;
            }
        }
        empirical = Some(cand);
        break;
    }

    Ok(ShorteningReport {
        max_ratio,
        ratio_below_2: max_ratio < 2.0,
        empirical_halving_count: empirical,
        sigma_first: sigmas[0],
        sigma_last: *sigmas.last().unwrap(),
        critical_steps: crit.len(),
    })
}

/// Kinds of the critical steps n_j .. n_{j + 2 t0} (a window of 2 t0 + 1
/// critical successors), indexed from j = 1.
pub fn critical_window_types(
    seq: &AdmissibleSequence,
    map: &CircleMap,
    j: usize,
) -> Result<Vec<SuccessorKind>> {
    let t0 = map.t0();
    let crit = &seq.critical_positions;
    if j == 0 {
        return Err(Error::IndexOutOfRange {
            index: 0,
            len: crit.len(),
        });
    }
    let hi = j - 1 + 2 * t0;
    if hi >= crit.len() {
        return Err(Error::IndexOutOfRange {
            index: hi,
            len: crit.len(),
        });
    }
    Ok((j - 1..=hi).map(|idx| seq.steps[crit[idx]].kind).collect())
}

/// Whether a critical window contains a type (i) or (iii) step.
pub fn window_has_shrinking_type(kinds: &[SuccessorKind]) -> bool {
    kinds
        .iter()
        .any(|k| matches!(k, SuccessorKind::CritI | SuccessorKind::CritIII))
}

/// Deviation from I_{n+k} to I_n: the dynamical length of the shorter gap
/// between G^k(I_{n+k}) and I_n (zero when they meet).
pub fn deviation(
    map: &CircleMap,
    mu: &InvariantMeasure,
    seq: &AdmissibleSequence,
    n: usize,
    k: usize,
) -> Result<f64> {
    let arcs = seq.arcs();
    if n + k >= arcs.len() {
        return Err(Error::IndexOutOfRange {
            index: n + k,
            len: arcs.len(),
        });
    }
    if k == 0 {
        return Ok(0.0);
    }
    let mut image = arcs[n + k];
    for _ in 0..k {
        image = map.image_arc(image)?;
    }
    let base = arcs[n];
    if arcs_meet(image, base) {
        return Ok(0.0);
    }
    // Two disjoint arcs leave two gaps; take the sigma of the shorter one.
    let gap1 = CircleArc::new(image.right(), base.left());
    let gap2 = CircleArc::new(base.right(), image.left());
    let s1 = gap1.map(|g| mu.sigma(g)).unwrap_or(f64::INFINITY);
    let s2 = gap2.map(|g| mu.sigma(g)).unwrap_or(f64::INFINITY);
    Ok(s1.min(s2))
}

fn arcs_meet(a: CircleArc, b: CircleArc) -> bool {
    a.contains(b.left())
        || a.contains(b.right())
        || b.contains(a.left())
        || b.contains(a.right())
        || (a.left() - b.left()).abs() < 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil;

    fn params() -> AdmissibleParams {
        AdmissibleParams::default()
    }

    #[test]
    fn params_validation() {
        assert!(params().validate().is_ok());
        let bad = AdmissibleParams {
            delta: 0.3,
            eta: 0.4,
            ..params()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn rotation_has_only_noncritical_successors() {
        let map = CircleMap::rotation(testutil::GOLDEN);
        let mu = InvariantMeasure::new(map.clone(), 100_000, 0.0).unwrap();
        let arc = CircleArc::new(0.0, 0.012).unwrap();
        let steps = successors(&map, &mu, arc, &params()).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].kind, SuccessorKind::NonCritical);
        // G(child) = parent endpoint-wise.
        let back = map.image_arc(steps[0].child).unwrap();
        assert!((back.left() - arc.left()).abs() < 1e-10);
        assert!((back.right() - arc.right()).abs() < 1e-10);
    }

    #[test]
    fn arc_too_long_rejected() {
        let map = CircleMap::rotation(testutil::GOLDEN);
        let mu = InvariantMeasure::new(map.clone(), 100_000, 0.0).unwrap();
        let arc = CircleArc::new(0.0, 1.0).unwrap();
        match successors(&map, &mu, arc, &params()) {
            Err(Error::ArcTooLong { .. }) => {}
            other => panic!("expected ArcTooLong, got {other:?}"),
        }
    }

    #[test]
    fn critical_value_inside_gives_type_i_with_correct_ratio() {
        let map = testutil::golden_blaschke();
        let mu = testutil::golden_measure();
        let v = map.circle_critical_values()[0];
        // Place v well inside: sigma((v, b)) small relative to sigma(I).
        let left = mu.arc_with_sigma(v, Side::Left, 0.020).unwrap();
        let right = mu.arc_with_sigma(v, Side::Right, 0.002).unwrap();
        let arc = CircleArc::new(left.left(), right.right()).unwrap();
        let steps = successors(&map, mu, arc, &params()).unwrap();
        let si = mu.sigma(arc);
        let step = steps
            .iter()
            .find(|s| s.kind == SuccessorKind::CritI)
            .expect("type (i) present");
        let ratio = step.sigma_child / si;
        assert!(
            (ratio - (1.0 - params().eta / 3.0)).abs() < 0.02,
            "ratio = {ratio}"
        );
        assert_eq!(step.critical_point, Some(0.0));
    }

    #[test]
    fn critical_value_in_band_gives_type_iii() {
        let map = testutil::golden_blaschke();
        let mu = testutil::golden_measure();
        let v = map.circle_critical_values()[0];
        // v just to the right of I: inside (1 + 2 delta) I but outside I.
        let delta = params().delta;
        let si_target = 0.02;
        let margin = mu
            .arc_with_sigma(v, Side::Left, si_target * delta * 0.8)
            .unwrap();
        let arc = mu
            .arc_with_sigma(margin.left(), Side::Left, si_target)
            .unwrap();
        let steps = successors(&map, mu, arc, &params()).unwrap();
        let has_noncrit = steps.iter().any(|s| s.kind == SuccessorKind::NonCritical);
        let third: Vec<_> = steps
            .iter()
            .filter(|s| s.kind == SuccessorKind::CritIII)
            .collect();
        assert!(has_noncrit, "case 2 keeps the non-critical successor");
        assert!(!third.is_empty(), "type (iii) expected: {steps:?}");
        for s in third {
            let ratio = s.sigma_child / s.sigma_parent;
            assert!((ratio - 0.5).abs() < 0.02, "ratio = {ratio}");
        }
    }

    #[test]
    fn rotation_sequence_constant_sigma() {
        let map = CircleMap::rotation(testutil::GOLDEN);
        let mu = InvariantMeasure::new(map.clone(), 200_000, 0.0).unwrap();
        let arc = CircleArc::new(0.0, 0.012).unwrap();
        let seq = generate(&map, &mu, arc, &params(), 300, Policy::FirstBranch).unwrap();
        assert_eq!(seq.steps.len(), 300);
        assert!(seq.critical_positions.is_empty());
        let rep = check_shortening(&seq).unwrap();
        assert!(rep.max_ratio <= 1.0 + 1e-9);
        assert!(rep.ratio_below_2);
        // Deviation vanishes along an all-non-critical window.
        assert_eq!(deviation(&map, &mu, &seq, 3, 17).unwrap(), 0.0);
        assert_eq!(deviation(&map, &mu, &seq, 5, 0).unwrap(), 0.0);
    }

    #[test]
    fn random_policy_is_deterministic() {
        let map = testutil::golden_blaschke();
        let mu = testutil::golden_measure();
        let arc = CircleArc::new(3.0, 3.012).unwrap();
        let a = generate(&map, mu, arc, &params(), 400, Policy::Random { seed: 7 }).unwrap();
        let b = generate(&map, mu, arc, &params(), 400, Policy::Random { seed: 7 }).unwrap();
        assert_eq!(a.steps.len(), b.steps.len());
        for (x, y) in a.steps.iter().zip(b.steps.iter()) {
            assert_eq!(x.child.left().to_bits(), y.child.left().to_bits());
            assert_eq!(x.child.right().to_bits(), y.child.right().to_bits());
        }
    }

    #[test]
    fn chain_property() {
        let map = testutil::golden_blaschke();
        let mu = testutil::golden_measure();
        let arc = CircleArc::new(3.0, 3.012).unwrap();
        let seq = generate(&map, mu, arc, &params(), 500, Policy::Random { seed: 3 }).unwrap();
        for w in seq.steps.windows(2) {
            assert!((w[0].child.left() - w[1].parent.left()).abs() < 1e-10);
            assert!((w[0].child.right() - w[1].parent.right()).abs() < 1e-10);
        }
    }

    #[test]
    fn blaschke_sequence_ratio_bound() {
        let map = testutil::golden_blaschke();
        let mu = testutil::golden_measure();
        let arc = CircleArc::new(3.0, 3.012).unwrap();
        let seq = generate(&map, mu, arc, &params(), 1000, Policy::Random { seed: 11 }).unwrap();
        assert!(seq.findings.is_empty(), "findings: {:?}", seq.findings);
        let rep = check_shortening(&seq).unwrap();
        assert!(rep.ratio_below_2, "max ratio {}", rep.max_ratio);
    }

    #[test]
    fn window_types_need_enough_critical_steps() {
        let map = CircleMap::rotation(testutil::GOLDEN);
        let mu = InvariantMeasure::new(map.clone(), 100_000, 0.0).unwrap();
        let arc = CircleArc::new(0.0, 0.012).unwrap();
        let seq = generate(&map, &mu, arc, &params(), 50, Policy::FirstBranch).unwrap();
        match critical_window_types(&seq, &map, 1) {
            Err(Error::IndexOutOfRange { .. }) => {}
            other => panic!("expected IndexOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn all_crit_ii_window_is_flagged() {
        let kinds = vec![SuccessorKind::CritII; 3];
        assert!(!window_has_shrinking_type(&kinds));
        let kinds2 = vec![
            SuccessorKind::CritII,
            SuccessorKind::CritI,
            SuccessorKind::CritII,
        ];
        assert!(window_has_shrinking_type(&kinds2));
    }

    #[test]
    fn sequence_serializes_to_json() {
        let map = CircleMap::rotation(testutil::GOLDEN);
        let mu = InvariantMeasure::new(map.clone(), 100_000, 0.0).unwrap();
        let arc = CircleArc::new(0.0, 0.012).unwrap();
        let seq = generate(&map, &mu, arc, &params(), 5, Policy::FirstBranch).unwrap();
        let json = serde_json::to_string(&seq).unwrap();
        assert!(json.contains("NonCritical"));
    }
}
