//! Continued-fraction arithmetic and return-time combinatorics for
//! bounded-type rotation numbers.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default truncation depth for stored partial quotients.
pub const DEFAULT_DEPTH: usize = 40;
/// Default bounded-type bound on partial quotients.
pub const DEFAULT_BOUND: u64 = 50;
/// Remainders below this are treated as exact rationals.
const RATIONAL_EPS: f64 = 1e-12;

/// A bounded-type irrational in (0,1), stored as a finite truncation of its
/// continued-fraction expansion `[a1, a2, ...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationNumber {
    partial_quotients: Vec<u64>,
    bound: u64,
    value: f64,
    /// Set when some quotient exceeds the configured bound.
    pub bound_exceeded: bool,
}

impl RotationNumber {
    /// Builds a rotation number from explicit partial quotients.
    pub fn from_quotients(quotients: &[u64]) -> Result<Self> {
        Self::from_quotients_with_bound(quotients, DEFAULT_BOUND)
    }

    pub fn from_quotients_with_bound(quotients: &[u64], bound: u64) -> Result<Self> {
        if quotients.is_empty() || quotients.iter().any(|&a| a == 0) {
            return Err(Error::InvalidParams {
                what: "partial quotients must be positive".into(),
            });
        }
        // Overflow check: the convergent recursion must stay in i64.
        convergents_exact(quotients, quotients.len())?;
        let value = evaluate_quotients(quotients);
        let bound_exceeded = quotients.iter().any(|&a| a > bound);
        Ok(Self {
            partial_quotients: quotients.to_vec(),
            bound,
            value,
            bound_exceeded,
        })
    }

    /// Golden mean (sqrt(5)-1)/2 = [1,1,1,...].
    pub fn golden() -> Self {
        Self::from_quotients(&[1; DEFAULT_DEPTH]).expect("all-ones expansion is valid")
    }

    /// Silver ratio sqrt(2)-1 = [2,2,2,...].
    pub fn silver() -> Self {
        Self::from_quotients(&[2; 24]).expect("all-twos expansion is valid")
    }

    pub fn partial_quotients(&self) -> &[u64] {
        &self.partial_quotients
    }

    pub fn depth(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// The real value reconstructed from the stored quotients.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Convergent table up to index `n` (inclusive), exact integer arithmetic.
    pub fn convergents(&self, n: usize) -> Result<ConvergentTable> {
        if n >= self.partial_quotients.len() + 1 {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.partial_quotients.len() + 1,
            });
        }
        let rows = convergents_exact(&self.partial_quotients, n)?;
        Ok(ConvergentTable { rows })
    }

    /// Circular distance of `q_k * alpha` to the nearest integer, i.e.
    /// `|q_k alpha - p_k|` in normalized (turn) units.
    pub fn closest_return_gap(&self, k: usize) -> Result<f64> {
        let table = self.convergents(k)?;
        let (_, p, q) = table.rows[k];
        Ok((q as f64 * self.value - p as f64).abs())
    }
}

/// Rows of (n, p_n, q_n) with exact integer arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergentTable {
    rows: Vec<(usize, i64, i64)>,
}

impl ConvergentTable {
    pub fn rows(&self) -> &[(usize, i64, i64)] {
        &self.rows
    }

    pub fn denominators(&self) -> Vec<i64> {
        self.rows.iter().map(|&(_, _, q)| q).collect()
    }

    /// CSV export with columns n, a_n, p_n, q_n (a_0 written as 0).
    pub fn to_csv(&self, quotients: &[u64]) -> String {
        let mut out = String::from("n,a_n,p_n,q_n\n");
        for &(n, p, q) in &self.rows {
            let a = if n == 0 { 0 } else { quotients[n - 1] };
            out.push_str(&format!("{n},{a},{p},{q}\n"));
        }
        out
    }
}

/// p_n/q_n recursion: p_0/q_0 = 0/1, p_1/q_1 = 1/a_1,
/// x_n = a_n x_{n-1} + x_{n-2}. Checked i64 arithmetic throughout.
fn convergents_exact(quotients: &[u64], n: usize) -> Result<Vec<(usize, i64, i64)>> {
    let mut rows = Vec::with_capacity(n + 1);
    let (mut p_prev, mut q_prev) = (1i64, 0i64); // p_{-1}, q_{-1}
    let (mut p, mut q) = (0i64, 1i64); // p_0, q_0
    rows.push((0usize, p, q));
    for (i, &a) in quotients.iter().take(n).enumerate() {
        let a = i64::try_from(a).map_err(|_| Error::DepthTooLarge { depth: i + 1 })?;
        let p_next = a
            .checked_mul(p)
            .and_then(|v| v.checked_add(p_prev))
            .ok_or(Error::DepthTooLarge { depth: i + 1 })?;
        let q_next = a
            .checked_mul(q)
            .and_then(|v| v.checked_add(q_prev))
            .ok_or(Error::DepthTooLarge { depth: i + 1 })?;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        rows.push((i + 1, p, q));
    }
    Ok(rows)
}

/// Evaluates `[a1, a2, ...]` from the tail: x = 1/(a_k + x_next).
fn evaluate_quotients(quotients: &[u64]) -> f64 {
    let mut x = 0.0;
    for &a in quotients.iter().rev() {
        x = 1.0 / (a as f64 + x);
    }
    x
}

/// Standard continued-fraction expansion of a real in (0,1).
///
/// Halts with `RationalInput` when the fractional remainder drops below
/// 1e-12, which guards against noise-induced giant quotients.
pub fn cf_expand(x: f64, depth: usize) -> Result<RotationNumber> {
    cf_expand_with_bound(x, depth, DEFAULT_BOUND)
}

pub fn cf_expand_with_bound(x: f64, depth: usize, bound: u64) -> Result<RotationNumber> {
    if !(0.0 < x && x < 1.0) {
        return Err(Error::InvalidParams {
            what: format!("x = {x} not in (0,1)"),
        });
    }
    if depth == 0 {
        return Err(Error::InvalidParams {
            what: "depth must be >= 1".into(),
        });
    }
    let mut quotients = Vec::with_capacity(depth);
    let mut rem = x;
    for i in 0..depth {
        if rem < RATIONAL_EPS {
            return Err(Error::RationalInput {
                index: i,
                remainder: rem,
            });
        }
        let inv = 1.0 / rem;
        let a = inv.floor();
        quotients.push(a as u64);
        rem = inv - a;
        // Guard the convergent recursion as we go.
        convergents_exact(&quotients, quotients.len())?;
    }
    let mut rn = RotationNumber::from_quotients_with_bound(&quotients, bound)?;
    // Keep the caller's real rather than the truncated reconstruction: the
    // stored value must match the input to 1e-15 when depth is generous.
    rn.value = x;
    Ok(rn)
}

/// Brute-force best-approximation check: for 1 <= q < q_n the circular
/// distance of q*alpha to Z exceeds that of q_{n-1}*alpha.
pub fn best_approximation_holds(alpha: &RotationNumber, n: usize, q_cap: i64) -> Result<bool> {
    let table = alpha.convergents(n)?;
    let q_n = table.rows[n].2;
    if q_n > q_cap {
        return Err(Error::InvalidParams {
            what: format!("q_n = {q_n} above brute-force cap {q_cap}"),
        });
    }
    let gap_prev = alpha.closest_return_gap(n - 1)?;
    let x = alpha.value();
    for q in 1..q_n {
        let d = (q as f64 * x).rem_euclid(1.0);
        let gap = d.min(1.0 - d);
        if q != table.rows[n - 1].2 && gap <= gap_prev {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 0.618033988749894848;

    #[test]
    fn golden_mean_all_ones() {
        let rn = cf_expand(GOLDEN, 8).unwrap();
        assert_eq!(rn.partial_quotients(), &[1, 1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn silver_all_twos() {
        let rn = cf_expand(std::f64::consts::SQRT_2 - 1.0, 5).unwrap();
        assert_eq!(rn.partial_quotients(), &[2, 2, 2, 2, 2]);
    }

    #[test]
    fn exact_rational_rejected() {
        match cf_expand(0.5, 4) {
            Err(Error::RationalInput { .. }) => {}
            other => panic!("expected RationalInput, got {other:?}"),
        }
    }

    #[test]
    fn golden_convergents_are_fibonacci() {
        let rn = RotationNumber::golden();
        let table = rn.convergents(10).unwrap();
        let q: Vec<i64> = table.denominators();
        assert_eq!(q, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89]);
    }

    #[test]
    fn silver_convergents() {
        let rn = RotationNumber::silver();
        let q = rn.convergents(3).unwrap().denominators();
        assert_eq!(q, vec![1, 2, 5, 12]);
    }

    #[test]
    fn q0_is_one_for_any_alpha() {
        for quotients in [&[3u64, 1, 4, 1, 5][..], &[7, 2, 9][..]] {
            let rn = RotationNumber::from_quotients(quotients).unwrap();
            assert_eq!(rn.convergents(0).unwrap().denominators(), vec![1]);
        }
    }

    #[test]
    fn reconstruction_matches_input() {
        let rn = cf_expand(GOLDEN, 40).unwrap();
        assert!((rn.value() - GOLDEN).abs() < 1e-15);
        let direct = RotationNumber::golden();
        assert!((direct.value() - GOLDEN).abs() < 1e-15);
    }

    #[test]
    fn cf_expand_post_within_qn_squared() {
        for (x, depth) in [(GOLDEN, 12), (std::f64::consts::SQRT_2 - 1.0, 10), (0.3183098861837907, 8)] {
            let rn = cf_expand(x, depth).unwrap();
            let reconstructed = evaluate_quotients(rn.partial_quotients());
            let q = rn.convergents(depth).unwrap().denominators()[depth] as f64;
            assert!((reconstructed - x).abs() <= 1.0 / (q * q));
        }
    }

    #[test]
    fn closest_return_gap_examples() {
        let rn = RotationNumber::golden();
        // |2a - 1| = sqrt(5) - 2
        let gap2 = rn.closest_return_gap(2).unwrap();
        assert!((gap2 - (5f64.sqrt() - 2.0)).abs() < 1e-12);
        // k = 0: |alpha - 0| = alpha
        let gap0 = rn.closest_return_gap(0).unwrap();
        assert!((gap0 - rn.value()).abs() < 1e-15);
        // gap ratio tends to alpha
        let r = rn.closest_return_gap(16).unwrap() / rn.closest_return_gap(15).unwrap();
        assert!((r - rn.value()).abs() < 1e-6);
    }

    #[test]
    fn gaps_strictly_decreasing() {
        let rn = RotationNumber::silver();
        let mut prev = f64::INFINITY;
        for k in 0..16 {
            let g = rn.closest_return_gap(k).unwrap();
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn recursion_invariants_exact() {
        let rn = RotationNumber::from_quotients(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let rows = rn.convergents(8).unwrap().rows().to_vec();
        let a = rn.partial_quotients();
        for n in 2..=8 {
            let (_, p, q) = rows[n];
            assert_eq!(p, a[n - 1] as i64 * rows[n - 1].1 + rows[n - 2].1);
            assert_eq!(q, a[n - 1] as i64 * rows[n - 1].2 + rows[n - 2].2);
            assert!(q > rows[n - 1].2);
            assert_eq!(gcd(p, q), 1);
        }
    }

    #[test]
    fn best_approximation_brute_force() {
        let golden = RotationNumber::golden();
        for n in 2..=19 {
            if golden.convergents(n).unwrap().denominators()[n] > 10_000 {
                break;
            }
            assert!(best_approximation_holds(&golden, n, 10_000).unwrap());
        }
    }

    #[test]
    fn overflow_is_an_error() {
        let quotients = vec![DEFAULT_BOUND; 40];
        match RotationNumber::from_quotients(&quotients) {
            Err(Error::DepthTooLarge { .. }) => {}
            other => panic!("expected DepthTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn bound_exceeded_is_warning_not_error() {
        let rn = RotationNumber::from_quotients_with_bound(&[1, 80, 1, 1], 50).unwrap();
        assert!(rn.bound_exceeded);
    }

    #[test]
    fn csv_export_shape() {
        let rn = RotationNumber::golden();
        let table = rn.convergents(3).unwrap();
        let csv = table.to_csv(rn.partial_quotients());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,a_n,p_n,q_n");
        assert_eq!(lines[1], "0,0,0,1");
        assert_eq!(lines[4], "3,1,2,3");
    }

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
}
