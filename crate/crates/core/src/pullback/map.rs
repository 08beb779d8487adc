use super::poly;
use crate::error::{Error, Result};
use crate::hypgeo::chordal_dist;
use crate::rotation::RotationNumber;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Residual contract for point preimages (chordal).
pub const PREIMAGE_RESIDUAL: f64 = 1e-9;

/// A rational map P/Q with cached critical points.
#[derive(Debug, Clone, Serialize)]
pub struct RationalMap {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    degree: usize,
    critical_points: Vec<Complex64>,
}

impl RationalMap {
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        let dn = poly::degree(&num);
        let dd = poly::degree(&den);
        let num = num[..=dn].to_vec();
        let den = den[..=dd].to_vec();
        if dn == 0 && dd == 0 {
            return Err(Error::InvalidParams {
                what: "constant map".into(),
            });
        }
        // Common-root guard: every root of the denominator must not kill the
        // numerator as well.
        for r in poly::roots(&den, None) {
            if poly::eval(&num, r).norm() < 1e-10 {
                return Err(Error::InvalidParams {
                    what: "numerator and denominator share a root".into(),
                });
            }
        }
        let degree = dn.max(dd);
        // Critical points: roots of the Wronskian numerator P'Q - PQ'.
        let dnum = poly::derivative(&num);
        let dden = poly::derivative(&den);
        let wronskian = poly_sub(&poly_mul(&dnum, &den), &poly_mul(&num, &dden));
        let critical_points = poly::roots(&wronskian, None);
        Ok(Self {
            num,
            den,
            degree,
            critical_points,
        })
    }

    /// Polynomial map with the given coefficients.
    pub fn polynomial(num: Vec<Complex64>) -> Result<Self> {
        Self::new(num, vec![Complex64::new(1.0, 0.0)])
    }

    /// The planar Blaschke map e^{2 pi i t} z^2 (z - 3)/(1 - 3 z).
    pub fn blaschke(t: f64) -> Self {
        let rot = Complex64::from_polar(1.0, TAU * t);
        let num = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            rot * -3.0,
            rot,
        ];
        let den = vec![Complex64::new(1.0, 0.0), Complex64::new(-3.0, 0.0)];
        Self::new(num, den).expect("blaschke map is well-formed")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    /// Finite critical points with the spherical-derivative contract.
    pub fn critical_points(&self) -> &[Complex64] {
        &self.critical_points
    }

    pub fn critical_values(&self) -> Vec<Complex64> {
        self.critical_points.iter().map(|&c| self.eval(c)).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1e12 {
            return self.eval_at_infinity();
        }
        poly::eval(&self.num, z) / poly::eval(&self.den, z)
    }

    fn eval_at_infinity(&self) -> Complex64 {
        let dn = self.num.len() - 1;
        let dd = self.den.len() - 1;
        match dn.cmp(&dd) {
            std::cmp::Ordering::Greater => Complex64::new(f64::INFINITY, 0.0),
            std::cmp::Ordering::Equal => self.num[dn] / self.den[dd],
            std::cmp::Ordering::Less => Complex64::new(0.0, 0.0),
        }
    }

    /// Derivative (P'Q - PQ')/Q^2.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let p = poly::eval(&self.num, z);
        let q = poly::eval(&self.den, z);
        let dp = poly::eval(&poly::derivative(&self.num), z);
        let dq = poly::eval(&poly::derivative(&self.den), z);
        (dp * q - p * dq) / (q * q)
    }

    /// Coefficients of P(w) - z Q(w).
    fn preimage_poly(&self, z: Complex64) -> Vec<Complex64> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.num.len().max(self.den.len())];
        for (i, &c) in self.num.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, &c) in self.den.iter().enumerate() {
            coeffs[i] -= z * c;
        }
        coeffs
    }

    /// The deg(f) preimages of a finite point, counted with multiplicity.
    /// Preimages at infinity (degree drop of P - zQ) are returned as the
    /// infinity marker.
    pub fn preimages(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.preimages_warm(z, None)
    }

    pub fn preimages_warm(
        &self,
        z: Complex64,
        warm: Option<&[Complex64]>,
    ) -> Result<Vec<Complex64>> {
        let coeffs = self.preimage_poly(z);
        let deg_drop = self.degree - poly::degree(&coeffs);
        let mut roots = poly::roots(&coeffs, warm);
        for _ in 0..deg_drop {
            roots.push(Complex64::new(f64::INFINITY, 0.0));
        }
        let mut worst = 0.0f64;
        for w in roots.iter_mut() {
            if w.re.is_finite() {
                // Newton polish against the full rational residual.
                for _ in 0..3 {
                    let r = poly::eval(&coeffs, *w);
                    let dr = poly::eval(&poly::derivative(&coeffs), *w);
                    if dr.norm() == 0.0 {
                        break;
                    }
                    *w -= r / dr;
                }
                worst = worst.max(chordal_dist(self.eval(*w), z));
            }
        }
        if worst > PREIMAGE_RESIDUAL {
            return Err(Error::SolverFailure { residual: worst });
        }
        Ok(roots)
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// The quadratic z -> lambda z + z^2 with an indifferent fixed point at the
/// origin of multiplier lambda = e^{2 pi i alpha} and a super-attracting
/// fixed point at infinity.
#[derive(Debug, Clone)]
pub struct QuadSiegel {
    lambda: Complex64,
    map: RationalMap,
}

impl QuadSiegel {
    pub fn new(alpha: &RotationNumber) -> Self {
        Self::with_multiplier(Complex64::from_polar(1.0, TAU * alpha.value()))
    }

    /// Arbitrary multiplier: used for degenerate checks (lambda = 1 parabolic,
    /// lambda = 0 gives z^2 with exact Boettcher coordinates).
    pub fn with_multiplier(lambda: Complex64) -> Self {
        let map = RationalMap::polynomial(vec![
            Complex64::new(0.0, 0.0),
            lambda,
            Complex64::new(1.0, 0.0),
        ])
        .expect("quadratic is well-formed");
        Self { lambda, map }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    /// The finite critical point -lambda/2.
    pub fn critical_point(&self) -> Complex64 {
        -0.5 * self.lambda
    }

    pub fn critical_value(&self) -> Complex64 {
        let c = self.critical_point();
        self.map.eval(c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.lambda * z + z * z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_map_preimages() {
        let f = RationalMap::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let mut pre = f.preimages(c(1.0, 0.0)).unwrap();
        pre.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((pre[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((pre[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quad_siegel_preimages_of_origin() {
        let alpha = RotationNumber::golden();
        let f = QuadSiegel::new(&alpha);
        let mut pre = f.map().preimages(c(0.0, 0.0)).unwrap();
        pre.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        assert!(pre[0].norm() < 1e-12);
        assert!((pre[1] + f.lambda()).norm() < 1e-12);
    }

    #[test]
    fn degree_conservation_random_targets() {
        // deg-5 polynomial map
        let coeffs = vec![
            c(0.1, 0.3),
            c(-1.0, 0.2),
            c(0.0, 0.0),
            c(0.5, -0.5),
            c(0.0, 0.1),
            c(1.0, 0.0),
        ];
        let f = RationalMap::polynomial(coeffs).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..50 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let re = ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let im = ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0;
            let z = c(re, im);
            let pre = f.preimages(z).unwrap();
            assert_eq!(pre.len(), 5);
            for w in pre {
                assert!(chordal_dist(f.eval(w), z) <= PREIMAGE_RESIDUAL);
            }
        }
    }

    #[test]
    fn blaschke_map_critical_structure() {
        let f = RationalMap::blaschke(0.61);
        assert_eq!(f.degree(), 3);
        // z = 1 is a critical point of local degree 3: the Wronskian has a
        // double root there.
        let near_one = f
            .critical_points()
            .iter()
            .filter(|cp| (*cp - c(1.0, 0.0)).norm() < 1e-6)
            .count();
        assert_eq!(near_one, 2);
    }

    #[test]
    fn quadratic_critical_point() {
        let alpha = RotationNumber::golden();
        let f = QuadSiegel::new(&alpha);
        let cp = f.critical_point();
        assert!(f.map().derivative(cp).norm() < 1e-12);
        let cps = f.map().critical_points();
        assert_eq!(cps.len(), 1);
        assert!((cps[0] - cp).norm() < 1e-12);
    }

    #[test]
    fn shared_root_rejected() {
        // (z-1)/(z-1)-like
        let num = vec![c(-1.0, 0.0), c(1.0, 0.0)];
        let den = vec![c(-1.0, 0.0), c(1.0, 0.0)];
        assert!(RationalMap::new(num, den).is_err());
    }

    #[test]
    fn infinity_preimage_at_degree_drop() {
        // f(z) = z/(z^2+1): preimages of 0 are 0 and infinity.
        let f = RationalMap::new(
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let pre = f.preimages(c(0.0, 0.0)).unwrap();
        assert_eq!(pre.len(), 2);
        assert_eq!(pre.iter().filter(|w| !w.re.is_finite()).count(), 1);
    }
}
