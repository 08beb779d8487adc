//! Empirical contraction probe for the inverse branch attached to a circle
//! critical point, measured in the exterior-disk proxy metric.
//!
//! Sample points live in the wedge between the circle and a ray leaving the
//! critical value at angle beta; their preimages in the component touching
//! the circle only at the critical point are selected by the local sector
//! angle. The reported ratio is rho(w) / (rho(G(w)) |G'(w)|) with rho the
//! exterior-disk density, so values below one witness strict contraction of
//! the inverse branch.

use super::map::RationalMap;
use crate::circle::CircleMap;
use crate::error::{Error, Result};
use crate::exec;
use crate::hypgeo::exterior_metric_density;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbeRegion {
    /// Wedge angle at the critical value (the ray slope), in (0, pi).
    pub beta: f64,
    /// Log-uniform radial range of samples in the logarithmic chart.
    pub r_min: f64,
    pub r_max: f64,
    /// Anticlockwise wedge when true, clockwise otherwise.
    pub anticlockwise: bool,
}

impl Default for ProbeRegion {
    fn default() -> Self {
        Self {
            beta: PI / 8.0,
            r_min: 1e-4,
            r_max: 1e-2,
            anticlockwise: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub samples_requested: usize,
    pub samples_used: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub fraction_below_one: f64,
    /// Samples with no admissible preimage branch (skipped).
    pub skipped: usize,
}

/// Runs the contraction probe on a Blaschke circle map.
pub fn contraction_probe(
    map: &CircleMap,
    region: &ProbeRegion,
    samples: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let t = match map {
        CircleMap::Blaschke(t) => *t,
        CircleMap::RigidRotation(_) => {
            return Err(Error::InvalidParams {
                what: "the rotation has no critical point to probe".into(),
            })
        }
    };
    if region.beta >= PI - 1e-12 {
        // Degenerate ray along the circle: empty region.
        return Ok(ProbeReport {
            samples_requested: samples,
            samples_used: 0,
            max_ratio: f64::NAN,
            mean_ratio: f64::NAN,
            fraction_below_one: f64::NAN,
            skipped: 0,
        });
    }
    if !(region.beta > 0.0) || !(0.0 < region.r_min && region.r_min < region.r_max) {
        return Err(Error::InvalidParams {
            what: "bad probe region".into(),
        });
    }
    let planar = RationalMap::blaschke(t);
    let v = Complex64::from_polar(1.0, std::f64::consts::TAU * t);
    let sign = if region.anticlockwise { 1.0 } else { -1.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Complex64> = (0..samples)
        .map(|_| {
            let theta: f64 = rng.gen_range(0.0..region.beta);
            let log_s = rng.gen_range(region.r_min.ln()..region.r_max.ln());
            let s = log_s.exp();
            // z = v e^{i zeta}, zeta = s e^{-i theta} (height -s sin theta < 0
            // keeps the sample outside the closed disk).
            let zeta = Complex64::new(sign * s * theta.cos(), -s * theta.sin());
            v * (Complex64::new(0.0, 1.0) * zeta).exp()
        })
        .collect();

    let ratios: Vec<Option<f64>> = exec::map_slice(&points, |&z| {
        sample_ratio(&planar, z, sign).ok().flatten()
    });

    let used: Vec<f64> = ratios.iter().filter_map(|r| *r).collect();
    if used.is_empty() {
        return Err(Error::OutsideRegime {
            what: "no sample produced an admissible preimage".into(),
        });
    }
    let max_ratio = used.iter().copied().fold(f64::MIN, f64::max);
    let mean_ratio = used.iter().sum::<f64>() / used.len() as f64;
    let below = used.iter().filter(|&&r| r < 1.0).count();
    Ok(ProbeReport {
        samples_requested: samples,
        samples_used: used.len(),
        max_ratio,
        mean_ratio,
        fraction_below_one: below as f64 / used.len() as f64,
        skipped: samples - used.len(),
    })
}

/// Ratio at one sample: selects the preimage near the critical point whose
/// local elevation angle lies in the middle sector (the component meeting
/// the circle only at the critical point).
fn sample_ratio(planar: &RationalMap, z: Complex64, sign: f64) -> Result<Option<f64>> {
    let c = Complex64::new(1.0, 0.0);
    let preimages = planar.preimages(z)?;
    let mut chosen = None;
    for w in preimages.into_iter().filter(|w| w.re.is_finite()) {
        if w.norm() <= 1.0 || (w - c).norm() > 0.9 {
            continue;
        }
        // Logarithmic chart at the critical point: w = c e^{i zeta_w}.
        let zeta = (w / c).ln() / Complex64::new(0.0, 1.0);
        let elevation = f64::atan2(-zeta.im, sign * zeta.re);
        if elevation > PI / 3.0 + 0.05 && elevation < PI - 0.05 {
            chosen = Some(w);
            break;
        }
    }
    let Some(w) = chosen else {
        return Ok(None);
    };
    let rho_w = exterior_metric_density(w)?;
    let rho_z = exterior_metric_density(z)?;
    let deriv = planar.derivative(w).norm();
    Ok(Some(rho_w / (rho_z * deriv)))
}

/// Far-field check: ratios for the outermost inverse branch at points far
/// from the critical point.
pub fn far_field_ratios(map: &CircleMap, samples: usize, seed: u64) -> Result<Vec<f64>> {
    let t = match map {
        CircleMap::Blaschke(t) => *t,
        CircleMap::RigidRotation(_) => {
            return Err(Error::InvalidParams {
                what: "the rotation has no critical structure".into(),
            })
        }
    };
    let planar = RationalMap::blaschke(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let r: f64 = rng.gen_range(1.3..2.0);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = Complex64::from_polar(r, theta);
        let pre = planar.preimages(z)?;
        let w = pre
            .into_iter()
            .filter(|w| w.re.is_finite() && w.norm() > 1.0)
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        if let Some(w) = w {
            let rho_w = exterior_metric_density(w)?;
            let rho_z = exterior_metric_density(z)?;
            out.push(rho_w / (rho_z * planar.derivative(w).norm()));
        }
    }
    Ok(out)
}
