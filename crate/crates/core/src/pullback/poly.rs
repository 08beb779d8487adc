//! Complex polynomial helpers and a simultaneous-iteration root finder.

use num_complex::Complex64;

/// Evaluates a polynomial with `coeffs[i]` the coefficient of z^i.
pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

/// Effective degree after trimming negligible leading coefficients.
pub fn degree(coeffs: &[Complex64]) -> usize {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    coeffs
        .iter()
        .rposition(|c| c.norm() > 1e-14 * scale)
        .unwrap_or(0)
}

/// All roots of the polynomial, counted with multiplicity.
///
/// Degree <= 2 uses closed forms; higher degrees run Aberth-Ehrlich
/// simultaneous iteration (optionally warm-started) followed by a Newton
/// polish of every root.
pub fn roots(coeffs: &[Complex64], warm_start: Option<&[Complex64]>) -> Vec<Complex64> {
    let deg = degree(coeffs);
    let coeffs = &coeffs[..=deg];
    match deg {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        2 => quadratic_roots(coeffs[2], coeffs[1], coeffs[0]).to_vec(),
        _ => aberth(coeffs, warm_start),
    }
}

/// Numerically stable quadratic formula for a z^2 + b z + c.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    let sq = disc.sqrt();
    // Pick the sign that avoids cancellation in b + sq.
    let q = if (b + sq).norm() >= (b - sq).norm() {
        -0.5 * (b + sq)
    } else {
        -0.5 * (b - sq)
    };
    if q.norm() == 0.0 {
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]
    } else {
        [q / a, c / q]
    }
}

fn aberth(coeffs: &[Complex64], warm_start: Option<&[Complex64]>) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let deriv = derivative(coeffs);
    let lead = coeffs[deg];

    let mut zs: Vec<Complex64> = match warm_start {
        Some(ws) if ws.len() == deg => ws.to_vec(),
        _ => {
            // Initial guesses on a circle sized by the coefficient bound.
            let bound = 1.0
                + coeffs[..deg]
                    .iter()
                    .map(|c| (*c / lead).norm())
                    .fold(0.0, f64::max);
            (0..deg)
                .map(|k| {
                    Complex64::from_polar(
                        bound.min(1e6),
                        std::f64::consts::TAU * (k as f64 + 0.25) / deg as f64 + 0.4,
                    )
                })
                .collect()
        }
    };

    for _ in 0..120 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let zi = zs[i];
            let p = eval(coeffs, zi);
            let dp = eval(&deriv, zi);
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(1e-12, 1e-12)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in zs.iter().enumerate() {
                if j != i {
                    let d = zi - zj;
                    if d.norm() > 1e-300 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            zs[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }

    // Newton polish.
    for z in zs.iter_mut() {
        for _ in 0..4 {
            let p = eval(coeffs, *z);
            let dp = eval(&deriv, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *z -= step;
            if step.norm() < 1e-15 * (1.0 + z.norm()) {
                break;
            }
        }
    }
    zs
}
