//! Scalar special functions for the gapped-bath closed forms: the principal
//! Lambert W branch and the upper incomplete Gamma function at zero order.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

const HALLEY_MAX_ITER: usize = 50;
const LENTZ_MAX_ITER: usize = 300;
const FPMIN: f64 = 1e-300;

/// Principal branch W0 of w e^w = x, defined for x >= -1/e, with W0 >= -1.
///
/// Seeded piecewise (log for large x, branch-point series near -1/e),
/// then polished by Halley iteration to machine precision.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let neg_inv_e = -(-1.0f64).exp();
    if x.is_nan() || x < neg_inv_e - 1e-14 {
        return Err(Error::Domain(format!("lambert_w0 needs x >= -1/e, got {x:e}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let x = x.max(neg_inv_e);

    let mut w = if x > 0.0 {
        let l = (1.0 + x).ln();
        // one log-correction step keeps the seed tight for huge x
        if l > 1.0 {
            l - (l.ln() * l) / (1.0 + l)
        } else {
            l
        }
    } else if x < -0.25 {
        // series around the branch point in p = sqrt(2(1 + e x)); round-off
        // can push the radicand a hair negative exactly at the branch point
        let p = (2.0 * (1.0 + std::f64::consts::E * x)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else {
        x
    };

    let mut last_step = f64::INFINITY;
    for _ in 0..HALLEY_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            return Ok(w.max(-1.0));
        }
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        w -= step;
        // near the branch point f cancels catastrophically and the steps
        // jitter at the round-off floor instead of shrinking; accept there too
        if step.abs() <= 1e-14 * (1.0 + w.abs()) || step.abs() >= last_step {
            return Ok(w.max(-1.0));
        }
        last_step = step.abs();
    }
    Err(Error::NoConvergence(HALLEY_MAX_ITER))
}

/// Upper incomplete Gamma at zero order, Gamma(0, z) = int_z^inf e^-t / t dt,
/// for z > 0. Power series below z = 1, modified Lentz continued fraction
/// above; both evaluate to near machine precision.
pub fn gamma_upper_zero(z: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain(format!("gamma_upper_zero needs z > 0, got {z:e}")));
    }
    if z <= 1.0 {
        // Gamma(0,z) = -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k / (k k!)
        let mut term = z;
        let mut acc = term;
        for k in 2..200 {
            let k = k as f64;
            term *= -z * (k - 1.0) / (k * k);
            acc += term;
            if term.abs() <= f64::EPSILON * acc.abs() {
                break;
            }
        }
        Ok(-EULER_GAMMA - z.ln() + acc)
    } else {
        // e^-z / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...)))
        let mut b = z + 1.0;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..LENTZ_MAX_ITER {
            let an = -((i * i) as f64);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() <= f64::EPSILON {
                return Ok((-z).exp() * h);
            }
        }
        Err(Error::NoConvergence(LENTZ_MAX_ITER))
    }
}
