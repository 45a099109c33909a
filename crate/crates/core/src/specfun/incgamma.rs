//! Upper incomplete gamma function Γ(a, z).

use super::gamma::gamma_real_positive;
use crate::error::{Error, Result};

const MAX_ITER: usize = 400;

/// Γ(a, z) for z > 0. Continued fraction for z ≥ a + 1, the series complement
/// Γ(a) − γ(a, z) otherwise; non-positive `a` with small `z` is reached by the
/// downward recurrence Γ(a, z) = (Γ(a+1, z) − z^a e^{−z}) / a.
pub fn gamma_upper(a: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid(format!("gamma_upper requires z > 0, got {z}")));
    }
    if !a.is_finite() {
        return Err(Error::invalid("gamma_upper requires finite a"));
    }
    if a > 170.0 {
        return Err(Error::Overflow("gamma_upper"));
    }
    if z >= a + 1.0 {
        return continued_fraction(a, z);
    }
    if a > 0.0 {
        let gamma_a = gamma_real_positive(a)?;
        return Ok(gamma_a * (1.0 - lower_regularized_series(a, z, gamma_a)?));
    }
    // a <= 0, z < a + 1: climb to a + m > 0 and recurse back down.
    let m = (1.0 - a).ceil() as usize;
    let top = a + m as f64;
    let mut value = gamma_upper(top, z)?;
    for j in (0..m).rev() {
        let aj = a + j as f64;
        value = (value - z.powf(aj) * (-z).exp()) / aj;
    }
    Ok(value)
}

/// Modified Lentz continued fraction, valid for z ≥ a + 1.
fn continued_fraction(a: f64, z: f64) -> Result<f64> {
    let tiny = 1e-300;
    let mut b = z + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            let ln_pref = a * z.ln() - z;
            if ln_pref < -745.0 {
                return Err(Error::UnderflowToZero("gamma_upper"));
            }
            return Ok(ln_pref.exp() * h);
        }
    }
    Err(Error::NonConvergence {
        what: "gamma_upper continued fraction",
        best: f64::NAN,
    })
}

/// P(a, z) = γ(a, z)/Γ(a) by the ascending series, for a > 0, z < a + 1.
fn lower_regularized_series(a: f64, z: f64, gamma_a: f64) -> Result<f64> {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            return Ok(sum * (a * z.ln() - z).exp() / gamma_a);
        }
    }
    Err(Error::NonConvergence {
        what: "gamma_upper series",
        best: f64::NAN,
    })
}
