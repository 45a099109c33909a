//! Modified Bessel function K_{iu}(z) of purely imaginary order.
//!
//! Two complementary evaluation regimes:
//!
//! * the real integral ∫₀^∞ e^{−z cosh t} cos(ut) dt with panel-wise
//!   Gauss-Legendre, accurate while the value is not exponentially smaller
//!   than the e^{−z} integrand scale (u ≲ 2z/π);
//! * the ascending series of I_{iu}(z) with every term pre-scaled by
//!   e^{−πu/2} through log Γ(1+iu), accurate in the oscillatory regime where
//!   the quadrature cancels catastrophically.
//!
//! The regime is picked per call from analytic cancellation estimates. Both
//! paths share the envelope exponent η(u,z) (K_{iu}(z) ≈ e^{−η} up to an
//! algebraic factor), which also drives the underflow flag. Near the real
//! zeros of K_{iu} the relative error is necessarily measured against the
//! oscillation envelope e^{−η} rather than the vanishing value itself.

use num_complex::Complex64;

use super::gamma::log_gamma;
use super::FunctionAccuracy;
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

const LN_INV_EPS: f64 = 36.043_653_389_117_154; // -ln(f64::EPSILON)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Below this order the cosine factor is essentially flat and the integral
/// representation is uniformly accurate; the series' Im-part extraction would
/// lose relative precision instead.
const SERIES_MIN_U: f64 = 0.05;

/// Envelope exponent: K_{iu}(z) ~ e^{−η(u,z)} · (algebraic factor).
fn envelope_eta(u: f64, z: f64) -> f64 {
    if u <= z {
        (z * z - u * u).sqrt() + u * (u / z).asin()
    } else {
        std::f64::consts::FRAC_PI_2 * u
    }
}

fn stirling_ln_abs_gamma(x: f64, y: f64) -> f64 {
    // Re log Γ(x+iy) for x ≥ 1, via Stirling; used only for regime selection.
    (x - 0.5) * 0.5 * (x * x + y * y).ln() - y * y.atan2(x) - x + LN_SQRT_2PI
}

/// ln of the worst cancellation ratio of the scaled series at (u, z).
fn series_loss_ln(u: f64, z: f64, eta: f64) -> f64 {
    let ln_z24 = (z * z / 4.0).ln();
    let ln_result = (std::f64::consts::FRAC_PI_2 * u - eta)
        + ((1.0 - (-2.0 * std::f64::consts::PI * u).exp()) / (2.0 * std::f64::consts::PI)).ln();
    let kmax = (0.75 * z + 20.0).min(400.0) as usize;
    let mut max_term = f64::NEG_INFINITY;
    for k in 0..=kmax {
        let kf = k as f64;
        let t = kf * ln_z24
            - stirling_ln_abs_gamma(kf + 1.0, 0.0)
            - stirling_ln_abs_gamma(kf + 1.0, u)
            - std::f64::consts::FRAC_PI_2 * u;
        if t > max_term {
            max_term = t;
        }
    }
    (max_term - ln_result).max(0.0)
}

/// Scaled series: e^{πu/2} K_{iu}(z) = −2π Im(S) / (1 − e^{−2πu}),
/// S = Σ_k t_k, t_0 = exp(iu ln(z/2) − πu/2 − logΓ(1+iu)),
/// t_{k+1} = t_k (z²/4) / ((k+1)(k+1+iu)).
fn scaled_series(u: f64, z: f64) -> Result<f64> {
    let lg = log_gamma(Complex64::new(1.0, u))?;
    let expo = Complex64::new(
        -std::f64::consts::FRAC_PI_2 * u - lg.re,
        u * (z / 2.0).ln() - lg.im,
    );
    let mut term = expo.exp();
    let z24 = z * z / 4.0;
    let mut sum = term;
    let mut max_abs = term.norm();
    for k in 0..600usize {
        let kf = k as f64;
        term = term * z24 / (Complex64::new(kf + 1.0, u) * (kf + 1.0));
        sum += term;
        let t_abs = term.norm();
        if t_abs > max_abs {
            max_abs = t_abs;
        }
        if t_abs < max_abs * 1e-18 && kf + 1.0 > 0.5 * z {
            let scaled =
                -2.0 * std::f64::consts::PI * sum.im / (1.0 - (-2.0 * std::f64::consts::PI * u).exp());
            return Ok(scaled);
        }
    }
    Err(Error::NonConvergence {
        what: "K_{iu} series",
        best: f64::NAN,
    })
}

/// Unscaled integral representation ∫₀^∞ e^{−z cosh t} cos(ut) dt.
fn cosine_integral(u: f64, z: f64, eta: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let t_max = {
        let arg = 1.0 + (LN_INV_EPS + 4.0) / z;
        arg.acosh().min(30.0)
    };
    let width = (20.0 / u.max(1.0)).min(1.0);
    let mut n_panels = (t_max / width).ceil() as usize;
    n_panels = n_panels.max(2);
    let nodes = gauss_legendre(32);
    let eval = |n: usize| -> f64 {
        let h = t_max / n as f64;
        let mut total = 0.0;
        for p in 0..n {
            let mid = h * (p as f64 + 0.5);
            let half = 0.5 * h;
            let mut acc_p = 0.0;
            for &(x, w) in nodes.iter() {
                let t = mid + half * x;
                acc_p += w * (-z * t.cosh()).exp() * (u * t).cos();
            }
            total += acc_p * half;
        }
        total
    };
    let floor = (-eta).exp();
    let mut prev = eval(n_panels);
    for _ in 0..6 {
        n_panels *= 2;
        let cur = eval(n_panels);
        if (cur - prev).abs() <= acc.rel_tol * cur.abs().max(floor) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "K_{iu} quadrature",
        best: f64::NAN,
    })
}

fn validate(u: f64, z: f64, acc: &FunctionAccuracy) -> Result<()> {
    acc.validate()?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid(format!("bessel_k_imag requires z > 0, got {z}")));
    }
    if !u.is_finite() {
        return Err(Error::invalid("bessel_k_imag requires finite u"));
    }
    Ok(())
}

/// K_{iu}(z) (real for real u, z > 0; even in u).
pub fn bessel_k_imag(u: f64, z: f64, acc: &FunctionAccuracy) -> Result<f64> {
    validate(u, z, acc)?;
    let u = u.abs();
    let eta = envelope_eta(u, z);
    if eta > 705.0 {
        return Err(Error::UnderflowToZero("K_{iu}(z)"));
    }
    if use_quadrature(u, z, eta) {
        cosine_integral(u, z, eta, acc)
    } else {
        Ok(scaled_series(u, z)? * (-std::f64::consts::FRAC_PI_2 * u).exp())
    }
}

/// e^{πu/2} K_{iu}(z), the scale on which the spectral integrands are O(1).
pub fn bessel_k_imag_scaled(u: f64, z: f64, acc: &FunctionAccuracy) -> Result<f64> {
    validate(u, z, acc)?;
    let u = u.abs();
    let eta = envelope_eta(u, z);
    if eta - std::f64::consts::FRAC_PI_2 * u > 705.0 {
        return Err(Error::UnderflowToZero("e^{pi u/2} K_{iu}(z)"));
    }
    if use_quadrature(u, z, eta) {
        Ok(cosine_integral(u, z, eta, acc)? * (std::f64::consts::FRAC_PI_2 * u).exp())
    } else {
        scaled_series(u, z)
    }
}

fn use_quadrature(u: f64, z: f64, eta: f64) -> bool {
    if u < SERIES_MIN_U {
        return true;
    }
    let quad_loss = (eta - z).max(0.0);
    quad_loss <= series_loss_ln(u, z, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const ACC: FunctionAccuracy = FunctionAccuracy {
        rel_tol: 1e-10,
        abs_floor: 1e-14,
    };

    #[test]
    fn k0_at_one() {
        // frozen from a power-series/quadrature oracle at tightened tolerance
        assert_relative_eq!(
            bessel_k_imag(0.0, 1.0, &ACC).unwrap(),
            0.42102443824070833334,
            max_relative = 1e-11
        );
    }

    #[test]
    fn frozen_oracle_values() {
        assert_relative_eq!(
            bessel_k_imag(2.0, 3.0, &ACC).unwrap(),
            0.019156728326977342962,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            bessel_k_imag(1.0, 8f64.sqrt(), &ACC).unwrap(),
            0.036330228953983694393,
            max_relative = 1e-10
        );
        // oscillatory regime: the value is negative
        assert_relative_eq!(
            bessel_k_imag(5.0, 2.0, &ACC).unwrap(),
            -3.4633788080657143473e-4,
            max_relative = 1e-9
        );
    }

    #[test]
    fn frozen_scaled_values() {
        assert_relative_eq!(
            bessel_k_imag_scaled(40.0, 8.0, &ACC).unwrap(),
            0.047373125499185955067,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            bessel_k_imag_scaled(25.0, 12.0, &ACC).unwrap(),
            0.19618615425772177265,
            max_relative = 1e-9
        );
    }

    #[test]
    fn even_in_u() {
        let a = bessel_k_imag(1.0, 1.0, &ACC).unwrap();
        let b = bessel_k_imag(-1.0, 1.0, &ACC).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn regimes_agree_at_the_boundary() {
        for &(u, z) in &[(6.0, 10.0), (3.0, 4.0), (10.0, 18.0), (1.0, 1.0)] {
            let eta = envelope_eta(u, z);
            let q = cosine_integral(u, z, eta, &ACC).unwrap();
            let s = scaled_series(u, z).unwrap() * (-std::f64::consts::FRAC_PI_2 * u).exp();
            assert_relative_eq!(q, s, max_relative = 1e-9);
        }
    }

    #[test]
    fn trapezoid_oracle_cross_check() {
        // The integrand decays doubly exponentially and has zero odd
        // derivatives at t = 0, so the plain trapezoid rule converges
        // spectrally; run it 10x tighter than the production tolerance.
        let oracle = |u: f64, z: f64| -> f64 {
            let h = 1.5e-3;
            let n = (30.0 / h) as usize;
            let mut s = 0.5 * (-z).exp();
            for i in 1..=n {
                let t = h * i as f64;
                s += (-z * t.cosh()).exp() * (u * t).cos();
            }
            s * h
        };
        for &(u, z) in &[(2.0, 3.0), (0.0, 1.0), (1.5, 0.5), (4.0, 9.0)] {
            let got = bessel_k_imag(u, z, &ACC).unwrap();
            assert_relative_eq!(got, oracle(u, z), max_relative = 1e-10);
        }
    }

    #[test]
    fn underflow_is_flagged() {
        assert!(matches!(
            bessel_k_imag(0.0, 800.0, &ACC),
            Err(Error::UnderflowToZero(_))
        ));
        // scaled variant survives large u
        assert!(bessel_k_imag_scaled(100.0, 1.0, &ACC).unwrap().is_finite());
    }

    #[test]
    fn small_z_domain() {
        // K_{iu} oscillates as z → 0: check against the trapezoid oracle
        // rather than a sign.
        let v = bessel_k_imag(0.5, 1e-3, &ACC).unwrap();
        let h = 1e-3;
        let n = (16.0 / h) as usize;
        let mut oracle = 0.5 * (-1e-3f64).exp();
        for i in 1..=n {
            let t = h * i as f64;
            oracle += (-1e-3 * t.cosh()).exp() * (0.5 * t).cos();
        }
        oracle *= h;
        assert_relative_eq!(v, oracle, max_relative = 1e-9);
    }
}
