//! Complex log-gamma, the spectral weight |Γ((ν+iu)/2)|², and digamma.
//!
//! The backend is the Lanczos rational approximation (g = 7, 9 coefficients)
//! on Re z ≥ 1/2, extended to the rest of the cut plane through the upward
//! recurrence logΓ(z) = logΓ(z+1) − Log z. With the principal complex Log,
//! the recurrence preserves the principal branch on C∖(−∞,0]: the difference
//! of the two sides is continuous there, integer-valued in units of 2πi, and
//! vanishes on the positive axis.

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn near_nonpositive_integer(z: Complex64) -> bool {
    z.re <= 0.5 && z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12
}

/// Principal branch of log Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::invalid("log_gamma argument must be finite"));
    }
    if near_nonpositive_integer(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 0.5 {
        shift -= w.ln();
        w += 1.0;
    }
    // Lanczos at w, Re w >= 1/2.
    let x = w - 1.0;
    let mut s = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + i as f64);
    }
    let t = x + (LANCZOS_G + 0.5);
    let lg = LN_SQRT_2PI + (x + 0.5) * t.ln() - t + s.ln();
    Ok(lg + shift)
}

/// Γ(z) for complex z, through `exp(log_gamma)`.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// Γ(x) for real x > 0 (the pricing formulas only need positive arguments).
pub fn gamma_real_positive(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::invalid(format!(
            "gamma_real_positive requires x > 0, got {x}"
        )));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re.exp())
}

/// The spectral weight |Γ((ν+iu)/2)|² of the eigenfunction expansion.
pub fn gamma_weight(nu: f64, u: f64) -> Result<f64> {
    if u < 0.0 {
        return Err(Error::invalid("gamma_weight requires u >= 0"));
    }
    Ok(ln_gamma_weight(nu, u)?.exp())
}

/// ln |Γ((ν+iu)/2)|², kept in log scale for the spectral integrands where the
/// companion sinh(πu) factor would otherwise overflow first.
pub fn ln_gamma_weight(nu: f64, u: f64) -> Result<f64> {
    let z = Complex64::new(nu / 2.0, u / 2.0);
    if near_nonpositive_integer(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    Ok(2.0 * log_gamma(z)?.re)
}

/// Digamma ψ(z): recurrence up to Re z ≥ 8, then the Stirling tail.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if near_nonpositive_integer(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    // Bernoulli numbers B2..B14 over 2n
    const TAIL: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 8.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut p = inv2;
    let mut tail = Complex64::new(0.0, 0.0);
    for &c in TAIL.iter() {
        tail += c * p;
        p *= inv2;
    }
    Ok(acc + w.ln() - 0.5 / w - tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_points() {
        // Γ(1) = 1
        let lg = log_gamma(c(1.0, 0.0)).unwrap();
        assert!(lg.norm() < 1e-14);
        // Γ(1/2) = √π
        let lg = log_gamma(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(lg.re, std::f64::consts::PI.sqrt().ln(), max_relative = 1e-13);
        assert_eq!(lg.im, 0.0);
    }

    #[test]
    fn reflection_modulus() {
        // |Γ(1+i)|² = π / sinh(π)
        let lg = log_gamma(c(1.0, 1.0)).unwrap();
        let modulus_sq = (2.0 * lg.re).exp();
        assert_relative_eq!(
            modulus_sq,
            std::f64::consts::PI / std::f64::consts::PI.sinh(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn poles_are_errors() {
        assert!(matches!(
            log_gamma(c(0.0, 0.0)),
            Err(Error::GammaPole { .. })
        ));
        assert!(matches!(
            log_gamma(c(-3.0, 0.0)),
            Err(Error::GammaPole { .. })
        ));
        assert!(matches!(gamma_weight(0.0, 0.0), Err(Error::GammaPole { .. })));
        assert!(matches!(gamma_weight(-4.0, 0.0), Err(Error::GammaPole { .. })));
    }

    #[test]
    fn weight_examples() {
        // ν=2, u=0 → Γ(1)² = 1
        assert_relative_eq!(gamma_weight(2.0, 0.0).unwrap(), 1.0, max_relative = 1e-13);
        // ν=0, u=2 → |Γ(i)|² = π/sinh(π)
        assert_relative_eq!(
            gamma_weight(0.0, 2.0).unwrap(),
            0.27202905498213316295,
            max_relative = 1e-12
        );
        // ν=-0.6, u=1, frozen from an arbitrary-precision oracle
        assert_relative_eq!(
            gamma_weight(-0.6, 1.0).unwrap(),
            2.7031175532571868768,
            max_relative = 1e-12
        );
    }

    #[test]
    fn recurrence_in_left_half_plane() {
        // logΓ(z+1) − logΓ(z) = Log z away from the cut
        for &(re, im) in &[(-2.3, 0.7), (-5.1, -0.4), (-0.9, 2.0), (-7.2, 0.01)] {
            let z = c(re, im);
            let lhs = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap();
            let rhs = z.ln();
            assert!((lhs - rhs).norm() < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn digamma_values() {
        // ψ(1) = -γ
        let euler = 0.577_215_664_901_532_9;
        assert_relative_eq!(digamma(c(1.0, 0.0)).unwrap().re, -euler, max_relative = 1e-12);
        // ψ(z+1) = ψ(z) + 1/z
        let z = c(0.3, 1.7);
        let lhs = digamma(z + 1.0).unwrap();
        let rhs = digamma(z).unwrap() + 1.0 / z;
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
