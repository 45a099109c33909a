//! Whittaker function W_{κ,μ}(z) through the Tricomi U function:
//! W_{κ,μ}(z) = e^{−z/2} z^{μ+1/2} U(μ−κ+1/2, 1+2μ, z).

use num_complex::Complex64;

use super::kummer::{kummer_u, kummer_u_est};
use super::FunctionAccuracy;
use crate::error::{Error, Result};

/// W_{κ,μ}(z) for z > 0; μ may be complex (the spectral integrands use
/// purely imaginary μ, the discrete terms real μ).
pub fn whittaker_w(kappa: f64, mu: Complex64, z: f64, acc: &FunctionAccuracy) -> Result<Complex64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid(format!("whittaker_w requires z > 0, got {z}")));
    }
    let a = mu - kappa + 0.5;
    let b = 1.0 + 2.0 * mu;
    let u = kummer_u(a, b, z, acc)?;
    let pref = (Complex64::new(-z / 2.0, 0.0) + (mu + 0.5) * z.ln()).exp();
    Ok(pref * u)
}

/// W_{κ, iu/2}(z): real by the μ → −μ symmetry; the floating-point imaginary
/// residue is checked against `abs_floor` relative to the value scale.
pub fn whittaker_w_imag_mu(kappa: f64, u: f64, z: f64, acc: &FunctionAccuracy) -> Result<f64> {
    let w = whittaker_w(kappa, Complex64::new(0.0, 0.5 * u), z, acc)?;
    let scale = w.re.abs().max(1e-30);
    if w.im.abs() > acc.abs_floor.max(1e-9 * scale) && w.im.abs() > 1e-6 * scale {
        return Err(Error::NonConvergence {
            what: "whittaker_w imaginary residue",
            best: w.im.abs() / scale,
        });
    }
    Ok(w.re)
}

/// Like [`whittaker_w_imag_mu`] but carries the relative error estimate and
/// never aborts on cancellation alone. Spectral integrands weigh the error by
/// the node's damping before it matters. An infinite estimate marks a value
/// rejected by the large-z envelope bound |W| ≲ e^{−z/2} z^{κ+1} e^{u²/(4z)}.
pub(crate) fn whittaker_w_imag_mu_est(
    kappa: f64,
    u: f64,
    z: f64,
    acc: &FunctionAccuracy,
) -> Result<(f64, f64)> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid(format!("whittaker_w requires z > 0, got {z}")));
    }
    let mu = Complex64::new(0.0, 0.5 * u);
    let (uval, est) = kummer_u_est(mu - kappa + 0.5, 1.0 + 2.0 * mu, z, acc)?;
    let pref = (Complex64::new(-z / 2.0, 0.0) + (mu + 0.5) * z.ln()).exp();
    let w = pref * uval;
    if z >= 10.0 && w.re != 0.0 {
        let ln_bound = -z / 2.0 + (kappa.abs() + 1.5) * z.ln() + u * u / (4.0 * z) + 8.0;
        if w.re.abs().ln() > ln_bound {
            return Ok((0.0, f64::INFINITY));
        }
    }
    Ok((w.re, est))
}

/// W_{κ,μ}(z) for real μ.
pub fn whittaker_w_real_mu(kappa: f64, mu: f64, z: f64, acc: &FunctionAccuracy) -> Result<f64> {
    Ok(whittaker_w(kappa, Complex64::new(mu, 0.0), z, acc)?.re)
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
    fn elementary_w() {
        // W_{0,1/2}(z) = e^{-z/2}
        let w = whittaker_w(0.0, Complex64::new(0.5, 0.0), 2.0, &ACC).unwrap();
        assert_relative_eq!(w.re, 0.3678794411714423216, max_relative = 1e-12);
        assert!(w.im.abs() < 1e-14);
    }

    #[test]
    fn incomplete_gamma_form() {
        // W_{μ-1/2,μ}(z) = z^{1/2-μ} e^{z/2} Γ(2μ, z) at μ=1, z=1
        let w = whittaker_w(0.5, Complex64::new(1.0, 0.0), 1.0, &ACC).unwrap();
        assert_relative_eq!(w.re, 1.2130613194252668472, max_relative = 1e-12);
    }

    #[test]
    fn imaginary_mu_is_real() {
        // W_{κ,μ} = W_{κ,-μ} forces a real value for imaginary μ
        let v = whittaker_w_imag_mu(0.8, 1.0, 1.0, &ACC).unwrap();
        assert_relative_eq!(v, 0.44371404865124572988, max_relative = 1e-11);
        let w = whittaker_w(0.8, Complex64::new(0.0, 0.5), 1.0, &ACC).unwrap();
        assert!(w.im.abs() <= 1e-13 * w.re.abs().max(1.0));
    }

    #[test]
    fn frozen_spectral_values() {
        // put-type κ = -(3+ν)/2 at ν = -0.6, z = 1/(2k) for the benchmark cell
        assert_relative_eq!(
            whittaker_w_imag_mu(-1.2, 6.0, 8.0, &ACC).unwrap(),
            0.0004406674742793099927,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            whittaker_w_imag_mu(-1.2, 20.0, 8.0, &ACC).unwrap(),
            -4.100532197497870377e-9,
            max_relative = 1e-9
        );
        // scaled by e^{10π} to a representable check value
        let w = whittaker_w_imag_mu(-1.2, 40.0, 8.0, &ACC).unwrap();
        assert_relative_eq!(
            w * (10.0 * std::f64::consts::PI).exp(),
            0.007230208430950711105,
            max_relative = 1e-9
        );
        let w = whittaker_w_imag_mu(0.8, 40.0, 0.01, &ACC).unwrap();
        assert_relative_eq!(
            w * (10.0 * std::f64::consts::PI).exp(),
            -0.3474333644096298670,
            max_relative = 1e-9
        );
        // past z ≈ 20 the M-combination cancellation floor e^{z−πu/4}·eps
        // dominates; the payoff factor e^{−z/2} keeps prices unaffected
        let w = whittaker_w_imag_mu(-2.7, 30.0, 40.0, &ACC).unwrap();
        assert_relative_eq!(
            w * (7.5 * std::f64::consts::PI).exp(),
            6.019252853968524345e-6,
            max_relative = 1e-3
        );
        // τ = 0.09 grid cells: z near 24.7
        let z = 24.691358024691358;
        assert_relative_eq!(
            whittaker_w_imag_mu(-2.0, 10.0, z, &ACC).unwrap(),
            2.2612770817774196e-9,
            max_relative = 3e-6
        );
        let w = whittaker_w_imag_mu(-2.0, 45.0, z, &ACC).unwrap();
        assert_relative_eq!(
            w * (11.25 * std::f64::consts::PI).exp(),
            0.0027564687256250459,
            max_relative = 3e-6
        );
    }

    #[test]
    fn log_case_whittaker() {
        // integer 2μ+1: exercises the logarithmic Kummer branch
        assert_relative_eq!(
            whittaker_w_real_mu(-1.0, 0.5, 1.0, &ACC).unwrap(),
            0.24482770062485768824,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            whittaker_w_real_mu(-1.0, 0.5, 8.0, &ACC).unwrap(),
            0.0018638522717386860195,
            max_relative = 1e-11
        );
    }

    #[test]
    fn mu_symmetry() {
        for &u in &[0.3, 2.0, 11.0] {
            let a = whittaker_w(0.3, Complex64::new(0.0, 0.5 * u), 2.5, &ACC).unwrap();
            let b = whittaker_w(0.3, Complex64::new(0.0, -0.5 * u), 2.5, &ACC).unwrap();
            assert!((a - b).norm() <= 1e-11 * a.norm().max(1e-20));
        }
    }
}
