//! Special functions used by the spectral pricing formulas: complex
//! log-gamma, the weight |Γ((ν+iu)/2)|², modified Bessel K of imaginary
//! order, Whittaker W with complex second parameter, generalized Laguerre
//! polynomials, and the upper incomplete gamma function.
//!
//! All operations are pure and reentrant. Complex quantities use
//! [`num_complex::Complex64`]; domain violations surface as [`crate::Error`]
//! values rather than silent NaNs.

mod bessel;
mod gamma;
mod incgamma;
mod kummer;
mod laguerre;
mod whittaker;

pub use bessel::{bessel_k_imag, bessel_k_imag_scaled};
pub use gamma::{digamma, gamma_complex, gamma_real_positive, gamma_weight, ln_gamma_weight, log_gamma};
pub use incgamma::gamma_upper;
pub use kummer::{kummer_m, kummer_u, INTEGER_DETECT};
pub(crate) use kummer::kummer_u_complex;
pub use laguerre::laguerre;
pub use whittaker::{whittaker_w, whittaker_w_imag_mu, whittaker_w_real_mu};
pub(crate) use whittaker::whittaker_w_imag_mu_est;

use crate::error::{Error, Result};

/// Accuracy targets for the iterative special-function evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionAccuracy {
    /// Target relative error.
    pub rel_tol: f64,
    /// Absolute tolerance applied near zeros of oscillatory functions.
    pub abs_floor: f64,
}

impl Default for FunctionAccuracy {
    fn default() -> Self {
        FunctionAccuracy {
            rel_tol: 1e-10,
            abs_floor: 1e-14,
        }
    }
}

impl FunctionAccuracy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::invalid(format!(
                "rel_tol must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_floor >= 0.0) {
            return Err(Error::invalid("abs_floor must be >= 0"));
        }
        Ok(())
    }
}
