//! Spectral pricing engine for continuously monitored arithmetic-average
//! Asian options.
//!
//! The engine expands the Liouville heat kernel (exponential potential) over
//! its continuous and discrete spectrum, inverts the Laplace transform in
//! closed form through Whittaker functions, and assembles put values from the
//! spectral pricing kernel; calls follow by put-call parity. An independent
//! Monte Carlo oracle ([`mc`]) validates the whole chain.
//!
//! Modules
//! * [`specfun`] — the special functions behind the formulas;
//! * [`kernel`] — heat kernel of the Liouville Hamiltonian plus its numerical
//!   validators (PDE residual, semigroup, completeness);
//! * [`laplace`] — closed-form inverse Laplace transform and the Bromwich
//!   line oracle that checks it;
//! * [`pricing`] — dimensionless reduction, spectral pricing kernel, put and
//!   call valuation;
//! * [`mc`] — reproducible Monte Carlo estimator (geometric Brownian motion,
//!   trapezoidal averaging, antithetic pairs).

// frozen oracle values keep their full printed digits
#![allow(clippy::excessive_precision)]
// !(x > 0.0) deliberately rejects NaN along with the out-of-domain values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kernel;
pub mod laplace;
pub mod mc;
pub mod pricing;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
