//! Heat kernel of the Liouville Hamiltonian (Schrödinger operator with
//! potential q·eˣ) by spectral quadrature, plus numerical validators: the
//! defining PDE residual and the completeness (τ → 0 delta) defect.
//!
//! All u-integrands are assembled from the scaled Bessel value
//! e^{πu/2} K_{iu}(z), so the sinh(πu) growth of the spectral measure cancels
//! analytically: K_{iu}(a) K_{iu}(b) sinh(πu) = K̂(a) K̂(b) (1 − e^{−2πu})/2.

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::specfun::{bessel_k_imag_scaled, FunctionAccuracy};

/// Truncation and tolerance policy for the spectral u-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Spectral truncation point of the u-integral.
    pub u_max: f64,
    /// Target relative error of the quadrature.
    pub rel_tol: f64,
    /// Cap on panel-doubling refinement.
    pub max_panels: usize,
    /// Gauss-Legendre nodes per panel.
    pub panel_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            u_max: 40.0,
            rel_tol: 1e-10,
            max_panels: 1 << 14,
            panel_order: 32,
        }
    }
}

impl QuadratureSpec {
    /// Truncation for the heat-kernel integrand, whose only large-u decay is
    /// the Gaussian factor e^{−u²τ/8}: beyond
    /// max(40, √(8 ln(1/rel_tol)/τ) + 10) the tail is below tolerance.
    pub fn for_heat_kernel(tau: f64) -> Self {
        let spec = QuadratureSpec::default();
        let u_max = (8.0 * (1.0 / spec.rel_tol).ln() / tau).sqrt() + 10.0;
        QuadratureSpec {
            u_max: u_max.max(40.0),
            ..spec
        }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        QuadratureSpec { rel_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u_max > 0.0) {
            return Err(Error::invalid("u_max must be > 0"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::invalid("rel_tol must lie in (0, 1e-3]"));
        }
        if self.max_panels < 4 {
            return Err(Error::invalid("max_panels must be >= 4"));
        }
        if !(8..=64).contains(&self.panel_order) {
            return Err(Error::invalid("panel_order must lie in [8, 64]"));
        }
        Ok(())
    }

    pub(crate) fn accuracy(&self) -> FunctionAccuracy {
        FunctionAccuracy {
            rel_tol: self.rel_tol.min(1e-3),
            abs_floor: 1e-14,
        }
    }
}

/// Arguments of the heat kernel K(τ, x, x′; q), restricted to real q > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub tau: f64,
    pub x: f64,
    pub x_prime: f64,
    pub q: f64,
}

impl KernelPoint {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::invalid("tau must be > 0"));
        }
        if !(self.q > 0.0) {
            return Err(Error::invalid("q must be > 0"));
        }
        if !self.x.is_finite() || !self.x_prime.is_finite() {
            return Err(Error::invalid("x, x' must be finite"));
        }
        Ok(())
    }
}

/// Normalized eigenfunction ψ_u(x) = (1/π) √(u sinh πu) K_{iu}(√(8q) eˣᐟ²),
/// evaluated as (1/π) √(u(1 − e^{−2πu})/2) · e^{πu/2} K_{iu}.
pub fn eigenfunction(u: f64, x: f64, q: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::invalid("eigenfunction requires u > 0"));
    }
    if !(q > 0.0) {
        return Err(Error::invalid("eigenfunction requires q > 0"));
    }
    let z = (8.0 * q).sqrt() * (0.5 * x).exp();
    let acc = FunctionAccuracy::default();
    let khat = bessel_k_imag_scaled(u, z, &acc)?;
    let amp = (u * (1.0 - (-2.0 * std::f64::consts::PI * u).exp()) / 2.0).sqrt();
    Ok(amp * khat / std::f64::consts::PI)
}

/// K(τ, x, x′; q) = (1/π²) ∫₀^{u_max} e^{−u²τ/8} K_{iu}(za) K_{iu}(zb)
/// sinh(πu) u du with za = √(8q) eˣᐟ², zb = √(8q) eˣ′ᐟ².
pub fn heat_kernel(p: &KernelPoint, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    spec.validate()?;
    let acc = spec.accuracy();
    let za = (8.0 * p.q).sqrt() * (0.5 * p.x).exp();
    let zb = (8.0 * p.q).sqrt() * (0.5 * p.x_prime).exp();
    let tau8 = p.tau / 8.0;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;

    let spectral_factor = |u: f64| -> Result<f64> {
        let ka = bessel_k_imag_scaled(u, za, &acc)?;
        let kb = bessel_k_imag_scaled(u, zb, &acc)?;
        Ok(ka * kb * (1.0 - (-2.0 * std::f64::consts::PI * u).exp()) / 2.0 * u / pi2)
    };

    let (value, floor) = adaptive_spectral(
        |u| spectral_factor(u).map(|f| f * (-u * u * tau8).exp()),
        spec,
    )?;

    // Gaussian tail bound past u_max: ∫_U^∞ C u e^{−u²τ/8} du = C (4/τ) e^{−U²τ/8}.
    let u_end = spec.u_max;
    let tail = spectral_factor(u_end)?.abs() / u_end * (4.0 / p.tau) * (-u_end * u_end * tau8).exp();
    let tol = (spec.rel_tol * value.abs()).max(2.0 * floor).max(1e-305);
    if tail > tol {
        return Err(Error::TailBound {
            estimate: tail,
            tolerance: tol,
        });
    }
    Ok(value)
}

/// Adaptive panel-doubling integration of a fallible integrand on [0, u_max].
fn adaptive_spectral<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let nodes = gauss_legendre(spec.panel_order);
    let mut n = ((spec.u_max / 2.0).ceil() as usize).max(4);
    let eval = |n: usize, f: &mut F| -> Result<(f64, f64)> {
        let h = spec.u_max / n as f64;
        let mut total = 0.0;
        let mut max_abs = 0.0f64;
        for p in 0..n {
            let mid = h * (p as f64 + 0.5);
            let half = 0.5 * h;
            let mut acc = 0.0;
            for &(x, w) in nodes.iter() {
                let v = f(mid + half * x)?;
                acc += w * v;
                max_abs = max_abs.max(v.abs());
            }
            total += acc * half;
        }
        Ok((total, max_abs))
    };
    let (mut prev, _) = eval(n, &mut f)?;
    loop {
        if n.saturating_mul(2) > spec.max_panels {
            return Err(Error::NonConvergence {
                what: "spectral quadrature",
                best: f64::NAN,
            });
        }
        n *= 2;
        let (cur, max_abs) = eval(n, &mut f)?;
        // widely separated endpoints leave a result exponentially below the
        // integrand scale; stop at the oscillation-cancellation rounding floor
        let floor = 3e-16 * max_abs * spec.u_max;
        if (cur - prev).abs() <= (spec.rel_tol * cur.abs().max(1e-300)).max(floor) {
            return Ok((cur, floor));
        }
        prev = cur;
    }
}

/// Relative residual of the defining initial-value problem,
/// |−∂_τ K + ½ ∂²_x K − q eˣ K| / |∂_τ K|, by central differences.
pub fn pde_residual(p: &KernelPoint, spec: &QuadratureSpec, h_x: f64, h_tau: f64) -> Result<f64> {
    let k = |tau: f64, x: f64| -> Result<f64> {
        heat_kernel(
            &KernelPoint {
                tau,
                x,
                x_prime: p.x_prime,
                q: p.q,
            },
            spec,
        )
    };
    let k0 = k(p.tau, p.x)?;
    let dk_dtau = (k(p.tau + h_tau, p.x)? - k(p.tau - h_tau, p.x)?) / (2.0 * h_tau);
    let d2k_dx2 = (k(p.tau, p.x + h_x)? - 2.0 * k0 + k(p.tau, p.x - h_x)?) / (h_x * h_x);
    let residual = -dk_dtau + 0.5 * d2k_dx2 - p.q * p.x.exp() * k0;
    Ok(residual.abs() / dk_dtau.abs())
}

/// Sampling of x′ for the completeness test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletenessGrid {
    /// Half-length L of the x′ window [x − L, x + L].
    pub half_width: f64,
    /// Number of equal panels across the window.
    pub n_panels: usize,
    /// Gauss-Legendre nodes per panel.
    pub panel_order: usize,
}

impl CompletenessGrid {
    pub fn for_u_max(half_width: f64, u_max: f64) -> Self {
        // the τ→0 integrand oscillates in x′ with period ≈ 4π/u_max
        let period = 4.0 * std::f64::consts::PI / u_max.max(1.0);
        let width = (period * 4.0).min(0.5);
        CompletenessGrid {
            half_width,
            n_panels: ((2.0 * half_width) / width).ceil() as usize,
            panel_order: 32,
        }
    }
}

/// Completeness defect |∫ I(x, x′) f(x′) dx′ − f(x)| where I is the τ→0
/// spectral integrand truncated at u_max. Decays as u_max grows.
pub fn completeness_defect<F: Fn(f64) -> f64>(
    x: f64,
    q: f64,
    f: F,
    grid: &CompletenessGrid,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(q > 0.0) {
        return Err(Error::invalid("q must be > 0"));
    }
    // node-spacing check against the inner oscillation
    let panel_width = 2.0 * grid.half_width / grid.n_panels as f64;
    let spacing = panel_width * std::f64::consts::PI / (2.0 * grid.panel_order as f64);
    let required = 4.0 * std::f64::consts::PI / spec.u_max / 6.0;
    if spacing > required {
        return Err(Error::GridTooCoarse { spacing, required });
    }

    let acc = spec.accuracy();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let za = (8.0 * q).sqrt() * (0.5 * x).exp();

    // inner u-nodes, fixed panels of width ~1.25, values at za precomputed
    let inner_panels = ((spec.u_max / 1.25).ceil() as usize).max(4);
    let gl = gauss_legendre(spec.panel_order);
    let mut u_nodes = Vec::with_capacity(inner_panels * spec.panel_order);
    let hu = spec.u_max / inner_panels as f64;
    for p in 0..inner_panels {
        let mid = hu * (p as f64 + 0.5);
        for &(t, w) in gl.iter() {
            u_nodes.push((mid + 0.5 * hu * t, 0.5 * hu * w));
        }
    }
    let ka: Result<Vec<f64>> = u_nodes
        .iter()
        .map(|&(u, _)| bessel_k_imag_scaled(u, za, &acc))
        .collect();
    let ka = ka?;

    let inner = |x_prime: f64| -> Result<f64> {
        let zb = (8.0 * q).sqrt() * (0.5 * x_prime).exp();
        let mut s = 0.0;
        for (i, &(u, w)) in u_nodes.iter().enumerate() {
            let kb = bessel_k_imag_scaled(u, zb, &acc)?;
            s += w * ka[i] * kb * (1.0 - (-2.0 * std::f64::consts::PI * u).exp()) / 2.0 * u;
        }
        Ok(s / pi2)
    };

    // outer x'-quadrature
    let mut total = 0.0;
    let hx = panel_width;
    for p in 0..grid.n_panels {
        let mid = x - grid.half_width + hx * (p as f64 + 0.5);
        for &(t, w) in gauss_legendre(grid.panel_order).iter() {
            let xp = mid + 0.5 * hx * t;
            total += 0.5 * hx * w * f(xp) * inner(xp)?;
        }
    }
    Ok((total - f(x)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eigenfunction_vanishes_at_zero_order() {
        let v = eigenfunction(1e-12, 0.0, 1.0).unwrap();
        assert!(v.abs() < 1e-11, "got {v}");
    }

    #[test]
    fn eigenfunction_scale_invariance() {
        // the argument √(8q) e^{x/2} is invariant under x → x − ln s, q → s q
        let s: f64 = 2.5;
        let a = eigenfunction(1.3, 0.4, 1.0).unwrap();
        let b = eigenfunction(1.3, 0.4 - s.ln(), s).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn eigenfunction_frozen_value() {
        // (1/π)√(sinh π) K_i(√8) from the Bessel oracle
        assert_relative_eq!(
            eigenfunction(1.0, 0.0, 1.0).unwrap(),
            0.039299366716223207684,
            max_relative = 1e-10
        );
    }

    #[test]
    fn heat_kernel_matches_reference() {
        let spec = QuadratureSpec::for_heat_kernel(0.5);
        let k = heat_kernel(
            &KernelPoint {
                tau: 0.5,
                x: 0.0,
                x_prime: 0.1,
                q: 1.0,
            },
            &spec,
        )
        .unwrap();
        assert_relative_eq!(k, 0.3248849267144155, max_relative = 1e-9);

        let spec = QuadratureSpec::for_heat_kernel(0.25);
        let k = heat_kernel(
            &KernelPoint {
                tau: 0.25,
                x: 0.3,
                x_prime: -0.2,
                q: 1.0,
            },
            &spec,
        )
        .unwrap();
        assert_relative_eq!(k, 0.3692956138971019, max_relative = 1e-9);
    }

    #[test]
    fn heat_kernel_symmetric_in_endpoints() {
        let spec = QuadratureSpec::for_heat_kernel(0.5);
        let a = heat_kernel(
            &KernelPoint {
                tau: 0.5,
                x: 0.3,
                x_prime: -0.2,
                q: 1.0,
            },
            &spec,
        )
        .unwrap();
        let b = heat_kernel(
            &KernelPoint {
                tau: 0.5,
                x: -0.2,
                x_prime: 0.3,
                q: 1.0,
            },
            &spec,
        )
        .unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn tail_bound_violation_is_reported() {
        let spec = QuadratureSpec {
            u_max: 4.0,
            ..QuadratureSpec::default()
        };
        let r = heat_kernel(
            &KernelPoint {
                tau: 0.1,
                x: 0.0,
                x_prime: 0.0,
                q: 1.0,
            },
            &spec,
        );
        assert!(matches!(r, Err(Error::TailBound { .. })));
    }

    #[test]
    fn completeness_grid_too_coarse_is_reported() {
        let spec = QuadratureSpec::default();
        let grid = CompletenessGrid {
            half_width: 3.0,
            n_panels: 2,
            panel_order: 8,
        };
        let r = completeness_defect(0.0, 1.0, |_| 1.0, &grid, &spec);
        assert!(matches!(r, Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn completeness_zero_function() {
        let spec = QuadratureSpec {
            u_max: 10.0,
            ..QuadratureSpec::default()
        };
        let grid = CompletenessGrid::for_u_max(2.0, 10.0);
        let d = completeness_defect(0.0, 1.0, |_| 0.0, &grid, &spec).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn completeness_is_linear() {
        let spec = QuadratureSpec {
            u_max: 10.0,
            ..QuadratureSpec::default()
        };
        let grid = CompletenessGrid::for_u_max(2.0, 10.0);
        let f = |xp: f64| (-(xp * xp) / 0.5).exp();
        let d1 = completeness_defect(0.0, 1.0, f, &grid, &spec).unwrap();
        let d3 = completeness_defect(0.0, 1.0, |xp| 3.0 * f(xp), &grid, &spec).unwrap();
        assert!(d3 <= 3.0 * d1 + 1e-12, "d3 = {d3}, 3 d1 = {}", 3.0 * d1);
    }
}
