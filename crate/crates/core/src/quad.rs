//! Panel-wise Gauss-Legendre quadrature.
//!
//! Nodes and weights are produced by Newton iteration on the Legendre
//! polynomials and cached per order. Integrals are evaluated panel by panel
//! in a fixed left-to-right order so results do not depend on evaluation
//! parallelism elsewhere in the crate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type NodeCache = Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>;

/// Gauss-Legendre nodes and weights on [-1, 1] for the given order.
pub fn gauss_legendre(order: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<NodeCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(compute_nodes(order)))
        .clone()
}

fn compute_nodes(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2, "Gauss-Legendre order must be at least 2");
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, 0.0);
        out[n / 2] = (0.0, 2.0 / (d * d));
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integral of `f` over `[a, b]` split into `n_panels` equal panels.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n_panels: usize,
    order: usize,
) -> f64 {
    let nodes = gauss_legendre(order);
    let h = (b - a) / n_panels as f64;
    let mut total = 0.0;
    for p in 0..n_panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for &(x, w) in nodes.iter() {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        // order n is exact through degree 2n-1
        let val = integrate_panels(|x| x.powi(7) - 3.0 * x.powi(4) + x, 0.0, 2.0, 1, 8);
        let exact = 2f64.powi(8) / 8.0 - 3.0 * 2f64.powi(5) / 5.0 + 2.0;
        assert_relative_eq!(val, exact, max_relative = 1e-14);
    }

    #[test]
    fn oscillatory_integrand_converges_with_panels() {
        let val = integrate_panels(|x| (40.0 * x).cos(), 0.0, 1.0, 16, 16);
        assert_relative_eq!(val, 40f64.sin() / 40.0, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_integral() {
        let val = integrate_panels(|x| (-x * x).exp(), 0.0, 8.0, 16, 32);
        assert_relative_eq!(val, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-13);
    }
}
