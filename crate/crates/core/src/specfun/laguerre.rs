//! Generalized Laguerre polynomials by the three-term recurrence.

/// L_n^α(z). Total function: exact (up to rounding) for any n, α, z.
pub fn laguerre(n: usize, alpha: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
