//! Independent Monte Carlo oracle.
//!
//! Exact log-Euler GBM steps, trapezoidal accumulation of the continuous
//! arithmetic average, optional antithetic pairing, and discounted put/call
//! estimates with standard errors. Every path draws from its own
//! counter-based stream derived from (seed, path index), and partial sums are
//! reduced in fixed chunk order, so results are bit-identical for any thread
//! count.

use crate::error::{Error, Result};
use crate::pricing::MarketParams;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which side of the contract to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Put,
    Call,
}

/// Simulation configuration. `n_paths` counts paths (an antithetic pair is
/// two paths).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MCConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    pub seed: u64,
    pub antithetic: bool,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig {
            n_paths: 200_000,
            n_steps: 252,
            seed: 42,
            antithetic: true,
        }
    }
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1000 {
            return Err(Error::invalid("n_paths must be >= 1000"));
        }
        if self.antithetic && !self.n_paths.is_multiple_of(2) {
            return Err(Error::invalid("n_paths must be even with antithetic sampling"));
        }
        if self.n_steps < 50 {
            return Err(Error::invalid("n_steps must be >= 50"));
        }
        Ok(())
    }

    fn n_samples(&self) -> usize {
        if self.antithetic {
            self.n_paths / 2
        } else {
            self.n_paths
        }
    }
}

/// A Monte Carlo estimate with reproducibility metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_paths: usize,
    pub seed: u64,
}

/// Joint put/call estimates on common random numbers, plus the parity
/// residual of the sampled difference against the analytic adjustment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEstimate {
    pub put: MCEstimate,
    pub call: MCEstimate,
    pub parity_residual: f64,
    pub parity_residual_stderr: f64,
}

/// splitmix64 step: a counter-based bijective generator.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-path stream indexed by (seed, path number).
struct PathRng {
    state: u64,
    spare: Option<f64>,
}

impl PathRng {
    fn new(seed: u64, path: u64) -> Self {
        let mut state = mix(seed ^ path.wrapping_mul(0x9e3779b97f4a7c15));
        state = mix(state.wrapping_add(0x2545f4914f6cdd1d));
        PathRng { state, spare: None }
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        mix(self.state)
    }

    #[inline]
    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Standard normal by the polar method; the second draw is cached.
    fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// Accumulated payoff sums for one chunk of samples.
#[derive(Clone, Copy, Default)]
struct Sums {
    put: f64,
    put_sq: f64,
    call: f64,
    call_sq: f64,
    diff: f64,
    diff_sq: f64,
}

/// Trapezoidal average of one GBM path; the antithetic leg negates every
/// normal draw.
fn path_averages(m: &MarketParams, cfg: &MCConfig, sample: u64) -> (f64, Option<f64>) {
    let n = cfg.n_steps;
    let dt = m.expiry / n as f64;
    let drift = (m.rate - 0.5 * m.vol * m.vol) * dt;
    let vol_sqdt = m.vol * dt.sqrt();
    let mut rng = PathRng::new(cfg.seed, sample);

    let mut x_plus = 0.0f64;
    let mut x_minus = 0.0f64;
    // trapezoid: endpoints carry half weight
    let mut acc_plus = 0.5f64;
    let mut acc_minus = 0.5f64;
    for step in 0..n {
        let z = rng.normal();
        let last = step == n - 1;
        let w = if last { 0.5 } else { 1.0 };
        x_plus += drift + vol_sqdt * z;
        acc_plus += w * x_plus.exp();
        if cfg.antithetic {
            x_minus += drift - vol_sqdt * z;
            acc_minus += w * x_minus.exp();
        }
    }
    let a_plus = m.spot * acc_plus / n as f64;
    let a_minus = if cfg.antithetic {
        Some(m.spot * acc_minus / n as f64)
    } else {
        None
    };
    (a_plus, a_minus)
}

fn run_chunk(m: &MarketParams, cfg: &MCConfig, lo: usize, hi: usize) -> Sums {
    let strike = m.strike;
    let mut s = Sums::default();
    for i in lo..hi {
        let (a_plus, a_minus) = path_averages(m, cfg, i as u64);
        let (mut put, mut call) = ((strike - a_plus).max(0.0), (a_plus - strike).max(0.0));
        if let Some(a) = a_minus {
            put = 0.5 * (put + (strike - a).max(0.0));
            call = 0.5 * (call + (a - strike).max(0.0));
        }
        let diff = call - put;
        s.put += put;
        s.put_sq += put * put;
        s.call += call;
        s.call_sq += call * call;
        s.diff += diff;
        s.diff_sq += diff * diff;
    }
    s
}

const CHUNK: usize = 4096;

/// Simulate once; put, call, and their difference share every random number.
pub fn estimate_pair(m: &MarketParams, cfg: &MCConfig) -> Result<PairEstimate> {
    m.validate()?;
    cfg.validate()?;
    let n = cfg.n_samples();
    let n_chunks = n.div_ceil(CHUNK);
    let chunk_sums: Vec<Sums> = {
        let run = |c: usize| run_chunk(m, cfg, c * CHUNK, ((c + 1) * CHUNK).min(n));
        #[cfg(feature = "parallel")]
        {
            (0..n_chunks).into_par_iter().map(run).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..n_chunks).map(run).collect()
        }
    };
    // fixed-order reduction: bit-identical for any thread count
    let mut total = Sums::default();
    for s in chunk_sums {
        total.put += s.put;
        total.put_sq += s.put_sq;
        total.call += s.call;
        total.call_sq += s.call_sq;
        total.diff += s.diff;
        total.diff_sq += s.diff_sq;
    }

    let df = (-m.rate * m.expiry).exp();
    let nf = n as f64;
    let stat = |sum: f64, sum_sq: f64| -> (f64, f64) {
        let mean = sum / nf;
        let var = (sum_sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        (df * mean, df * (var / nf).sqrt())
    };
    let (put_mean, put_se) = stat(total.put, total.put_sq);
    let (call_mean, call_se) = stat(total.call, total.call_sq);
    let (diff_mean, diff_se) = stat(total.diff, total.diff_sq);

    let analytic = analytic_parity_adjustment(m);
    Ok(PairEstimate {
        put: MCEstimate {
            mean: put_mean,
            stderr: put_se,
            n_paths: cfg.n_paths,
            seed: cfg.seed,
        },
        call: MCEstimate {
            mean: call_mean,
            stderr: call_se,
            n_paths: cfg.n_paths,
            seed: cfg.seed,
        },
        parity_residual: diff_mean - analytic,
        parity_residual_stderr: diff_se,
    })
}

/// Discounted Monte Carlo estimate of one option side.
pub fn estimate(m: &MarketParams, kind: OptionKind, cfg: &MCConfig) -> Result<MCEstimate> {
    let pair = estimate_pair(m, cfg)?;
    Ok(match kind {
        OptionKind::Put => pair.put,
        OptionKind::Call => pair.call,
    })
}

/// (call − put) estimate minus the analytic parity adjustment, on common
/// random numbers.
pub fn parity_residual(m: &MarketParams, cfg: &MCConfig) -> Result<f64> {
    Ok(estimate_pair(m, cfg)?.parity_residual)
}

/// ((1 − e^{−rt})/(rt)) S₀ − e^{−rt} K, with the r → 0 limit guarded.
fn analytic_parity_adjustment(m: &MarketParams) -> f64 {
    let y = m.rate * m.expiry;
    let avg_factor = if y.abs() < 1e-300 { 1.0 } else { -(-y).exp_m1() / y };
    avg_factor * m.spot - (-y).exp() * m.strike
}

#[cfg(test)]
mod tests {
    use super::*;

    fn benchmark() -> MarketParams {
        MarketParams {
            spot: 2.0,
            strike: 2.0,
            rate: 0.05,
            vol: 0.5,
            expiry: 1.0,
        }
    }

    fn cfg(n_paths: usize, seed: u64) -> MCConfig {
        MCConfig {
            n_paths,
            n_steps: 252,
            seed,
            antithetic: true,
        }
    }

    #[test]
    fn reproducible_bit_exactly() {
        let m = benchmark();
        let c = cfg(20_000, 7);
        let a = estimate_pair(&m, &c).unwrap();
        let b = estimate_pair(&m, &c).unwrap();
        assert_eq!(a.put.mean.to_bits(), b.put.mean.to_bits());
        assert_eq!(a.call.stderr.to_bits(), b.call.stderr.to_bits());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn thread_count_does_not_change_bits() {
        let m = benchmark();
        let c = cfg(20_000, 11);
        let wide = estimate_pair(&m, &c).unwrap();
        let narrow = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| estimate_pair(&m, &c).unwrap());
        assert_eq!(wide.put.mean.to_bits(), narrow.put.mean.to_bits());
        assert_eq!(wide.call.mean.to_bits(), narrow.call.mean.to_bits());
    }

    #[test]
    fn degenerate_volatility_pins_the_average() {
        let m = MarketParams {
            spot: 1.0,
            strike: 2.0,
            rate: 0.0,
            vol: 1e-4,
            expiry: 1.0,
        };
        let e = estimate(&m, OptionKind::Put, &cfg(10_000, 3)).unwrap();
        assert!((e.mean - 1.0).abs() <= 3.0 * e.stderr + 1e-6, "mean {}", e.mean);
    }

    #[test]
    fn zero_strike_call_matches_expected_average() {
        let m = MarketParams {
            spot: 2.0,
            strike: 0.0,
            rate: 0.05,
            vol: 0.5,
            expiry: 1.0,
        };
        let e = estimate(&m, OptionKind::Call, &cfg(100_000, 5)).unwrap();
        let expected = (1.0 - (-0.05f64).exp()) / 0.05 * 2.0;
        assert!(
            (e.mean - expected).abs() <= 3.0 * e.stderr,
            "mean {} expected {expected} stderr {}",
            e.mean,
            e.stderr
        );
    }

    #[test]
    fn parity_residual_within_noise() {
        let m = benchmark();
        let pair = estimate_pair(&m, &cfg(50_000, 9)).unwrap();
        assert!(
            pair.parity_residual.abs() <= 3.0 * pair.parity_residual_stderr,
            "residual {} stderr {}",
            pair.parity_residual,
            pair.parity_residual_stderr
        );
    }

    #[test]
    fn zero_strike_put_leg_vanishes_pathwise() {
        let m = MarketParams {
            strike: 0.0,
            ..benchmark()
        };
        let pair = estimate_pair(&m, &cfg(10_000, 13)).unwrap();
        // every put payoff is exactly zero, so the residual reduces to the
        // averaging noise of the call leg alone
        assert_eq!(pair.put.mean, 0.0);
        assert!(pair.parity_residual.abs() <= 3.0 * pair.parity_residual_stderr);
    }

    #[test]
    fn tiny_rate_does_not_divide_by_zero() {
        let m = MarketParams {
            rate: 1e-12,
            ..benchmark()
        };
        let r = parity_residual(&m, &cfg(2_000, 1)).unwrap();
        assert!(r.is_finite());
    }

    #[test]
    fn stderr_scales_like_inverse_sqrt_paths() {
        let m = benchmark();
        let small = estimate(&m, OptionKind::Call, &cfg(10_000, 21)).unwrap();
        let large = estimate(&m, OptionKind::Call, &cfg(40_000, 21)).unwrap();
        let ratio = small.stderr / large.stderr;
        assert!((ratio - 2.0).abs() <= 0.4, "ratio {ratio}");
    }

    #[test]
    fn antithetic_reduces_variance() {
        let m = benchmark();
        let plain = estimate(
            &m,
            OptionKind::Call,
            &MCConfig {
                antithetic: false,
                ..cfg(40_000, 17)
            },
        )
        .unwrap();
        let anti = estimate(&m, OptionKind::Call, &cfg(40_000, 17)).unwrap();
        assert!(anti.stderr <= plain.stderr, "{} vs {}", anti.stderr, plain.stderr);
    }

    #[test]
    fn config_validation() {
        let m = benchmark();
        assert!(estimate_pair(&m, &MCConfig { n_paths: 100, ..cfg(100, 1) }).is_err());
        assert!(estimate_pair(
            &m,
            &MCConfig {
                n_paths: 10_001,
                ..cfg(10_001, 1)
            }
        )
        .is_err());
        assert!(estimate_pair(
            &m,
            &MCConfig {
                n_steps: 10,
                ..cfg(10_000, 1)
            }
        )
        .is_err());
    }
}
