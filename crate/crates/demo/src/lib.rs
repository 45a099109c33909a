//! wasm-bindgen surface for the browser demo: interactive put/call curves,
//! the pricing-kernel density, and a Monte Carlo spot check. Everything is
//! a thin wrapper over the `liouville` crate; data crosses the boundary as
//! flat `Float64Array`s.

// !(x > y) deliberately rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use wasm_bindgen::prelude::*;

use liouville::mc::{estimate_pair, MCConfig};
use liouville::pricing::{
    call_price, pricing_kernel, pricing_quadrature, put_price, to_dimensionless, MarketParams,
};

fn market(spot: f64, strike: f64, rate: f64, vol: f64, expiry: f64) -> MarketParams {
    MarketParams {
        spot,
        strike,
        rate,
        vol,
        expiry,
    }
}

/// Put and call values on a strike ladder: returns
/// [K₀, put₀, call₀, K₁, put₁, call₁, …] for n strikes in [k_min, k_max].
#[wasm_bindgen]
pub fn price_curve(
    spot: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    k_min: f64,
    k_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    price_curve_impl(spot, rate, vol, expiry, k_min, k_max, n).map_err(|e| JsValue::from_str(&e))
}

fn price_curve_impl(
    spot: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    k_min: f64,
    k_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    if !(2..=512).contains(&n) {
        return Err("n must lie in [2, 512]".into());
    }
    if !(k_max > k_min) || !(k_min >= 0.0) {
        return Err("strike range must satisfy 0 <= k_min < k_max".into());
    }
    let mut out = Vec::with_capacity(3 * n);
    let mut quad = None;
    for i in 0..n {
        let strike = k_min + (k_max - k_min) * i as f64 / (n - 1) as f64;
        let m = market(spot, strike, rate, vol, expiry);
        let dp = to_dimensionless(&m).map_err(|e| e.to_string())?;
        let spec = *quad.get_or_insert_with(|| pricing_quadrature(dp.tau));
        let put = put_price(&dp, &spec).map_err(|e| e.to_string())?;
        let call = call_price(&dp, &spec).map_err(|e| e.to_string())?;
        out.extend_from_slice(&[strike, put.value, call.value]);
    }
    Ok(out)
}

/// The pricing-kernel density P(τ, x, ξ) sampled on a ξ-grid: returns
/// [ξ₀, P₀, ξ₁, P₁, …]. This is the transition density of the running
/// integral of the price path.
#[wasm_bindgen]
pub fn kernel_density(
    spot: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    xi_min: f64,
    xi_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsValue> {
    kernel_density_impl(spot, rate, vol, expiry, xi_min, xi_max, n)
        .map_err(|e| JsValue::from_str(&e))
}

fn kernel_density_impl(
    spot: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    xi_min: f64,
    xi_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    if !(2..=512).contains(&n) {
        return Err("n must lie in [2, 512]".into());
    }
    if !(xi_min > 0.0) || !(xi_max > xi_min) {
        return Err("xi range must satisfy 0 < xi_min < xi_max".into());
    }
    let m = market(spot, 1.0, rate, vol, expiry);
    let dp = to_dimensionless(&m).map_err(|e| e.to_string())?;
    let spec = pricing_quadrature(dp.tau);
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let xi = xi_min + (xi_max - xi_min) * i as f64 / (n - 1) as f64;
        let p = pricing_kernel(&dp, xi, &spec).map_err(|e| e.to_string())?;
        out.push(xi);
        out.push(p);
    }
    Ok(out)
}

/// Spectral price vs. a Monte Carlo estimate on the same contract: returns
/// [spectral, mc_mean, mc_stderr, difference_in_stderrs].
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn mc_check(
    spot: f64,
    strike: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    call_side: bool,
    pairs: u32,
    seed: u32,
) -> Result<Vec<f64>, JsValue> {
    mc_check_impl(spot, strike, rate, vol, expiry, call_side, pairs, seed)
        .map_err(|e| JsValue::from_str(&e))
}

#[allow(clippy::too_many_arguments)]
fn mc_check_impl(
    spot: f64,
    strike: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    call_side: bool,
    pairs: u32,
    seed: u32,
) -> Result<Vec<f64>, String> {
    if !(500..=2_000_000).contains(&pairs) {
        return Err("pairs must lie in [500, 2000000]".into());
    }
    let m = market(spot, strike, rate, vol, expiry);
    let dp = to_dimensionless(&m).map_err(|e| e.to_string())?;
    let spec = pricing_quadrature(dp.tau);
    let spectral = if call_side {
        call_price(&dp, &spec).map_err(|e| e.to_string())?
    } else {
        put_price(&dp, &spec).map_err(|e| e.to_string())?
    };
    let cfg = MCConfig {
        n_paths: 2 * pairs as usize,
        n_steps: 252,
        seed: seed as u64,
        antithetic: true,
    };
    let pair = estimate_pair(&m, &cfg).map_err(|e| e.to_string())?;
    let est = if call_side { pair.call } else { pair.put };
    let sigmas = (spectral.value - est.mean) / est.stderr;
    Ok(vec![spectral.value, est.mean, est.stderr, sigmas])
}
