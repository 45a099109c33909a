//! Command-line front end: parses market parameters and method selection,
//! runs spectral and/or Monte Carlo pricing, and emits structured results
//! with cross-method diagnostics.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical-convergence
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use liouville::kernel::QuadratureSpec;
use liouville::mc::{self, MCConfig};
use liouville::pricing::{
    call_price, parity_adjustment, pricing_quadrature, put_price, to_dimensionless,
    DimensionlessParams, MarketParams, SpectralPrice,
};
use liouville::Error as CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Put,
    Call,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Spectral,
    Mc,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "liouville",
    version,
    about = "Spectral pricer for arithmetic-average Asian options",
    allow_negative_numbers = true
)]
struct Cli {
    /// Spot price S0.
    #[arg(long)]
    spot: Option<f64>,
    /// Strike K.
    #[arg(long)]
    strike: Option<f64>,
    /// Risk-free rate r (per year).
    #[arg(long)]
    rate: Option<f64>,
    /// Volatility sigma (per sqrt-year).
    #[arg(long)]
    vol: Option<f64>,
    /// Time to expiry t (years).
    #[arg(long)]
    expiry: Option<f64>,
    /// Option side.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Pricing method.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Spectral truncation override.
    #[arg(long)]
    umax: Option<f64>,
    /// Quadrature relative tolerance override.
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    /// Monte Carlo path count (antithetic pairs count as two paths).
    #[arg(long)]
    paths: Option<usize>,
    /// Monte Carlo steps per path.
    #[arg(long)]
    steps: Option<usize>,
    /// Monte Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
    /// key=value config file; command-line flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    output: Option<Output>,
    /// Also price the opposite side spectrally and report the parity
    /// identity residual.
    #[arg(long = "parity-check")]
    parity_check: bool,
}

#[derive(Debug, Serialize)]
struct InputsOut {
    spot: f64,
    strike: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    kind: &'static str,
    method: &'static str,
    seed: u64,
    paths: usize,
    steps: usize,
}

#[derive(Debug, Serialize)]
struct DimensionlessOut {
    rate_ratio: f64,
    tau: f64,
    drift: f64,
    log_spot: f64,
    moneyness: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    inputs: InputsOut,
    dimensionless: DimensionlessOut,
    method: &'static str,
    value: f64,
    quad_error_estimate: Option<f64>,
    mc_mean: Option<f64>,
    mc_stderr: Option<f64>,
    difference: Option<f64>,
    within_3_stderr: Option<bool>,
    parity_residual: Option<f64>,
    warnings: Vec<String>,
}

struct Resolved {
    market: MarketParams,
    kind: Kind,
    method: Method,
    quad: QuadratureSpec,
    mc: MCConfig,
    output: Output,
    parity_check: bool,
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let resolved = match resolve(cli) {
        Ok(r) => r,
        Err(msg) => return fail(2, &msg),
    };
    match run(&resolved) {
        Ok(report) => {
            emit(&resolved, &report);
            ExitCode::SUCCESS
        }
        Err(CoreError::InvalidInput(msg)) => fail(2, &msg),
        Err(e) => fail(3, &e.to_string()),
    }
}

/// Merge flags over the optional config file, then apply defaults.
fn resolve(cli: Cli) -> Result<Resolved, String> {
    let file = match &cli.config {
        Some(path) => parse_config(path)?,
        None => Vec::new(),
    };
    let from_file = |key: &str| -> Option<&str> {
        file.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    };
    let float = |key: &str, flag: Option<f64>| -> Result<Option<f64>, String> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => from_file(key)
                .map(|s| s.parse::<f64>().map_err(|_| format!("{key}: invalid number {s:?}")))
                .transpose(),
        }
    };
    let require = |key: &str, v: Option<f64>| -> Result<f64, String> {
        v.ok_or_else(|| format!("{key}: missing required value"))
    };

    let market = MarketParams {
        spot: require("spot", float("spot", cli.spot)?)?,
        strike: require("strike", float("strike", cli.strike)?)?,
        rate: require("rate", float("rate", cli.rate)?)?,
        vol: require("vol", float("vol", cli.vol)?)?,
        expiry: require("expiry", float("expiry", cli.expiry)?)?,
    };
    market.validate().map_err(|e| e.to_string())?;

    let kind = match cli.kind {
        Some(k) => k,
        None => match from_file("kind") {
            Some("put") => Kind::Put,
            Some("call") => Kind::Call,
            Some(other) => return Err(format!("kind: expected put or call, got {other:?}")),
            None => return Err("kind: missing required value".into()),
        },
    };
    let method = match cli.method {
        Some(m) => m,
        None => match from_file("method") {
            Some("spectral") => Method::Spectral,
            Some("mc") => Method::Mc,
            Some("both") => Method::Both,
            Some(other) => return Err(format!("method: expected spectral, mc or both, got {other:?}")),
            None => Method::Spectral,
        },
    };
    let output = match cli.output {
        Some(o) => o,
        None => match from_file("output") {
            Some("json") => Output::Json,
            Some("csv") => Output::Csv,
            Some("text") => Output::Text,
            Some(other) => return Err(format!("output: expected json, csv or text, got {other:?}")),
            None => Output::Text,
        },
    };

    let tau = market.vol * market.vol * market.expiry;
    let mut quad = pricing_quadrature(tau);
    if let Some(u) = float("umax", cli.umax)? {
        quad.u_max = u;
    }
    if let Some(t) = float("rel-tol", cli.rel_tol)? {
        quad.rel_tol = t;
    }
    quad.validate().map_err(|e| e.to_string())?;

    let defaults = MCConfig::default();
    let parse_usize = |key: &str, flag: Option<usize>| -> Result<Option<usize>, String> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => from_file(key)
                .map(|s| s.parse::<usize>().map_err(|_| format!("{key}: invalid integer {s:?}")))
                .transpose(),
        }
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match from_file("seed") {
            Some(s) => s.parse::<u64>().map_err(|_| format!("seed: invalid integer {s:?}"))?,
            None => defaults.seed,
        },
    };
    let mc = MCConfig {
        n_paths: parse_usize("paths", cli.paths)?.unwrap_or(defaults.n_paths),
        n_steps: parse_usize("steps", cli.steps)?.unwrap_or(defaults.n_steps),
        seed,
        antithetic: true,
    };
    if method != Method::Spectral {
        mc.validate().map_err(|e| e.to_string())?;
    }

    let parity_check = cli.parity_check
        || matches!(from_file("parity-check"), Some("true") | Some("1") | Some("yes"));

    Ok(Resolved {
        market,
        kind,
        method,
        quad,
        mc,
        output,
        parity_check,
    })
}

fn parse_config(path: &PathBuf) -> Result<Vec<(String, String)>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("config: cannot read {}: {e}", path.display()))?;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config: line {} is not key=value: {raw:?}", i + 1))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn spectral_for(kind: Kind, dp: &DimensionlessParams, quad: &QuadratureSpec) -> liouville::Result<SpectralPrice> {
    match kind {
        Kind::Put => put_price(dp, quad),
        Kind::Call => call_price(dp, quad),
    }
}

fn run(r: &Resolved) -> liouville::Result<Report> {
    let dp = to_dimensionless(&r.market)?;
    let mut warnings = Vec::new();
    if dp.tau < 0.05 {
        warnings.push(format!(
            "tau = {:.4} < 0.05: spectral convergence degrades; truncation raised accordingly",
            dp.tau
        ));
    }

    let spectral = match r.method {
        Method::Mc => None,
        _ => Some(spectral_for(r.kind, &dp, &r.quad)?),
    };
    let mc_pair = match r.method {
        Method::Spectral => None,
        _ => Some(mc::estimate_pair(&r.market, &r.mc)?),
    };
    let mc_est = mc_pair.as_ref().map(|p| match r.kind {
        Kind::Put => p.put,
        Kind::Call => p.call,
    });

    let parity_residual = if r.parity_check {
        let put = put_price(&dp, &r.quad)?;
        let call = call_price(&dp, &r.quad)?;
        Some(call.value - put.value - parity_adjustment(&dp))
    } else {
        None
    };

    let value = match (&spectral, &mc_est) {
        (Some(s), _) => s.value,
        (None, Some(e)) => e.mean,
        (None, None) => unreachable!("at least one method always runs"),
    };
    let difference = match (&spectral, &mc_est) {
        (Some(s), Some(e)) => Some(s.value - e.mean),
        _ => None,
    };
    let within_3_stderr = match (&difference, &mc_est) {
        (Some(d), Some(e)) => Some(d.abs() <= 3.0 * e.stderr),
        _ => None,
    };

    Ok(Report {
        inputs: InputsOut {
            spot: r.market.spot,
            strike: r.market.strike,
            rate: r.market.rate,
            vol: r.market.vol,
            expiry: r.market.expiry,
            kind: match r.kind {
                Kind::Put => "put",
                Kind::Call => "call",
            },
            method: method_name(r.method),
            seed: r.mc.seed,
            paths: r.mc.n_paths,
            steps: r.mc.n_steps,
        },
        dimensionless: DimensionlessOut {
            rate_ratio: dp.rate_ratio,
            tau: dp.tau,
            drift: dp.drift,
            log_spot: dp.log_spot,
            moneyness: dp.moneyness,
        },
        method: method_name(r.method),
        value,
        quad_error_estimate: spectral.as_ref().map(|s| s.quad_error_estimate),
        mc_mean: mc_est.as_ref().map(|e| e.mean),
        mc_stderr: mc_est.as_ref().map(|e| e.stderr),
        difference,
        within_3_stderr,
        parity_residual,
        warnings,
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Spectral => "spectral",
        Method::Mc => "mc",
        Method::Both => "both",
    }
}

fn emit(r: &Resolved, report: &Report) {
    match r.output {
        Output::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
        }
        Output::Csv => {
            let opt = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let optb = |v: &Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
            println!(
                "spot,strike,rate,vol,expiry,kind,method,value,quad_error_estimate,mc_mean,mc_stderr,difference,within_3_stderr,parity_residual,warnings"
            );
            println!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                report.inputs.spot,
                report.inputs.strike,
                report.inputs.rate,
                report.inputs.vol,
                report.inputs.expiry,
                report.inputs.kind,
                report.method,
                report.value,
                opt(&report.quad_error_estimate),
                opt(&report.mc_mean),
                opt(&report.mc_stderr),
                opt(&report.difference),
                optb(&report.within_3_stderr),
                opt(&report.parity_residual),
                report.warnings.join("; "),
            );
        }
        Output::Text => {
            println!(
                "{} {} (S0={}, K={}, r={}, vol={}, t={})",
                report.inputs.kind,
                report.method,
                report.inputs.spot,
                report.inputs.strike,
                report.inputs.rate,
                report.inputs.vol,
                report.inputs.expiry
            );
            println!(
                "dimensionless: R={:.6} tau={:.6} nu={:.6} k={:.6}",
                report.dimensionless.rate_ratio,
                report.dimensionless.tau,
                report.dimensionless.drift,
                report.dimensionless.moneyness
            );
            println!("value: {:.10}", report.value);
            if let Some(q) = report.quad_error_estimate {
                println!("quad error estimate: {q:.3e}");
            }
            if let (Some(m), Some(s)) = (report.mc_mean, report.mc_stderr) {
                println!("mc: {m:.10} +/- {s:.3e} (1 sigma)");
            }
            if let (Some(d), Some(w)) = (report.difference, report.within_3_stderr) {
                println!(
                    "spectral - mc: {d:.3e} ({})",
                    if w { "within 3 stderr" } else { "OUTSIDE 3 stderr" }
                );
            }
            if let Some(p) = report.parity_residual {
                println!("parity residual: {p:.3e}");
            }
            for w in &report.warnings {
                println!("warning: {w}");
            }
        }
    }
}
