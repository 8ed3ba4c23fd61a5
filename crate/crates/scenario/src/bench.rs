//! Derivative-evaluation cost per parameterization.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use eulerflight::control::BankProfile;
use eulerflight::models::{CartesianModel, RvModel, RvhModel, RvlModel, SphericalModel};
use eulerflight::propagation::OdeSystem;
use eulerflight::trig;
use serde::Serialize;
use thiserror::Error;

use crate::config::{Param, ScenarioConfig};
use crate::runner::{initial_state, Start};

pub const MIN_EVALS: usize = 10_000;
const BATCH: usize = 1000;

#[derive(Debug, Error)]
#[error("at least {MIN_EVALS} evaluations are needed, got {0}")]
pub struct BenchError(pub usize);

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub param: Param,
    pub evals: usize,
    pub mean_ns: f64,
    /// Median over batches of the per-evaluation time.
    pub median_ns: f64,
    pub trig_per_eval: f64,
    /// Why the form could not be timed at this state.
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub scenario: String,
    pub rows: Vec<BenchRow>,
}

fn time<const N: usize, S: OdeSystem<N>>(param: Param, sys: &S, y: [f64; N], n: usize) -> BenchRow {
    let skip = |why: String| BenchRow {
        param,
        evals: 0,
        mean_ns: f64::NAN,
        median_ns: f64::NAN,
        trig_per_eval: f64::NAN,
        skipped: Some(why),
    };
    if let Err(e) = sys.rates(0.0, &y) {
        return skip(e.to_string());
    }
    let (_, trig_calls) = trig::count(|| {
        for _ in 0..n.min(BATCH) {
            let _ = black_box(sys.rates(black_box(0.0), black_box(&y)));
        }
    });
    let trig_per_eval = trig_calls as f64 / n.min(BATCH) as f64;

    let mut batch_ns = Vec::with_capacity(n / BATCH + 1);
    let mut done = 0;
    let start = Instant::now();
    while done < n {
        let m = BATCH.min(n - done);
        let t0 = Instant::now();
        for _ in 0..m {
            let _ = black_box(sys.rates(black_box(0.0), black_box(&y)));
        }
        batch_ns.push(t0.elapsed().as_nanos() as f64 / m as f64);
        done += m;
    }
    let total = start.elapsed().as_nanos() as f64;
    batch_ns.sort_by(f64::total_cmp);
    let mid = batch_ns.len() / 2;
    let median_ns = if batch_ns.len() % 2 == 1 {
        batch_ns[mid]
    } else {
        0.5 * (batch_ns[mid - 1] + batch_ns[mid])
    };
    BenchRow {
        param,
        evals: n,
        mean_ns: total / n as f64,
        median_ns,
        trig_per_eval,
        skipped: None,
    }
}

/// Times `n` derivative evaluations at the scenario's initial state in every
/// parameterization the scenario lists.
pub fn benchmark_derivatives(cfg: &ScenarioConfig, n: usize) -> Result<BenchReport, BenchError> {
    if n < MIN_EVALS {
        return Err(BenchError(n));
    }
    let env = cfg.env;
    let lift_rate_only = matches!(cfg.controls.bank, BankProfile::LiftFrameRate(_));
    let rows = cfg
        .parameterizations
        .iter()
        .map(|&param| {
            let controls = cfg.controls.clone();
            if lift_rate_only && param != Param::Rvl {
                return BenchRow {
                    param,
                    evals: 0,
                    mean_ns: f64::NAN,
                    median_ns: f64::NAN,
                    trig_per_eval: f64::NAN,
                    skipped: Some("lift_frame_rate bank drives rvl only".into()),
                };
            }
            match initial_state(param, cfg) {
                Start::Rv(y) => time(param, &RvModel { env, controls }, y, n),
                Start::Rvl(y) => time(param, &RvlModel { env, controls }, y, n),
                Start::Rvh(y) => time(param, &RvhModel { env, controls }, y, n),
                Start::Spherical(y) => time(param, &SphericalModel { env, controls }, y, n),
                Start::Cartesian(y) => time(param, &CartesianModel { env, controls }, y, n),
                Start::Singular(why) => BenchRow {
                    param,
                    evals: 0,
                    mean_ns: f64::NAN,
                    median_ns: f64::NAN,
                    trig_per_eval: f64::NAN,
                    skipped: Some(why),
                },
            }
        })
        .collect();
    Ok(BenchReport {
        scenario: cfg.name.clone(),
        rows,
    })
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.scenario);
        let _ = writeln!(
            s,
            "{:<10} {:>10} {:>12} {:>12} {:>10}",
            "form", "evals", "mean ns", "median ns", "trig/eval"
        );
        for r in &self.rows {
            match &r.skipped {
                Some(why) => {
                    let _ = writeln!(s, "{:<10} skipped: {}", r.param.as_str(), why);
                }
                None => {
                    let _ = writeln!(
                        s,
                        "{:<10} {:>10} {:>12.1} {:>12.1} {:>10.0}",
                        r.param.as_str(),
                        r.evals,
                        r.mean_ns,
                        r.median_ns,
                        r.trig_per_eval
                    );
                }
            }
        }
        s
    }

    pub fn row(&self, param: Param) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.param == param)
    }
}
