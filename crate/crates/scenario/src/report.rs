//! Cross-parameterization comparison written as JSON next to the CSVs.

use serde::Serialize;

use crate::config::Param;
use crate::output::Row;
use crate::runner::{RateNorms, RunResult, StopSummary};

/// Two samples are compared when their times agree to this (s).
const GRID_TIME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct FinalState {
    pub t: f64,
    pub r: f64,
    pub v: f64,
    pub position: [f64; 3],
    pub velocity: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct NormDrift {
    pub t: Vec<f64>,
    /// `| |qA| - 1 |`, absent for forms without `qA`.
    pub qa: Option<Vec<f64>>,
    pub qb: Option<Vec<f64>>,
    pub max_qa: Option<f64>,
    pub max_qb: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub param: Param,
    pub stop: StopSummary,
    pub samples: usize,
    pub evaluations: u64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub wall_time_s: f64,
    pub final_state: Option<FinalState>,
    pub norm_drift: NormDrift,
    pub rate_norms: Option<RateNorms>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairwiseError {
    pub a: Param,
    pub b: Param,
    pub t: Vec<f64>,
    /// `|r_a - r_b|` in `E` (m).
    pub e_r: Vec<f64>,
    pub max_e_r: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub scenario: String,
    pub runs: Vec<RunSummary>,
    pub pairs: Vec<PairwiseError>,
}

fn max_of(xs: &[f64]) -> Option<f64> {
    xs.iter().copied().reduce(f64::max)
}

fn drift(rows: &[Row], pick: impl Fn(&Row) -> Option<f64>) -> Option<Vec<f64>> {
    rows.iter().map(|r| pick(r).map(|n| (n - 1.0).abs())).collect()
}

pub fn summarize(run: &RunResult) -> RunSummary {
    let qa = drift(&run.rows, |r| r.norm_qa).filter(|v| !v.is_empty());
    let qb = drift(&run.rows, |r| r.norm_qb).filter(|v| !v.is_empty());
    RunSummary {
        param: run.param,
        stop: run.stop.clone(),
        samples: run.rows.len(),
        evaluations: run.evaluations,
        accepted_steps: run.accepted_steps,
        rejected_steps: run.rejected_steps,
        wall_time_s: run.wall_time.as_secs_f64(),
        final_state: run.rows.last().map(|r| FinalState {
            t: r.t,
            r: r.r,
            v: r.v,
            position: r.position,
            velocity: r.velocity,
        }),
        norm_drift: NormDrift {
            t: run.rows.iter().map(|r| r.t).collect(),
            max_qa: qa.as_deref().and_then(max_of),
            max_qb: qb.as_deref().and_then(max_of),
            qa,
            qb,
        },
        rate_norms: run.rate_norms,
    }
}

/// Position differences at the sample times both runs share.
pub fn pairwise(a: &RunResult, b: &RunResult) -> PairwiseError {
    let (mut t, mut e_r) = (Vec::new(), Vec::new());
    let mut j = 0;
    for ra in &a.rows {
        while j < b.rows.len() && b.rows[j].t < ra.t - GRID_TIME_TOL {
            j += 1;
        }
        let Some(rb) = b.rows.get(j) else { break };
        if (rb.t - ra.t).abs() <= GRID_TIME_TOL {
            let d: f64 = (0..3).map(|k| (ra.position[k] - rb.position[k]).powi(2)).sum();
            t.push(ra.t);
            e_r.push(d.sqrt());
        }
    }
    PairwiseError {
        a: a.param,
        b: b.param,
        max_e_r: max_of(&e_r),
        t,
        e_r,
    }
}

pub fn compare(scenario: &str, runs: &[RunResult]) -> ComparisonReport {
    let mut pairs = Vec::new();
    for (i, a) in runs.iter().enumerate() {
        for b in &runs[i + 1..] {
            pairs.push(pairwise(a, b));
        }
    }
    ComparisonReport {
        scenario: scenario.to_string(),
        runs: runs.iter().map(summarize).collect(),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::StopLabel;
    use std::time::Duration;

    fn run(param: Param, pts: &[(f64, f64)]) -> RunResult {
        RunResult {
            param,
            rows: pts
                .iter()
                .map(|&(t, x)| Row {
                    t,
                    position: [x, 0.0, 0.0],
                    norm_qa: Some(1.0 + 1e-12),
                    ..Default::default()
                })
                .collect(),
            rate_norms: None,
            stop: StopSummary {
                kind: StopLabel::TerminalTime,
                t: pts.last().map_or(0.0, |p| p.0),
                message: None,
            },
            evaluations: 0,
            accepted_steps: 0,
            rejected_steps: 0,
            wall_time: Duration::ZERO,
        }
    }

    #[test]
    fn pairs_only_shared_times() {
        let a = run(Param::Rv, &[(0.0, 1.0), (1.0, 2.0), (2.0, 3.0), (2.4, 5.0)]);
        let b = run(Param::Cartesian, &[(0.0, 1.5), (1.0, 2.0), (2.0, 2.0), (2.7, 0.0)]);
        let p = pairwise(&a, &b);
        assert_eq!(p.t, vec![0.0, 1.0, 2.0]);
        assert_eq!(p.e_r, vec![0.5, 0.0, 1.0]);
        assert_eq!(p.max_e_r, Some(1.0));
    }

    #[test]
    fn report_serializes() {
        let a = run(Param::Rv, &[(0.0, 1.0)]);
        let rep = compare("x", &[a.clone(), a]);
        assert_eq!(rep.pairs.len(), 1);
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains("\"param\":\"rv\""));
        let drift = rep.runs[0].norm_drift.max_qa.unwrap();
        assert!((drift - 1e-12).abs() < 1e-15);
        assert!(rep.runs[0].norm_drift.qb.is_none());
    }
}
