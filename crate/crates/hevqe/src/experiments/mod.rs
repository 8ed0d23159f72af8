//! Scripted studies: VQE pipeline, sweeps, depth search, entangler-phase,
//! noise and sampling scaling.

pub mod heisenberg;
pub mod pipeline;
pub mod studies;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use hevqe_core::spsa::OptimizationTrace;

pub use heisenberg::{heisenberg_hamiltonian, magnetization, HeisenbergConfig};
pub use pipeline::{vqe_pipeline, Evaluator, PipelineSettings, Problem};
pub use studies::{
    critical_depth_search, dissociation_sweep, entangler_phase_study, noise_scaling_study,
    sampling_scaling_study, DepthSearchOutcome, SweepInput,
};

/// JSON has no NaN or infinity; such values are written as `null` and read
/// back as NaN.
fn nullable<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

fn nullable_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    Ok(Vec::<Option<f64>>::deserialize(d)?
        .into_iter()
        .map(|v| v.unwrap_or(f64::NAN))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    /// Final estimate `E_f`.
    pub energy: f64,
    pub std_error: f64,
    /// Noise-inclusive `tr(ρH)` at the final angles.
    pub exact_energy: f64,
    /// `E_f − E_G`.
    pub error: f64,
    pub function_calls: usize,
    pub theta_final: Vec<f64>,
    pub z_expectations: Vec<f64>,
    pub magnetization: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<OptimizationTrace>,
}

/// 5th, 25th, 50th, 75th and 95th percentiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Percentiles {
    #[serde(deserialize_with = "nullable")]
    pub p5: f64,
    #[serde(deserialize_with = "nullable")]
    pub p25: f64,
    #[serde(deserialize_with = "nullable")]
    pub p50: f64,
    #[serde(deserialize_with = "nullable")]
    pub p75: f64,
    #[serde(deserialize_with = "nullable")]
    pub p95: f64,
}

/// Percentile `q ∈ [0, 100]` by linear interpolation between order
/// statistics.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = q / 100.0 * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        }
    }
}

impl Percentiles {
    pub fn of(values: &[f64]) -> Self {
        let mut s = values.to_vec();
        s.sort_by(f64::total_cmp);
        Percentiles {
            p5: percentile(&s, 5.0),
            p25: percentile(&s, 25.0),
            p50: percentile(&s, 50.0),
            p75: percentile(&s, 75.0),
            p95: percentile(&s, 95.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub runs: usize,
    #[serde(deserialize_with = "nullable")]
    pub mean_error: f64,
    #[serde(deserialize_with = "nullable")]
    pub min_error: f64,
    #[serde(deserialize_with = "nullable")]
    pub max_error: f64,
    pub error: Percentiles,
    pub energy: Percentiles,
}

impl Stats {
    pub fn from_runs(runs: &[RunSummary]) -> Self {
        let errors: Vec<f64> = runs.iter().map(|r| r.error).collect();
        let energies: Vec<f64> = runs.iter().map(|r| r.energy).collect();
        let n = runs.len();
        Stats {
            runs: n,
            mean_error: if n == 0 {
                f64::NAN
            } else {
                errors.iter().sum::<f64>() / n as f64
            },
            min_error: errors.iter().copied().fold(f64::INFINITY, f64::min),
            max_error: errors.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            error: Percentiles::of(&errors),
            energy: Percentiles::of(&energies),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub label: String,
    pub parameters: BTreeMap<String, f64>,
    /// Exact ground energy of the point's Hamiltonian.
    pub reference: f64,
    pub runs: Vec<RunSummary>,
    pub stats: Stats,
    /// Messages of runs that failed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl PointResult {
    pub fn mean_error(&self) -> f64 {
        self.stats.mean_error
    }
}

/// A named curve, e.g. mean error against entangler phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    #[serde(deserialize_with = "nullable_vec")]
    pub x: Vec<f64>,
    #[serde(deserialize_with = "nullable_vec")]
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub scenario: String,
    pub seed: u64,
    pub config_hash: String,
    pub points: Vec<PointResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<Series>,
    /// Study-specific result (critical depth, measured `ε_A`, ...).
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub outcome: serde_json::Value,
}

impl ExperimentReport {
    pub fn new(scenario: &str, seed: u64, config_hash: &str) -> Self {
        ExperimentReport {
            scenario: scenario.to_string(),
            seed,
            config_hash: config_hash.to_string(),
            points: Vec::new(),
            series: Vec::new(),
            outcome: serde_json::Value::Null,
        }
    }

    pub fn failures(&self) -> usize {
        self.points.iter().map(|p| p.failures.len()).sum()
    }

    /// Recompute every point's statistics from its runs.
    pub fn recompute_stats(&mut self) {
        for p in &mut self.points {
            p.stats = Stats::from_runs(&p.runs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentiles_are_order_statistics() {
        let v: Vec<f64> = (0..=100).map(f64::from).collect();
        let p = Percentiles::of(&v);
        assert_eq!(
            (p.p5, p.p25, p.p50, p.p75, p.p95),
            (5.0, 25.0, 50.0, 75.0, 95.0)
        );
        assert_eq!(Percentiles::of(&[2.0]).p95, 2.0);
        assert_eq!(percentile(&[0.0, 1.0], 50.0), 0.5);
        assert!(percentile(&[], 50.0).is_nan());
    }

    #[test]
    fn empty_point_round_trips_through_json() {
        let p = PointResult {
            label: "x".into(),
            parameters: BTreeMap::new(),
            reference: -1.0,
            runs: Vec::new(),
            stats: Stats::from_runs(&[]),
            failures: vec!["run 0: boom".into()],
        };
        let mut r = ExperimentReport::new("optimize", 1, "h");
        r.points.push(p);
        r.series.push(Series {
            name: "s".into(),
            x: vec![1.0, f64::INFINITY],
            y: vec![f64::NAN, 2.0],
        });
        let back: ExperimentReport =
            serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert!(back.points[0].stats.mean_error.is_nan());
        assert!(back.series[0].x[1].is_nan());
        assert_eq!(back.series[0].y[1], 2.0);
        assert_eq!(back.failures(), 1);
    }
}
