//! Command implementations behind the `hevqe` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use hevqe_core::estimator::error_bound;
use hevqe_core::fermion::{map_molecule, EncodingScheme, MappingOptions};
use hevqe_core::spsa::OptimizationTrace;
use hevqe_core::{QubitHamiltonian, TpbGrouping};

use crate::config::{ProblemConfig, RunConfig, Scenario};
use crate::error::ConfigError;
use crate::experiments::pipeline::{vqe_pipeline, PipelineSettings, Problem};
use crate::experiments::studies::{self, with_budget, SweepInput};
use crate::experiments::{
    heisenberg::heisenberg_hamiltonian, ExperimentReport, Percentiles, PointResult, RunSummary,
    Stats,
};
use crate::io;
use crate::seeds::sha256_hex;

/// Trace of one run as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub scenario: String,
    pub config_hash: String,
    pub master_seed: u64,
    /// Seed of this run.
    pub seed: u64,
    pub point: usize,
    pub point_label: String,
    pub run: usize,
    pub reference: f64,
    #[serde(flatten)]
    pub trace: OptimizationTrace,
}

/// Options of `map`.
#[derive(Debug, Clone)]
pub struct MapArgs {
    pub integrals: PathBuf,
    pub scheme: EncodingScheme,
    pub frozen: usize,
    pub electrons: Option<usize>,
    pub taper: bool,
    pub output: PathBuf,
}

/// Map integrals to a qubit Hamiltonian file with a provenance header.
pub fn cmd_map(args: &MapArgs) -> Result<QubitHamiltonian> {
    let fermion = io::load_fcidump(&args.integrals)?;
    let opts = MappingOptions {
        scheme: args.scheme,
        frozen_orbitals: args.frozen,
        taper: args.taper,
        electrons: args.electrons,
        z_half: None,
    };
    let mapped = map_molecule(&fermion, &opts)
        .map_err(|e| ConfigError::new(format!("{}: {e}", args.integrals.display())))?;
    let h = mapped.qubit;
    let input_hash = sha256_hex(io::read_input(&args.integrals)?.as_bytes());
    let header = vec![
        ("source".to_string(), args.integrals.display().to_string()),
        ("source_sha256".to_string(), input_hash),
        ("scheme".to_string(), scheme_name(args.scheme)),
        (
            "sector".to_string(),
            match &mapped.sector {
                Some(s) => format!(
                    "electrons={} z_half={:+} z_full={:+}",
                    s.electron_count, s.z_half, s.z_full
                ),
                None => "untapered".to_string(),
            },
        ),
        (
            "frozen_modes".to_string(),
            format!("{:?}", mapped.frozen_modes),
        ),
        ("qubits".to_string(), h.n_qubits().to_string()),
        ("terms".to_string(), h.len().to_string()),
        (
            "tpb_sets".to_string(),
            TpbGrouping::greedy(&h).len().to_string(),
        ),
    ];
    io::write_text(&args.output, &io::hamiltonian_text(&h, &header))?;
    Ok(h)
}

pub fn scheme_name(scheme: EncodingScheme) -> String {
    serde_json::to_value(scheme)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// `jordan_wigner` (`jw`), `parity` or `binary_tree` (`bk`).
pub fn parse_scheme(name: &str) -> Result<EncodingScheme, String> {
    match name {
        "jw" => Ok(EncodingScheme::JordanWigner),
        "bk" => Ok(EncodingScheme::BinaryTree),
        _ => serde_json::from_value(serde_json::Value::String(name.to_string())).map_err(|_| {
            format!("unknown scheme {name}; use jordan_wigner, parity or binary_tree")
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSet {
    pub basis: String,
    pub terms: Vec<String>,
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub source_hash: String,
    pub n_qubits: usize,
    pub terms: usize,
    pub tpb_sets: usize,
    /// Standard-error bounds at 10³ shots per set.
    pub bound_ungrouped: f64,
    pub bound_grouped: f64,
    pub sets: Vec<GroupSet>,
}

/// TPB grouping of `h`.
pub fn cmd_group(h: &QubitHamiltonian, source_hash: &str) -> GroupReport {
    let g = TpbGrouping::greedy(h);
    let b = error_bound(h, &g, 1000);
    GroupReport {
        source_hash: source_hash.to_string(),
        n_qubits: h.n_qubits(),
        terms: h.len(),
        tpb_sets: g.len(),
        bound_ungrouped: b.ungrouped,
        bound_grouped: b.grouped,
        sets: g
            .sets
            .iter()
            .zip(&g.bases)
            .map(|(set, basis)| GroupSet {
                basis: basis.to_string(),
                terms: set
                    .iter()
                    .map(|&i| h.terms()[i].pauli.to_string())
                    .collect(),
                coefficients: set.iter().map(|&i| h.terms()[i].coefficient).collect(),
            })
            .collect(),
    }
}

fn settings(cfg: &RunConfig, problem: &Problem, depth: usize) -> PipelineSettings {
    PipelineSettings {
        ansatz: cfg.ansatz.resolve(problem.n_qubits(), depth),
        noise: cfg.noise,
        readout: cfg.readout.clone(),
        sampling: cfg.sampling.clone(),
        spsa: cfg.spsa.clone(),
        runs: cfg.runs,
        keep_traces: cfg.keep_traces,
        surrogate_shots: None,
    }
}

fn depths_or(list: &[usize], default: usize) -> Vec<usize> {
    if list.is_empty() {
        vec![default]
    } else {
        list.to_vec()
    }
}

fn sweep_inputs(cfg: &RunConfig) -> Result<Vec<SweepInput>> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| ConfigError::new("sweep needs a [sweep] section with points"))?;
    if sweep.points.is_empty() {
        return Err(ConfigError::new("sweep has no points").into());
    }
    sweep
        .points
        .iter()
        .enumerate()
        .map(|(i, pt)| {
            let (problem, parameter) = match (&cfg.problem, &pt.path, pt.j) {
                (ProblemConfig::Heisenberg(base), None, Some(j)) => {
                    let mut h = base.clone();
                    h.j = j;
                    let hamiltonian = heisenberg_hamiltonian(&h).map_err(|e| ConfigError::new(e.to_string()))?;
                    let mut p = Problem::new(format!("J={j}"), hamiltonian)?;
                    p.spin_model = true;
                    (p, ("J".to_string(), j))
                }
                (ProblemConfig::Fcidump { .. } | ProblemConfig::Hamiltonian { .. }, Some(path), None) => {
                    let mut pc = cfg.problem.clone();
                    match &mut pc {
                        ProblemConfig::Fcidump { path: p, .. } | ProblemConfig::Hamiltonian { path: p } => {
                            *p = path.clone()
                        }
                        ProblemConfig::Heisenberg(_) => unreachable!(),
                    }
                    let p = Problem::from_config(&pc)?;
                    let x = pt.distance.unwrap_or(i as f64);
                    (p, ("distance".to_string(), x))
                }
                _ => {
                    return Err(ConfigError::new(format!(
                        "sweep point {i}: give `path` for molecular problems or `j` for Heisenberg problems"
                    ))
                    .into())
                }
            };
            Ok(SweepInput {
                label: format!("{}={}", parameter.0, parameter.1),
                parameter,
                problem,
            })
        })
        .collect()
}

/// Scenario name used for seeds and outputs.
pub fn scenario_name(cmd: Scenario, cfg: &RunConfig) -> &'static str {
    match (cmd, &cfg.problem) {
        (Scenario::Sweep, ProblemConfig::Heisenberg(_)) => Scenario::Heisenberg.name(),
        _ => cmd.name(),
    }
}

/// Run an optimization scenario and return its report.
pub fn run_scenario(cmd: Scenario, cfg: &RunConfig) -> Result<ExperimentReport> {
    let scenario = scenario_name(cmd, cfg);
    let mut report = ExperimentReport::new(scenario, cfg.seed, &cfg.hash());
    let seed = cfg.seed;
    let study = &cfg.study;
    match cmd {
        Scenario::Optimize | Scenario::Heisenberg if cfg.sweep.is_none() => {
            let problem = Problem::from_config(&cfg.problem)?;
            let s = settings(cfg, &problem, cfg.ansatz.depth);
            let mut params = BTreeMap::new();
            params.insert("depth".to_string(), cfg.ansatz.depth as f64);
            report.points.push(vqe_pipeline(
                &problem,
                &s,
                seed,
                scenario,
                0,
                problem.label.clone(),
                params,
            ));
        }
        Scenario::Optimize | Scenario::Heisenberg | Scenario::Sweep => {
            let inputs = sweep_inputs(cfg)?;
            let depths = depths_or(
                &cfg.sweep
                    .as_ref()
                    .map(|s| s.depths.clone())
                    .unwrap_or_default(),
                cfg.ansatz.depth,
            );
            let s = settings(cfg, &inputs[0].problem, cfg.ansatz.depth);
            let (points, series) =
                studies::dissociation_sweep(&inputs, &s, &depths, seed, scenario);
            report.points = points;
            report.series = series;
        }
        Scenario::DepthSearch => {
            let problem = Problem::from_config(&cfg.problem)?;
            let s = settings(cfg, &problem, study.d_min);
            let (points, outcome) = studies::critical_depth_search(
                &problem,
                &s,
                study.d_min,
                study.d_max,
                study.budget,
                study.threshold,
                seed,
                scenario,
            );
            report.points = points;
            report.outcome = serde_json::to_value(outcome)?;
        }
        Scenario::PhaseStudy => {
            let problem = Problem::from_config(&cfg.problem)?;
            if study.phases.is_empty() {
                return Err(ConfigError::new("phase-study needs study.phases").into());
            }
            let mut s = settings(cfg, &problem, cfg.ansatz.depth);
            s.spsa = with_budget(&cfg.spsa, study.budget);
            let depths = depths_or(&study.depths, cfg.ansatz.depth);
            let (points, series) = studies::entangler_phase_study(
                &problem,
                &s,
                &depths,
                &study.phases,
                seed,
                scenario,
            )?;
            report.points = points;
            report.series = series;
        }
        Scenario::NoiseScaling => {
            let problem = Problem::from_config(&cfg.problem)?;
            if study.xi.is_empty() {
                return Err(ConfigError::new("noise-scaling needs study.xi").into());
            }
            let mut s = settings(cfg, &problem, cfg.ansatz.depth);
            s.spsa = with_budget(&cfg.spsa, study.budget);
            let depths = depths_or(&study.depths, cfg.ansatz.depth);
            let (points, series) =
                studies::noise_scaling_study(&problem, &s, &depths, &study.xi, seed, scenario);
            report.points = points;
            report.series = series;
        }
        Scenario::SamplingScaling => {
            let problem = Problem::from_config(&cfg.problem)?;
            if study.shots.is_empty() {
                return Err(ConfigError::new("sampling-scaling needs study.shots").into());
            }
            let mut s = settings(cfg, &problem, cfg.ansatz.depth);
            s.spsa = with_budget(&cfg.spsa, study.budget);
            let (points, series, eps) = studies::sampling_scaling_study(
                &problem,
                &s,
                cfg.ansatz.depth,
                &study.shots,
                study.epsilon_states,
                seed,
                scenario,
            )?;
            report.points = points;
            report.series = vec![series];
            report.outcome = serde_json::json!({ "epsilon_a": eps, "epsilon_shots": 1000 });
        }
        Scenario::Group | Scenario::Map => {
            return Err(
                ConfigError::new(format!("{} is not an optimization scenario", cmd.name())).into(),
            )
        }
    }
    Ok(report)
}

/// Move traces out of `report` into trace files.
pub fn split_traces(report: &mut ExperimentReport) -> Vec<TraceFile> {
    let mut out = Vec::new();
    for (i, p) in report.points.iter_mut().enumerate() {
        for r in &mut p.runs {
            if let Some(trace) = r.trace.take() {
                out.push(TraceFile {
                    scenario: report.scenario.clone(),
                    config_hash: report.config_hash.clone(),
                    master_seed: report.seed,
                    seed: r.seed,
                    point: i,
                    point_label: p.label.clone(),
                    run: r.run,
                    reference: p.reference,
                    trace,
                });
            }
        }
    }
    out
}

/// Write report JSON, CSV and trace files into `dir`; returns the paths.
pub fn write_outputs(dir: &Path, report: &mut ExperimentReport) -> Result<Vec<PathBuf>> {
    let traces = split_traces(report);
    let mut written = Vec::new();
    for t in &traces {
        let path = dir
            .join("traces")
            .join(format!("{}-p{:03}-r{:03}.json", t.scenario, t.point, t.run));
        io::write_json(&path, t)?;
        written.push(path);
    }
    let json = dir.join(format!("{}.json", report.scenario));
    io::write_json(&json, report)?;
    let csv = dir.join(format!("{}.csv", report.scenario));
    io::write_text(&csv, &io::report_csv(report)?)?;
    written.push(json);
    written.push(csv);
    Ok(written)
}

/// Human-readable summary: `E_f`, reference, error and verdict per point.
pub fn summary(report: &ExperimentReport, threshold: f64) -> String {
    let mut s = format!(
        "scenario {} seed {} config {}\n",
        report.scenario,
        report.seed,
        &report.config_hash[..report.config_hash.len().min(12)]
    );
    for p in &report.points {
        let best = p.runs.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
        let hits = p.runs.iter().filter(|r| r.error <= threshold).count();
        s.push_str(&format!(
            "{:<28} E_f(median) {:>14.8}  E_G {:>14.8}  error mean {:.3e} best {:.3e}  within {:.1e}: {}/{} runs{}\n",
            p.label,
            p.stats.energy.p50,
            p.reference,
            p.stats.mean_error,
            best,
            threshold,
            hits,
            p.runs.len(),
            if p.failures.is_empty() {
                String::new()
            } else {
                format!("  ({} failed)", p.failures.len())
            }
        ));
    }
    if !report.outcome.is_null() {
        s.push_str(&format!("outcome {}\n", report.outcome));
    }
    s
}

/// Percentile summary written by `report`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub label: String,
    pub reference: f64,
    pub runs: usize,
    pub mean_error: f64,
    pub error: Percentiles,
    pub energy: Percentiles,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateSummary {
    pub scenario: String,
    pub config_hashes: Vec<String>,
    pub seeds: Vec<u64>,
    pub points: Vec<PointSummary>,
}

enum Input {
    Report(ExperimentReport),
    Trace(Box<TraceFile>),
}

fn read_any(path: &Path) -> Result<Input> {
    let text = io::read_input(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())))?;
    let parsed = if value.get("points").is_some() {
        serde_json::from_value(value).map(Input::Report)
    } else {
        serde_json::from_value(value).map(|t| Input::Trace(Box::new(t)))
    };
    parsed.map_err(|e| {
        ConfigError::new(format!(
            "{}: not a report or trace file: {e}",
            path.display()
        ))
        .into()
    })
}

fn trace_summary(t: &TraceFile) -> RunSummary {
    RunSummary {
        run: t.run,
        seed: t.seed,
        energy: t.trace.final_energy,
        std_error: t.trace.final_std_error,
        exact_energy: f64::NAN,
        error: t.trace.final_energy - t.reference,
        function_calls: t.trace.function_calls,
        theta_final: t.trace.theta_final.clone(),
        z_expectations: Vec::new(),
        magnetization: None,
        trace: None,
    }
}

/// Merge report and trace files of one scenario. Statistics are recomputed
/// from the per-run values.
pub fn aggregate(paths: &[PathBuf]) -> Result<(ExperimentReport, AggregateSummary)> {
    if paths.is_empty() {
        return Err(ConfigError::new("report needs at least one input file").into());
    }
    let mut scenario: Option<String> = None;
    let mut hashes = Vec::new();
    let mut seeds = Vec::new();
    let mut points: Vec<PointResult> = Vec::new();
    for path in paths {
        let input = read_any(path)?;
        let (sc, hash, seed) = match &input {
            Input::Report(r) => (r.scenario.clone(), r.config_hash.clone(), r.seed),
            Input::Trace(t) => (t.scenario.clone(), t.config_hash.clone(), t.master_seed),
        };
        match &scenario {
            Some(s) if *s != sc => {
                return Err(ConfigError::new(format!(
                    "{}: scenario {sc} differs from {s}; reports of different scenarios cannot be merged",
                    path.display()
                ))
                .into())
            }
            _ => scenario = Some(sc),
        }
        if !hashes.contains(&hash) {
            hashes.push(hash);
        }
        if !seeds.contains(&seed) {
            seeds.push(seed);
        }
        let incoming: Vec<PointResult> = match input {
            Input::Report(r) => r.points,
            Input::Trace(t) => vec![PointResult {
                label: t.point_label.clone(),
                parameters: BTreeMap::new(),
                reference: t.reference,
                runs: vec![trace_summary(&t)],
                stats: Stats::from_runs(&[]),
                failures: Vec::new(),
            }],
        };
        for p in incoming {
            match points.iter_mut().find(|q| q.label == p.label) {
                Some(q) => {
                    q.runs.extend(p.runs);
                    q.failures.extend(p.failures);
                }
                None => points.push(p),
            }
        }
    }
    for p in &mut points {
        p.runs.sort_by_key(|r| (r.run, r.seed));
    }
    let mut report = ExperimentReport::new(
        scenario.as_deref().unwrap_or_default(),
        seeds[0],
        &if hashes.len() == 1 {
            hashes[0].clone()
        } else {
            "mixed".to_string()
        },
    );
    report.points = points;
    report.recompute_stats();
    let summary = AggregateSummary {
        scenario: report.scenario.clone(),
        config_hashes: hashes,
        seeds,
        points: report
            .points
            .iter()
            .map(|p| PointSummary {
                label: p.label.clone(),
                reference: p.reference,
                runs: p.stats.runs,
                mean_error: p.stats.mean_error,
                error: p.stats.error,
                energy: p.stats.energy,
            })
            .collect(),
    };
    Ok((report, summary))
}

/// Load a Hamiltonian for `group`: a text file or the problem of a config.
pub fn group_source(
    hamiltonian: Option<&Path>,
    cfg: Option<&RunConfig>,
) -> Result<(QubitHamiltonian, String)> {
    match (hamiltonian, cfg) {
        (Some(path), _) => {
            let text = io::read_input(path)?;
            Ok((io::load_hamiltonian(path)?, sha256_hex(text.as_bytes())))
        }
        (None, Some(cfg)) => {
            let p = Problem::from_config(&cfg.problem).context("loading problem")?;
            Ok((p.hamiltonian, cfg.hash()))
        }
        (None, None) => Err(ConfigError::new("group needs --hamiltonian or --config").into()),
    }
}
