//! Independent VQE runs on one Hamiltonian.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use hevqe_core::ansatz::{Ansatz, AnsatzConfig};
use hevqe_core::estimator::{sampled_energy, Measurable};
use hevqe_core::fermion::map_molecule;
use hevqe_core::sim::{DensityMatrix, NoiseModel, ReadoutModel, StateVector};
use hevqe_core::spsa::{self, Evaluation, SpsaConfig};
use hevqe_core::{rng_stream, QubitHamiltonian, TpbGrouping};

use super::heisenberg::{
    heisenberg_hamiltonian, magnetization, z_expectations, z_expectations_pure,
};
use super::{PointResult, RunSummary, Stats};
use crate::config::{ProblemConfig, SamplingConfig, SamplingMode};
use crate::error::ConfigError;
use crate::io;
use crate::seeds::task_seed;

/// A Hamiltonian with its exact ground energy.
#[derive(Debug, Clone)]
pub struct Problem {
    pub label: String,
    pub hamiltonian: QubitHamiltonian,
    pub reference: f64,
    /// Report magnetization for this problem.
    pub spin_model: bool,
}

impl Problem {
    pub fn new(label: impl Into<String>, hamiltonian: QubitHamiltonian) -> Result<Self> {
        let reference = hamiltonian
            .ground_energy()
            .context("exact diagonalization")?;
        Ok(Problem {
            label: label.into(),
            hamiltonian,
            reference,
            spin_model: false,
        })
    }

    pub fn from_config(problem: &ProblemConfig) -> Result<Self> {
        match problem {
            ProblemConfig::Fcidump { path, .. } => {
                let fermion = io::load_fcidump(path)?;
                let opts = problem.mapping_options().expect("fcidump problem");
                let mapped = map_molecule(&fermion, &opts)
                    .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())))?;
                Problem::new(file_label(path), mapped.qubit)
            }
            ProblemConfig::Hamiltonian { path } => {
                Problem::new(file_label(path), io::load_hamiltonian(path)?)
            }
            ProblemConfig::Heisenberg(cfg) => {
                let h = heisenberg_hamiltonian(cfg)
                    .map_err(|e| ConfigError::new(format!("problem: {e}")))?;
                let mut p = Problem::new(format!("heisenberg J={} B={}", cfg.j, cfg.b), h)?;
                p.spin_model = true;
                Ok(p)
            }
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }
}

fn file_label(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Everything a run needs besides the Hamiltonian and the seed.
#[derive(Debug, Clone)]
pub struct PipelineSettings {
    pub ansatz: AnsatzConfig,
    pub noise: NoiseModel,
    pub readout: ReadoutModel,
    pub sampling: SamplingConfig,
    pub spsa: SpsaConfig,
    pub runs: usize,
    pub keep_traces: bool,
    /// Shots per set seen by the surrogate objective; `None` is infinite.
    pub surrogate_shots: Option<f64>,
}

impl PipelineSettings {
    /// Noiseless exact objective.
    pub fn exact(ansatz: AnsatzConfig, spsa: SpsaConfig, runs: usize) -> Self {
        PipelineSettings {
            ansatz,
            noise: NoiseModel::None,
            readout: ReadoutModel::default(),
            sampling: SamplingConfig::default(),
            spsa,
            runs,
            keep_traces: false,
            surrogate_shots: None,
        }
    }

    /// Width of the surrogate noise.
    pub fn surrogate_sigma(&self) -> f64 {
        let eps = self.sampling.surrogate_epsilon.unwrap_or(0.0);
        match self.surrogate_shots {
            Some(s) if s.is_finite() => eps * (1e3 / s).sqrt(),
            Some(_) => 0.0,
            None => eps * (1e3 / self.sampling.shots as f64).sqrt(),
        }
    }
}

enum TrialState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

/// Objective functions for one problem and ansatz.
pub struct Evaluator<'a> {
    pub ansatz: Ansatz,
    problem: &'a Problem,
    settings: &'a PipelineSettings,
    grouping: TpbGrouping,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, settings: &'a PipelineSettings) -> Result<Self> {
        if settings.ansatz.n_qubits != problem.n_qubits() {
            return Err(ConfigError::new(format!(
                "ansatz has {} qubits, Hamiltonian {}",
                settings.ansatz.n_qubits,
                problem.n_qubits()
            ))
            .into());
        }
        let grouping = if settings.sampling.grouped {
            TpbGrouping::greedy(&problem.hamiltonian)
        } else {
            TpbGrouping::singletons(&problem.hamiltonian)
        };
        Ok(Evaluator {
            ansatz: Ansatz::new(settings.ansatz.clone())?,
            problem,
            settings,
            grouping,
        })
    }

    fn state(&self, theta: &[f64]) -> Result<TrialState> {
        Ok(if self.settings.noise.is_none() {
            TrialState::Pure(self.ansatz.prepare_pure(theta)?)
        } else {
            TrialState::Mixed(self.ansatz.prepare_state(theta, &self.settings.noise)?)
        })
    }

    fn with_state<T>(
        &self,
        theta: &[f64],
        f: impl FnOnce(&dyn Measurable) -> Result<T>,
    ) -> Result<T> {
        match self.state(theta)? {
            TrialState::Pure(s) => f(&s),
            TrialState::Mixed(s) => f(&s),
        }
    }

    /// `tr(ρ(θ)H)` including noise.
    pub fn exact(&self, theta: &[f64]) -> Result<f64> {
        self.with_state(theta, |s| Ok(s.exact_energy(&self.problem.hamiltonian)?))
    }

    pub fn z_expectations(&self, theta: &[f64]) -> Result<Vec<f64>> {
        Ok(match self.state(theta)? {
            TrialState::Pure(s) => z_expectations_pure(&s),
            TrialState::Mixed(s) => z_expectations(&s),
        })
    }

    pub fn sampled(
        &self,
        theta: &[f64],
        shots: u64,
        rng: &mut hevqe_core::Rng,
    ) -> Result<Evaluation> {
        self.with_state(theta, |s| {
            let e = sampled_energy(
                s,
                &self.problem.hamiltonian,
                &self.grouping,
                shots,
                &self.settings.readout,
                rng,
            )?;
            Ok(Evaluation {
                value: e.value,
                std_error: e.std_error,
            })
        })
    }

    /// Objective seen by the optimizer.
    pub fn objective(&self, theta: &[f64], rng: &mut hevqe_core::Rng) -> Result<Evaluation> {
        match self.settings.sampling.mode {
            SamplingMode::Exact => Ok(Evaluation::exact(self.exact(theta)?)),
            SamplingMode::Sampled => self.sampled(theta, self.settings.sampling.shots, rng),
            SamplingMode::Surrogate => {
                let sigma = self.settings.surrogate_sigma();
                let e = self.exact(theta)?;
                if sigma == 0.0 {
                    return Ok(Evaluation::exact(e));
                }
                let n = Normal::new(0.0, sigma).expect("finite width");
                Ok(Evaluation {
                    value: e + n.sample(rng),
                    std_error: sigma,
                })
            }
        }
    }

    /// Final estimate: sampled with `final_shots` in sampled mode, exact otherwise.
    pub fn final_estimate(&self, theta: &[f64], rng: &mut hevqe_core::Rng) -> Result<Evaluation> {
        match self.settings.sampling.mode {
            SamplingMode::Sampled => self.sampled(theta, self.settings.sampling.final_shots, rng),
            _ => Ok(Evaluation::exact(self.exact(theta)?)),
        }
    }

    pub fn final_shots(&self) -> Option<u64> {
        (self.settings.sampling.mode == SamplingMode::Sampled)
            .then_some(self.settings.sampling.final_shots)
    }
}

/// One optimization from a random start.
pub fn run_single(
    problem: &Problem,
    settings: &PipelineSettings,
    run: usize,
    seed: u64,
) -> Result<RunSummary> {
    let eval = Evaluator::new(problem, settings)?;
    let mut rng = rng_stream(seed, 0);
    let theta1 = eval.ansatz.initial_parameters(&mut rng);
    let mut objective =
        |t: &[f64], r: &mut hevqe_core::Rng| eval.objective(t, r).map_err(core_error);
    let mut fin =
        |t: &[f64], r: &mut hevqe_core::Rng| eval.final_estimate(t, r).map_err(core_error);
    let trace = spsa::run(
        &mut objective,
        &theta1,
        &settings.spsa,
        &mut fin,
        eval.final_shots(),
        &mut rng,
    )?;
    let exact_energy = eval.exact(&trace.theta_final)?;
    let z = eval.z_expectations(&trace.theta_final)?;
    Ok(RunSummary {
        run,
        seed,
        energy: trace.final_energy,
        std_error: trace.final_std_error,
        exact_energy,
        error: trace.final_energy - problem.reference,
        function_calls: trace.function_calls,
        theta_final: trace.theta_final.clone(),
        magnetization: problem.spin_model.then(|| magnetization(&z)),
        z_expectations: z,
        trace: settings.keep_traces.then_some(trace),
    })
}

fn core_error(e: anyhow::Error) -> hevqe_core::Error {
    match e.downcast::<hevqe_core::Error>() {
        Ok(e) => e,
        Err(e) => hevqe_core::Error::InvalidArgument(e.to_string()),
    }
}

/// `settings.runs` independent optimizations in parallel. Seeds depend only on
/// `(master_seed, scenario, point, run)`; failed runs are listed, not fatal.
pub fn vqe_pipeline(
    problem: &Problem,
    settings: &PipelineSettings,
    master_seed: u64,
    scenario: &str,
    point: usize,
    label: impl Into<String>,
    parameters: BTreeMap<String, f64>,
) -> PointResult {
    let outcomes: Vec<(usize, Result<RunSummary>)> = (0..settings.runs)
        .into_par_iter()
        .map(|run| {
            let seed = task_seed(master_seed, scenario, point, run);
            (run, run_single(problem, settings, run, seed))
        })
        .collect();
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for (run, r) in outcomes {
        match r {
            Ok(s) => runs.push(s),
            Err(e) => failures.push(format!("run {run}: {e:#}")),
        }
    }
    PointResult {
        label: label.into(),
        parameters,
        reference: problem.reference,
        stats: Stats::from_runs(&runs),
        runs,
        failures,
    }
}

/// `ε_A`: mean standard error of the grouped estimator at `shots` per set
/// over Haar-random states.
pub fn measure_epsilon(
    problem: &Problem,
    grouped: bool,
    n_states: usize,
    shots: u64,
    readout: &ReadoutModel,
    seed: u64,
) -> Result<f64> {
    let grouping = if grouped {
        TpbGrouping::greedy(&problem.hamiltonian)
    } else {
        TpbGrouping::singletons(&problem.hamiltonian)
    };
    let mut rng = rng_stream(seed, 1);
    let mut sum = 0.0;
    for _ in 0..n_states {
        let psi = StateVector::random(problem.n_qubits(), &mut rng)?;
        sum += sampled_energy(
            &psi,
            &problem.hamiltonian,
            &grouping,
            shots,
            readout,
            &mut rng,
        )?
        .std_error;
    }
    Ok(sum / n_states.max(1) as f64)
}
