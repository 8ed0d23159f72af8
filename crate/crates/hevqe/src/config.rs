//! TOML run configuration. Unknown keys are rejected; relative paths resolve
//! against the directory of the configuration file.

use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::{Deserialize, Serialize};

use hevqe_core::ansatz::{AnsatzConfig, EntanglerTemplate, Topology, Variant};
use hevqe_core::fermion::{EncodingScheme, MappingOptions};
use hevqe_core::sim::{NoiseModel, ReadoutModel};
use hevqe_core::spsa::SpsaConfig;

use crate::error::ConfigError;
use crate::experiments::heisenberg::HeisenbergConfig;
use crate::seeds::sha256_hex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Optimize,
    Sweep,
    Heisenberg,
    Group,
    Map,
    PhaseStudy,
    NoiseScaling,
    SamplingScaling,
    DepthSearch,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Optimize => "optimize",
            Scenario::Sweep => "sweep",
            Scenario::Heisenberg => "heisenberg",
            Scenario::Group => "group",
            Scenario::Map => "map",
            Scenario::PhaseStudy => "phase-study",
            Scenario::NoiseScaling => "noise-scaling",
            Scenario::SamplingScaling => "sampling-scaling",
            Scenario::DepthSearch => "depth-search",
        }
    }
}

/// `smoke` caps runs and budgets for quick checks; `paper` runs the
/// configuration as written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Smoke,
    #[default]
    Paper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemConfig {
    /// Molecular integrals, mapped with dressing, freezing, encoding and tapering.
    Fcidump {
        path: PathBuf,
        #[serde(default = "default_scheme")]
        scheme: EncodingScheme,
        #[serde(default)]
        frozen_orbitals: usize,
        #[serde(default = "yes")]
        taper: bool,
        #[serde(default)]
        electrons: Option<usize>,
        #[serde(default)]
        z_half: Option<i8>,
    },
    /// Qubit Hamiltonian in text format.
    Hamiltonian {
        path: PathBuf,
    },
    Heisenberg(HeisenbergConfig),
}

fn default_scheme() -> EncodingScheme {
    EncodingScheme::Parity
}

fn yes() -> bool {
    true
}

impl ProblemConfig {
    pub fn mapping_options(&self) -> Option<MappingOptions> {
        match self {
            ProblemConfig::Fcidump {
                scheme,
                frozen_orbitals,
                taper,
                electrons,
                z_half,
                ..
            } => Some(MappingOptions {
                scheme: *scheme,
                frozen_orbitals: *frozen_orbitals,
                taper: *taper,
                electrons: *electrons,
                z_half: *z_half,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSection {
    #[serde(default = "one")]
    pub depth: usize,
    /// Defaults to the experimental connectivity when one exists for the
    /// qubit count, all-to-all otherwise.
    #[serde(default)]
    pub topology: Option<Topology>,
    #[serde(default)]
    pub entangler: EntanglerTemplate,
    #[serde(default)]
    pub variant: Variant,
}

fn one() -> usize {
    1
}

impl Default for AnsatzSection {
    fn default() -> Self {
        AnsatzSection {
            depth: 1,
            topology: None,
            entangler: EntanglerTemplate::default(),
            variant: Variant::default(),
        }
    }
}

impl AnsatzSection {
    pub fn resolve(&self, n_qubits: usize, depth: usize) -> AnsatzConfig {
        AnsatzConfig {
            n_qubits,
            depth,
            topology: self
                .topology
                .clone()
                .or_else(|| Topology::experimental(n_qubits))
                .unwrap_or(Topology::AllToAll),
            entangler: self.entangler,
            variant: self.variant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// `tr(ρH)` (pure state without noise).
    #[default]
    Exact,
    /// Finite shots per TPB set.
    Sampled,
    /// Exact energy plus Gaussian noise of width `ε_A sqrt(10³/S)`.
    Surrogate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default)]
    pub mode: SamplingMode,
    /// Shots per TPB set during optimization.
    #[serde(default = "default_shots")]
    pub shots: u64,
    /// Shots per TPB set of the final estimate.
    #[serde(default = "default_final_shots")]
    pub final_shots: u64,
    /// Measure TPB sets jointly; `false` measures every term separately.
    #[serde(default = "yes")]
    pub grouped: bool,
    /// `ε_A` at 10³ shots for the surrogate mode; measured when absent.
    #[serde(default)]
    pub surrogate_epsilon: Option<f64>,
}

fn default_shots() -> u64 {
    1000
}

fn default_final_shots() -> u64 {
    100_000
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            mode: SamplingMode::Exact,
            shots: default_shots(),
            final_shots: default_final_shots(),
            grouped: true,
            surrogate_epsilon: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    /// Integral file for this geometry (molecular sweeps).
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Interatomic distance in Å, reported as the point parameter.
    #[serde(default)]
    pub distance: Option<f64>,
    /// Coupling (Heisenberg sweeps).
    #[serde(default)]
    pub j: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub points: Vec<SweepPoint>,
    /// Depths compared at every point; defaults to the ansatz depth.
    #[serde(default)]
    pub depths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default)]
    pub depths: Vec<usize>,
    /// Entangler phases in radians.
    #[serde(default)]
    pub phases: Vec<f64>,
    /// Depolarizing strengths.
    #[serde(default)]
    pub xi: Vec<f64>,
    /// Shots per set; `inf` gives the exact objective.
    #[serde(default)]
    pub shots: Vec<f64>,
    #[serde(default)]
    pub d_min: usize,
    #[serde(default = "default_d_max")]
    pub d_max: usize,
    /// Objective calls per optimization.
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Mean-error target.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Random states used to measure `ε_A`.
    #[serde(default = "default_epsilon_states")]
    pub epsilon_states: usize,
}

fn default_d_max() -> usize {
    8
}
fn default_budget() -> usize {
    50_000
}
fn default_threshold() -> f64 {
    hevqe_core::CHEMICAL_ACCURACY
}
fn default_epsilon_states() -> usize {
    100
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            depths: Vec::new(),
            phases: Vec::new(),
            xi: Vec::new(),
            shots: Vec::new(),
            d_min: 0,
            d_max: default_d_max(),
            budget: default_budget(),
            threshold: default_threshold(),
            epsilon_states: default_epsilon_states(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub scenario: Option<Scenario>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tier: Tier,
    #[serde(default)]
    pub out: Option<PathBuf>,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub readout: ReadoutModel,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub spsa: SpsaConfig,
    /// Independent optimizations per point.
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Keep the full iteration history of every run.
    #[serde(default)]
    pub keep_traces: bool,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub study: StudyConfig,
}

fn default_runs() -> usize {
    10
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| ConfigError::new(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parse `path` and resolve relative problem paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::io::read_input(path)?;
        let mut cfg = Self::from_toml(&text)
            .map_err(|e| ConfigError::new(format!("{}: {e}", path.display())))?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.problem {
            ProblemConfig::Fcidump { path, .. } | ProblemConfig::Hamiltonian { path } => fix(path),
            ProblemConfig::Heisenberg(_) => {}
        }
        if let Some(sweep) = &mut self.sweep {
            for p in &mut sweep.points {
                if let Some(path) = &mut p.path {
                    fix(path);
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| -> Result<()> { Err(ConfigError::new(m).into()) };
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if let Err(e) = self.spsa.validate() {
            return bad(e.to_string());
        }
        if let Err(e) = self.noise.validate() {
            return bad(format!("noise: {e}"));
        }
        if self.sampling.mode == SamplingMode::Sampled
            && (self.sampling.shots < 2 || self.sampling.final_shots < 2)
        {
            return bad("sampled mode needs at least 2 shots per set".into());
        }
        if let ProblemConfig::Heisenberg(h) = &self.problem {
            if let Err(e) = h.validate() {
                return bad(format!("problem: {e}"));
            }
        }
        if self.study.shots.iter().any(|s| s.is_nan() || *s < 2.0) {
            return bad("study.shots entries must be at least 2 (or inf)".into());
        }
        if self.study.xi.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return bad("study.xi entries must lie in [0, 1]".into());
        }
        Ok(())
    }

    /// Reduce runs and budgets for the smoke tier.
    pub fn apply_tier(&mut self) {
        if self.tier == Tier::Smoke {
            self.runs = self.runs.min(3);
            self.spsa.max_updates = self.spsa.max_updates.min(100);
            self.spsa.averaging_window = self.spsa.averaging_window.min(self.spsa.max_updates);
            self.sampling.final_shots = self.sampling.final_shots.min(10_000);
            self.study.budget = self.study.budget.min(2_000);
            self.study.epsilon_states = self.study.epsilon_states.min(10);
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        sha256_hex(
            serde_json::to_string(self)
                .expect("config serializes")
                .as_bytes(),
        )
    }
}
