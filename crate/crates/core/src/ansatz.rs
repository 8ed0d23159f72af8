//! Hardware-efficient trial states: Euler rotation layers interleaved with
//! fixed entanglers,
//!
//! ```text
//! |Φ(θ)⟩ = U_rot^d U_ENT … U_rot^1 U_ENT U_rot^0 |0…0⟩
//! ```
//!
//! Parameter layout, depth-major then qubit-minor:
//! - layer 0 stores `(X, Z_post)` per qubit (a leading Z acts trivially on `|0⟩`);
//! - layers `1..=d` store `(Z_pre, X, Z_post)` per qubit in `FullEuler` and
//!   `(X, Z_post)` in `ReducedZz`.
//!
//! Angles are listed in time order; each qubit's rotation is
//! `Z_{post} X_{x} Z_{pre}` with `Z_pre` acting first.

use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::sim::gates::{self, Mat2};
use crate::sim::{
    apply_depolarizing, apply_thermal_noise, cr_measured_terms, CompiledEntangler, CrTerm,
    DensityMatrix, EntanglerSpec, NoiseModel, StateVector, TermMap,
};
use crate::{Error, QubitHamiltonian, Result};

/// Which qubit pairs are entangled, grouped into layers of simultaneous
/// (qubit-disjoint) drives. Pairs are `(control, target)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// `(0,1)`.
    #[serde(rename = "experimental_2q")]
    Experimental2q,
    /// `(1,0)`, then `(0,2), (1,3)`.
    #[serde(rename = "experimental_4q")]
    Experimental4q,
    /// `(1,0), (3,4)`, then `(0,2), (5,4)`, then `(1,3)`.
    #[serde(rename = "experimental_6q")]
    Experimental6q,
    /// Every pair `(i, j)`, `i < j`, greedily packed into layers.
    AllToAll,
    Custom {
        layers: Vec<Vec<(usize, usize)>>,
    },
}

impl Topology {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "experimental_2q" => Some(Topology::Experimental2q),
            "experimental_4q" => Some(Topology::Experimental4q),
            "experimental_6q" => Some(Topology::Experimental6q),
            "all_to_all" => Some(Topology::AllToAll),
            _ => None,
        }
    }

    /// Experimental connectivity for `n` qubits, if one exists.
    pub fn experimental(n: usize) -> Option<Self> {
        match n {
            2 => Some(Topology::Experimental2q),
            4 => Some(Topology::Experimental4q),
            6 => Some(Topology::Experimental6q),
            _ => None,
        }
    }

    pub fn layers(&self, n_qubits: usize) -> Result<Vec<Vec<(usize, usize)>>> {
        let fixed = |n: usize, layers: Vec<Vec<(usize, usize)>>| {
            if n_qubits != n {
                Err(Error::invalid(format!(
                    "topology {self:?} needs {n} qubits, got {n_qubits}"
                )))
            } else {
                Ok(layers)
            }
        };
        match self {
            Topology::Experimental2q => fixed(2, vec![vec![(0, 1)]]),
            Topology::Experimental4q => fixed(4, vec![vec![(1, 0)], vec![(0, 2), (1, 3)]]),
            Topology::Experimental6q => fixed(
                6,
                vec![vec![(1, 0), (3, 4)], vec![(0, 2), (5, 4)], vec![(1, 3)]],
            ),
            Topology::AllToAll => {
                let mut layers: Vec<(u64, Vec<(usize, usize)>)> = Vec::new();
                for i in 0..n_qubits {
                    for j in i + 1..n_qubits {
                        let mask = 1u64 << i | 1u64 << j;
                        match layers.iter_mut().find(|(used, _)| used & mask == 0) {
                            Some((used, pairs)) => {
                                *used |= mask;
                                pairs.push((i, j));
                            }
                            None => layers.push((mask, vec![(i, j)])),
                        }
                    }
                }
                Ok(layers.into_iter().map(|(_, p)| p).collect())
            }
            Topology::Custom { layers } => Ok(layers.clone()),
        }
    }
}

/// Two-qubit interaction applied on every topology pair. `phase` is the
/// strength `s` of the dominant term in `exp(−i (s/2) P)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntanglerTemplate {
    /// Measured cross-resonance term ratios with the `ZX` strength set to `phase`.
    CrMeasured {
        phase: f64,
    },
    IdealZx {
        phase: f64,
    },
    IdealZz {
        phase: f64,
    },
}

impl EntanglerTemplate {
    pub fn terms(&self) -> TermMap {
        match *self {
            EntanglerTemplate::CrMeasured { phase } => cr_measured_terms(phase),
            EntanglerTemplate::IdealZx { phase } => vec![(CrTerm::ZX, phase)],
            EntanglerTemplate::IdealZz { phase } => vec![(CrTerm::ZZ, phase)],
        }
    }

    pub fn phase(&self) -> f64 {
        match *self {
            EntanglerTemplate::CrMeasured { phase }
            | EntanglerTemplate::IdealZx { phase }
            | EntanglerTemplate::IdealZz { phase } => phase,
        }
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        match *self {
            EntanglerTemplate::CrMeasured { .. } => EntanglerTemplate::CrMeasured { phase },
            EntanglerTemplate::IdealZx { .. } => EntanglerTemplate::IdealZx { phase },
            EntanglerTemplate::IdealZz { .. } => EntanglerTemplate::IdealZz { phase },
        }
    }
}

impl Default for EntanglerTemplate {
    fn default() -> Self {
        EntanglerTemplate::CrMeasured {
            phase: core::f64::consts::FRAC_PI_4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    FullEuler,
    /// Drops the leading Z rotations of layers `1..=d`, which commute with
    /// ZZ entanglers.
    ReducedZz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzConfig {
    pub n_qubits: usize,
    pub depth: usize,
    pub topology: Topology,
    #[serde(default)]
    pub entangler: EntanglerTemplate,
    #[serde(default)]
    pub variant: Variant,
}

/// Rotation axis of a parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    ZPre,
    X,
    ZPost,
}

/// Angles in canonical order; serializes as a plain JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterVector(pub Vec<f64>);

impl core::ops::Deref for ParameterVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `N(3d + 2)` for `FullEuler`, `2N(d + 1)` for `ReducedZz`.
pub fn parameter_count(config: &AnsatzConfig) -> usize {
    let n = config.n_qubits;
    match config.variant {
        Variant::FullEuler => n * (3 * config.depth + 2),
        Variant::ReducedZz => 2 * n * (config.depth + 1),
    }
}

/// A validated configuration with its entangler unitaries precomputed.
#[derive(Debug, Clone)]
pub struct Ansatz {
    config: AnsatzConfig,
    spec: EntanglerSpec,
    entangler: CompiledEntangler,
}

impl Ansatz {
    pub fn new(config: AnsatzConfig) -> Result<Self> {
        if config.n_qubits == 0 {
            return Err(Error::invalid("ansatz needs at least one qubit"));
        }
        let layers = config.topology.layers(config.n_qubits)?;
        let spec = EntanglerSpec::uniform(&layers, &config.entangler.terms());
        let entangler = spec.compile(config.n_qubits)?;
        Ok(Ansatz {
            config,
            spec,
            entangler,
        })
    }

    pub fn config(&self) -> &AnsatzConfig {
        &self.config
    }

    pub fn n_qubits(&self) -> usize {
        self.config.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.config.depth
    }

    pub fn entangler_spec(&self) -> &EntanglerSpec {
        &self.spec
    }

    pub fn parameter_count(&self) -> usize {
        parameter_count(&self.config)
    }

    fn per_qubit(&self, layer: usize) -> usize {
        if layer == 0 || self.config.variant == Variant::ReducedZz {
            2
        } else {
            3
        }
    }

    fn layer_offset(&self, layer: usize) -> usize {
        let n = self.config.n_qubits;
        if layer == 0 {
            0
        } else {
            2 * n + (layer - 1) * self.per_qubit(layer) * n
        }
    }

    /// Axis of every parameter, in canonical order.
    pub fn axes(&self) -> Vec<Axis> {
        let mut out = Vec::with_capacity(self.parameter_count());
        for layer in 0..=self.config.depth {
            for _ in 0..self.config.n_qubits {
                if self.per_qubit(layer) == 3 {
                    out.push(Axis::ZPre);
                }
                out.push(Axis::X);
                out.push(Axis::ZPost);
            }
        }
        out
    }

    /// Parameter indices `(z_pre, x, z_post)` of qubit `q` in `layer`.
    fn slots(&self, layer: usize, q: usize) -> (Option<usize>, usize, usize) {
        let k = self.per_qubit(layer);
        let base = self.layer_offset(layer) + q * k;
        if k == 3 {
            (Some(base), base + 1, base + 2)
        } else {
            (None, base, base + 1)
        }
    }

    /// Z angles from `N(0, 1)`, X angles `π/2`.
    pub fn initial_parameters(&self, rng: &mut crate::Rng) -> ParameterVector {
        ParameterVector(
            self.axes()
                .into_iter()
                .map(|a| match a {
                    Axis::X => FRAC_PI_2,
                    _ => StandardNormal.sample(rng),
                })
                .collect(),
        )
    }

    fn check_len(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.parameter_count() {
            return Err(Error::Dimension {
                expected: self.parameter_count(),
                found: theta.len(),
            });
        }
        Ok(())
    }

    fn rotation(&self, theta: &[f64], layer: usize, q: usize) -> Mat2 {
        let (pre, x, post) = self.slots(layer, q);
        gates::euler(theta[post], theta[x], pre.map_or(0.0, |i| theta[i]))
    }

    /// Trial state with noise channels after every rotation round and every
    /// entangler.
    pub fn prepare_state(&self, theta: &[f64], noise: &NoiseModel) -> Result<DensityMatrix> {
        self.check_len(theta)?;
        noise.validate()?;
        let n = self.n_qubits();
        let mut rho = DensityMatrix::new(n)?;
        let after_rotations = |rho: &mut DensityMatrix| -> Result<()> {
            match noise {
                NoiseModel::None => Ok(()),
                NoiseModel::Thermal(t) => apply_thermal_noise(rho, t.tau_1q, noise),
                NoiseModel::Depolarizing { xi } => {
                    (0..n).try_for_each(|q| apply_depolarizing(rho, &[q], *xi))
                }
            }
        };
        let after_entangler = |rho: &mut DensityMatrix| -> Result<()> {
            match noise {
                NoiseModel::None => Ok(()),
                NoiseModel::Thermal(t) => apply_thermal_noise(rho, t.tau_ent, noise),
                NoiseModel::Depolarizing { xi } => self
                    .spec
                    .pairs()
                    .try_for_each(|(c, t)| apply_depolarizing(rho, &[c, t], *xi)),
            }
        };
        for layer in 0..=self.depth() {
            if layer > 0 {
                self.entangler.apply_density(&mut rho)?;
                after_entangler(&mut rho)?;
            }
            for q in 0..n {
                rho.apply_1q(q, &self.rotation(theta, layer, q))?;
            }
            after_rotations(&mut rho)?;
        }
        Ok(rho)
    }

    /// Noiseless trial state.
    pub fn prepare_pure(&self, theta: &[f64]) -> Result<StateVector> {
        self.check_len(theta)?;
        self.run_pure(theta, None)
    }

    /// Circuit on `|0…0⟩`; with `derivative = Some(k)` the gate carrying
    /// parameter `k` is replaced by its derivative, giving `∂_k|Φ⟩`.
    fn run_pure(&self, theta: &[f64], derivative: Option<usize>) -> Result<StateVector> {
        let n = self.n_qubits();
        let mut psi = StateVector::new(n)?;
        for layer in 0..=self.depth() {
            if layer > 0 {
                self.entangler.apply_pure(&mut psi)?;
            }
            for q in 0..n {
                let (pre, x, post) = self.slots(layer, q);
                let u = match derivative {
                    Some(k) if k == post || k == x || Some(k) == pre => {
                        let z_pre = pre.map_or(0.0, |i| theta[i]);
                        euler_derivative(
                            theta[post],
                            theta[x],
                            z_pre,
                            if k == post {
                                0
                            } else if k == x {
                                1
                            } else {
                                2
                            },
                        )
                    }
                    _ => self.rotation(theta, layer, q),
                };
                psi.apply_1q(q, &u)?;
            }
        }
        Ok(psi)
    }

    /// `∇_θ ⟨Φ(θ)|H|Φ(θ)⟩` for the noiseless state, from the exact derivative
    /// of each rotation: `∂_k E = 2 Re ⟨Φ|H|∂_kΦ⟩`.
    pub fn energy_gradient(&self, theta: &[f64], h: &QubitHamiltonian) -> Result<Vec<f64>> {
        self.check_len(theta)?;
        if h.n_qubits() != self.n_qubits() {
            return Err(Error::Dimension {
                expected: self.n_qubits(),
                found: h.n_qubits(),
            });
        }
        let psi = self.run_pure(theta, None)?;
        let h_psi = apply_hamiltonian(h, psi.amplitudes());
        (0..theta.len())
            .map(|k| {
                let d = self.run_pure(theta, Some(k))?;
                let overlap: Complex64 = h_psi
                    .iter()
                    .zip(d.amplitudes())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                Ok(2.0 * overlap.re)
            })
            .collect()
    }
}

/// `d/dθ_i` of `Z_θ1 X_θ2 Z_θ3`, `which` ∈ {0, 1, 2} selecting `θ1, θ2, θ3`.
fn euler_derivative(t1: f64, t2: f64, t3: f64, which: usize) -> Mat2 {
    let half_minus_i = Complex64::new(0.0, -0.5);
    let scale = |m: Mat2| -> Mat2 { m.map(|row| row.map(|v| v * half_minus_i)) };
    let (z1, x2, z3) = (gates::rz(t1), gates::rx(t2), gates::rz(t3));
    let zg = crate::Pauli::Z.matrix();
    let xg = crate::Pauli::X.matrix();
    match which {
        0 => gates::mul2(&scale(gates::mul2(&zg, &z1)), &gates::mul2(&x2, &z3)),
        1 => gates::mul2(&z1, &gates::mul2(&scale(gates::mul2(&xg, &x2)), &z3)),
        _ => gates::mul2(&z1, &gates::mul2(&x2, &scale(gates::mul2(&zg, &z3)))),
    }
}

/// `H|ψ⟩` as a dense vector.
pub fn apply_hamiltonian(h: &QubitHamiltonian, psi: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = psi.iter().map(|a| a * h.identity_shift()).collect();
    for t in h.terms() {
        for (b, amp) in psi.iter().enumerate() {
            let (phase, b2) = t.pauli.apply_to_basis(b);
            out[b2] += phase * amp * t.coefficient;
        }
    }
    out
}
