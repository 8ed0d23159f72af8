//! `H = J Σ_⟨ij⟩ (X_iX_j + Y_iY_j + Z_iZ_j) + B Σ_i Z_i`.

use serde::{Deserialize, Serialize};

use hevqe_core::sim::{DensityMatrix, StateVector};
use hevqe_core::{Pauli, PauliString, QubitHamiltonian};

/// 2×2 plaquette: the 4-cycle 0–1–3–2–0.
pub const SQUARE_EDGES: [(usize, usize); 4] = [(0, 1), (1, 3), (3, 2), (2, 0)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergConfig {
    #[serde(default = "four")]
    pub n_qubits: usize,
    #[serde(default = "square")]
    pub edges: Vec<(usize, usize)>,
    pub j: f64,
    pub b: f64,
}

fn four() -> usize {
    4
}

fn square() -> Vec<(usize, usize)> {
    SQUARE_EDGES.to_vec()
}

impl HeisenbergConfig {
    pub fn square(j: f64, b: f64) -> Self {
        HeisenbergConfig {
            n_qubits: 4,
            edges: square(),
            j,
            b,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n_qubits == 0 || self.n_qubits > hevqe_core::pauli::MAX_QUBITS {
            return Err(format!("invalid qubit count {}", self.n_qubits));
        }
        let mut seen = Vec::new();
        for &(a, b) in &self.edges {
            if a >= self.n_qubits || b >= self.n_qubits || a == b {
                return Err(format!("invalid edge ({a}, {b})"));
            }
            let key = (a.min(b), a.max(b));
            if seen.contains(&key) {
                return Err(format!("duplicate edge ({a}, {b})"));
            }
            seen.push(key);
        }
        Ok(())
    }
}

/// `3·|edges| + n` terms before pruning of zero coefficients.
pub fn heisenberg_hamiltonian(config: &HeisenbergConfig) -> hevqe_core::Result<QubitHamiltonian> {
    config
        .validate()
        .map_err(hevqe_core::Error::InvalidArgument)?;
    let n = config.n_qubits;
    let id = PauliString::identity(n)?;
    let mut terms = Vec::with_capacity(3 * config.edges.len() + n);
    for &(a, b) in &config.edges {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push((config.j, id.with(a, p).with(b, p)));
        }
    }
    for q in 0..n {
        terms.push((config.b, id.with(q, Pauli::Z)));
    }
    QubitHamiltonian::new(n, terms)
}

/// `⟨Z_i⟩` for every qubit.
pub fn z_expectations_pure(psi: &StateVector) -> Vec<f64> {
    let n = psi.n_qubits();
    let probs = psi.probabilities();
    (0..n)
        .map(|q| {
            probs
                .iter()
                .enumerate()
                .map(|(b, p)| if b >> (n - 1 - q) & 1 == 0 { *p } else { -p })
                .sum()
        })
        .collect()
}

pub fn z_expectations(rho: &DensityMatrix) -> Vec<f64> {
    let n = rho.n_qubits();
    let probs = rho.probabilities();
    (0..n)
        .map(|q| {
            probs
                .iter()
                .enumerate()
                .map(|(b, p)| if b >> (n - 1 - q) & 1 == 0 { *p } else { -p })
                .sum()
        })
        .collect()
}

/// `M_z = (1/N) Σ_i ⟨Z_i⟩`.
pub fn magnetization(z: &[f64]) -> f64 {
    if z.is_empty() {
        0.0
    } else {
        z.iter().sum::<f64>() / z.len() as f64
    }
}
