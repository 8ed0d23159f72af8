//! Entangling unitaries generated by static two-qubit drift Hamiltonians.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{expm_i_hermitian, kron, CMatrix};
use crate::pauli::Pauli;
use crate::prelude::*;
use crate::{Error, Result};

use super::density::DensityMatrix;
use super::gates::Mat4;
use super::statevector::StateVector;

/// Two-qubit generator label; the first letter acts on the control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CrTerm {
    ZX,
    ZY,
    ZZ,
    IX,
    IY,
    IZ,
}

impl CrTerm {
    pub const ALL: [CrTerm; 6] = [
        CrTerm::ZX,
        CrTerm::ZY,
        CrTerm::ZZ,
        CrTerm::IX,
        CrTerm::IY,
        CrTerm::IZ,
    ];

    pub fn letters(self) -> (Pauli, Pauli) {
        match self {
            CrTerm::ZX => (Pauli::Z, Pauli::X),
            CrTerm::ZY => (Pauli::Z, Pauli::Y),
            CrTerm::ZZ => (Pauli::Z, Pauli::Z),
            CrTerm::IX => (Pauli::I, Pauli::X),
            CrTerm::IY => (Pauli::I, Pauli::Y),
            CrTerm::IZ => (Pauli::I, Pauli::Z),
        }
    }
}

/// Measured cross-resonance rates in MHz.
pub const CR_MEASURED_MHZ: [(CrTerm, f64); 6] = [
    (CrTerm::ZX, 1.04),
    (CrTerm::ZY, 0.07),
    (CrTerm::ZZ, 0.05),
    (CrTerm::IX, 0.68),
    (CrTerm::IY, 0.12),
    (CrTerm::IZ, 0.02),
];

/// Term strengths in radians: `U = exp(−i Σ (s/2) P)`.
pub type TermMap = Vec<(CrTerm, f64)>;

/// Cross-resonance terms in the measured ratios, scaled so that the `ZX`
/// strength equals `zx_phase`.
pub fn cr_measured_terms(zx_phase: f64) -> TermMap {
    CR_MEASURED_MHZ
        .iter()
        .map(|&(t, mhz)| (t, zx_phase * mhz / 1.04))
        .collect()
}

/// Measured rates integrated over `duration` seconds: `s = 2π·rate·τ`.
pub fn cr_measured_terms_for_duration(duration: f64) -> TermMap {
    CR_MEASURED_MHZ
        .iter()
        .map(|&(t, mhz)| (t, 2.0 * core::f64::consts::PI * mhz * 1e6 * duration))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglerPair {
    pub control: usize,
    pub target: usize,
    pub terms: TermMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglerLayer {
    pub pairs: Vec<EntanglerPair>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EntanglerSpec {
    pub layers: Vec<EntanglerLayer>,
}

impl EntanglerSpec {
    /// Same `terms` on every directed pair of every layer.
    pub fn uniform(layers: &[Vec<(usize, usize)>], terms: &TermMap) -> Self {
        EntanglerSpec {
            layers: layers
                .iter()
                .map(|l| EntanglerLayer {
                    pairs: l
                        .iter()
                        .map(|&(control, target)| EntanglerPair {
                            control,
                            target,
                            terms: terms.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for (k, layer) in self.layers.iter().enumerate() {
            let mut used = 0u64;
            for p in &layer.pairs {
                if p.control >= n_qubits || p.target >= n_qubits || p.control == p.target {
                    return Err(Error::invalid(format!(
                        "layer {k}: invalid pair ({}, {}) for {n_qubits} qubits",
                        p.control, p.target
                    )));
                }
                let mask = 1u64 << p.control | 1u64 << p.target;
                if used & mask != 0 {
                    return Err(Error::invalid(format!(
                        "layer {k}: pair ({}, {}) overlaps another pair of the layer",
                        p.control, p.target
                    )));
                }
                used |= mask;
                if p.terms.is_empty() {
                    return Err(Error::invalid(format!("layer {k}: empty term map")));
                }
            }
        }
        Ok(())
    }

    /// Precompute the pair unitaries.
    pub fn compile(&self, n_qubits: usize) -> Result<CompiledEntangler> {
        self.validate(n_qubits)?;
        let layers = self
            .layers
            .iter()
            .map(|l| {
                l.pairs
                    .iter()
                    .map(|p| (p.control, p.target, pair_unitary(&p.terms)))
                    .collect()
            })
            .collect();
        Ok(CompiledEntangler { n_qubits, layers })
    }

    /// Every directed pair, in layer order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.pairs.iter().map(|p| (p.control, p.target)))
    }
}

fn pauli_cmatrix(p: Pauli) -> CMatrix {
    let m = p.matrix();
    CMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
}

/// `exp(−i Σ (s/2) P)` with the control on the more significant index.
pub fn pair_unitary(terms: &TermMap) -> Mat4 {
    let mut g = CMatrix::zeros(4, 4);
    for &(t, s) in terms {
        let (a, b) = t.letters();
        g += kron(&pauli_cmatrix(a), &pauli_cmatrix(b)) * Complex64::new(0.5 * s, 0.0);
    }
    let u = expm_i_hermitian(&g);
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = u[(r, c)];
        }
    }
    out
}

/// Entangler with its pair unitaries precomputed. Pairs within a layer act on
/// disjoint qubits, so their generators commute and the layer unitary is the
/// product of the pair unitaries.
#[derive(Debug, Clone)]
pub struct CompiledEntangler {
    n_qubits: usize,
    layers: Vec<Vec<(usize, usize, Mat4)>>,
}

impl CompiledEntangler {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn apply_density(&self, rho: &mut DensityMatrix) -> Result<()> {
        for layer in &self.layers {
            for (c, t, u) in layer {
                rho.apply_2q(*c, *t, u)?;
            }
        }
        Ok(())
    }

    pub fn apply_pure(&self, psi: &mut StateVector) -> Result<()> {
        for layer in &self.layers {
            for (c, t, u) in layer {
                psi.apply_2q(*c, *t, u)?;
            }
        }
        Ok(())
    }
}

/// Apply `spec` to `rho` layer by layer.
pub fn apply_entangler(rho: &mut DensityMatrix, spec: &EntanglerSpec) -> Result<()> {
    spec.compile(rho.n_qubits())?.apply_density(rho)
}
