//! Finite-shot measurement in a tensor-product basis.

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::{Error, Pauli, PauliString, Result};

use super::density::DensityMatrix;
use super::gates::measurement_rotation;
use super::readout::ReadoutModel;
use super::statevector::StateVector;

/// Outcome histogram of `shots` measurements in `basis`. Index `b` counts
/// bitstring `b` (qubit 0 most significant); bit value 0 means eigenvalue +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub basis: PauliString,
    pub shots: u64,
    pub counts: Vec<u64>,
}

impl ShotRecord {
    /// Non-zero `(outcome, count)` entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(b, &c)| (b, c))
    }

    /// Expand to one bitstring per shot, in outcome order.
    pub fn bitstrings(&self) -> Vec<usize> {
        self.iter()
            .flat_map(|(b, c)| core::iter::repeat_n(b, c as usize))
            .collect()
    }
}

fn rotated_density(rho: &DensityMatrix, basis: &PauliString) -> Result<Vec<f64>> {
    let mut r = rho.clone();
    for q in 0..basis.n_qubits() {
        if let Some(u) = measurement_rotation(basis.get(q)) {
            r.apply_1q(q, &u)?;
        }
    }
    Ok(r.probabilities())
}

/// Ideal outcome probabilities of `rho` measured in `basis`.
pub fn outcome_probabilities(rho: &DensityMatrix, basis: &PauliString) -> Result<Vec<f64>> {
    if basis.n_qubits() != rho.n_qubits() {
        return Err(Error::Dimension {
            expected: rho.n_qubits(),
            found: basis.n_qubits(),
        });
    }
    rotated_density(rho, basis)
}

/// Ideal outcome probabilities of `psi` measured in `basis`.
pub fn outcome_probabilities_pure(psi: &StateVector, basis: &PauliString) -> Result<Vec<f64>> {
    if basis.n_qubits() != psi.n_qubits() {
        return Err(Error::Dimension {
            expected: psi.n_qubits(),
            found: basis.n_qubits(),
        });
    }
    let mut p = psi.clone();
    for q in 0..basis.n_qubits() {
        if let Some(u) = measurement_rotation(basis.get(q)) {
            p.apply_1q(q, &u)?;
        }
    }
    Ok(p.probabilities())
}

/// Draw `shots` outcomes from ideal probabilities after the readout channel.
pub fn sample_from_probabilities(
    mut probs: Vec<f64>,
    basis: PauliString,
    shots: u64,
    readout: &ReadoutModel,
    rng: &mut crate::Rng,
) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::invalid("at least one shot is required"));
    }
    let n = basis.n_qubits();
    if probs.len() != 1 << n {
        return Err(Error::Dimension {
            expected: 1 << n,
            found: probs.len(),
        });
    }
    readout.validate(n)?;
    for p in probs.iter_mut() {
        *p = p.max(0.0);
    }
    readout.distort(&mut probs, n);
    let total: f64 = probs.iter().sum();
    // multinomial via conditional binomials
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass = total;
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    for (k, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k == last {
            counts[k] = remaining;
            break;
        }
        let frac = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = Binomial::new(remaining, frac)
            .map_err(|e| Error::invalid(format!("binomial sampling: {e}")))?
            .sample(rng);
        counts[k] = draw;
        remaining -= draw;
        mass -= p;
    }
    Ok(ShotRecord {
        basis,
        shots,
        counts,
    })
}

/// Measure `rho` `shots` times after the post-rotations of `basis` (letters
/// `I` are measured in Z), with assignment errors from `readout`.
pub fn sample_shots(
    rho: &DensityMatrix,
    basis: &PauliString,
    shots: u64,
    readout: &ReadoutModel,
    rng: &mut crate::Rng,
) -> Result<ShotRecord> {
    let probs = outcome_probabilities(rho, basis)?;
    sample_from_probabilities(probs, *basis, shots, readout, rng)
}

/// Pure-state counterpart of [`sample_shots`].
pub fn sample_shots_pure(
    psi: &StateVector,
    basis: &PauliString,
    shots: u64,
    readout: &ReadoutModel,
    rng: &mut crate::Rng,
) -> Result<ShotRecord> {
    let probs = outcome_probabilities_pure(psi, basis)?;
    sample_from_probabilities(probs, *basis, shots, readout, rng)
}

/// Measurement basis naming every qubit, `I` replaced by `Z`.
pub fn full_basis(p: &PauliString) -> PauliString {
    let mut b = *p;
    for q in 0..p.n_qubits() {
        if p.get(q) == Pauli::I {
            b = b.with(q, Pauli::Z);
        }
    }
    b
}
