//! Pure states for noiseless simulation.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::hamiltonian::pauli_expectation_pure;
use crate::linalg::ZERO;
use crate::prelude::*;
use crate::{Error, QubitHamiltonian, Result};

use super::gates::{Mat2, Mat4};

pub const MAX_STATEVECTOR_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::Resource {
                what: "state-vector qubits",
                size: n_qubits,
                limit: MAX_STATEVECTOR_QUBITS,
            });
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(Error::invalid("amplitude count must be a power of two"));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        Self::new(n_qubits)?;
        Ok(StateVector { n_qubits, amps })
    }

    /// Haar-random pure state.
    pub fn random(n_qubits: usize, rng: &mut crate::Rng) -> Result<Self> {
        let mut psi = Self::new(n_qubits)?;
        for a in psi.amps.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *a = Complex64::new(re, im);
        }
        let norm = psi.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in psi.amps.iter_mut() {
            *a /= norm;
        }
        Ok(psi)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn bit(&self, q: usize) -> Result<usize> {
        if q >= self.n_qubits {
            return Err(Error::invalid(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(1 << (self.n_qubits - 1 - q))
    }

    pub fn apply_1q(&mut self, q: usize, u: &Mat2) -> Result<()> {
        let s = self.bit(q)?;
        for i in (0..self.amps.len()).filter(|i| i & s == 0) {
            let (a, b) = (self.amps[i], self.amps[i + s]);
            self.amps[i] = u[0][0] * a + u[0][1] * b;
            self.amps[i + s] = u[1][0] * a + u[1][1] * b;
        }
        Ok(())
    }

    /// `U` on `(q1, q2)` with `q1` the more significant factor.
    pub fn apply_2q(&mut self, q1: usize, q2: usize, u: &Mat4) -> Result<()> {
        let (s1, s2) = (self.bit(q1)?, self.bit(q2)?);
        if s1 == s2 {
            return Err(Error::invalid("two-qubit gate needs distinct qubits"));
        }
        let off = [0, s2, s1, s1 + s2];
        for i in (0..self.amps.len()).filter(|i| i & (s1 | s2) == 0) {
            let v = off.map(|o| self.amps[i + o]);
            for r in 0..4 {
                self.amps[i + off[r]] =
                    u[r][0] * v[0] + u[r][1] * v[1] + u[r][2] * v[2] + u[r][3] * v[3];
            }
        }
        Ok(())
    }

    /// `⟨ψ|H|ψ⟩`, identity shift included.
    pub fn energy(&self, h: &QubitHamiltonian) -> Result<f64> {
        if h.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: h.n_qubits(),
            });
        }
        Ok(h.identity_shift()
            + h.terms()
                .iter()
                .map(|t| t.coefficient * pauli_expectation_pure(&t.pauli, &self.amps))
                .sum::<f64>())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}
