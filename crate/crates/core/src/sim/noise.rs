//! Incoherent error channels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::{Error, Pauli, Result};

use super::density::DensityMatrix;
use super::gates::{kron2, Mat2, Mat4};

/// Amplitude damping and pure dephasing from coherence times, applied to
/// every qubit after each round of Euler rotations (`tau_1q`) and after each
/// entangler (`tau_ent`). Times in seconds; `f64::INFINITY` disables a process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalNoise {
    pub t1: f64,
    pub t2_star: f64,
    pub tau_1q: f64,
    pub tau_ent: f64,
}

impl ThermalNoise {
    /// Coherence of the best pair of qubits: `T1 = T2* = 40 µs`, 150 ns entangler.
    pub fn two_qubit_default() -> Self {
        ThermalNoise {
            t1: 40e-6,
            t2_star: 40e-6,
            tau_1q: 100e-9,
            tau_ent: 150e-9,
        }
    }

    /// Typical coherence: `T1 = 30 µs`, `T2* = 20 µs`, 450 ns entangler.
    pub fn multi_qubit_default() -> Self {
        ThermalNoise {
            t1: 30e-6,
            t2_star: 20e-6,
            tau_1q: 100e-9,
            tau_ent: 450e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && !x.is_nan();
        if !positive(self.t1) || !positive(self.t2_star) {
            return Err(Error::invalid("T1 and T2* must be positive"));
        }
        if !(self.tau_1q >= 0.0 && self.tau_ent >= 0.0)
            || !self.tau_1q.is_finite()
            || !self.tau_ent.is_finite()
        {
            return Err(Error::invalid(
                "gate durations must be finite and non-negative",
            ));
        }
        if self.t2_star > 2.0 * self.t1 * (1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "T2* = {} exceeds 2·T1 = {}",
                self.t2_star,
                2.0 * self.t1
            )));
        }
        Ok(())
    }

    /// `1/T1`.
    pub fn relaxation_rate(&self) -> f64 {
        1.0 / self.t1
    }

    /// `1/T_φ = 1/T2* − 1/(2 T1)`, i.e. `T_φ = 2 T2* T1 / (2 T1 − T2*)`.
    pub fn dephasing_rate(&self) -> f64 {
        1.0 / self.t2_star - 0.5 / self.t1
    }

    pub fn t_phi(&self) -> f64 {
        1.0 / self.dephasing_rate()
    }

    /// Kraus pairs `(E^a_0, E^a_1)` and `(E^d_0, E^d_1)` for duration `tau`.
    pub fn kraus(&self, tau: f64) -> ([Mat2; 2], [Mat2; 2]) {
        amplitude_phase_kraus(
            (-tau * self.relaxation_rate()).exp(),
            (-tau * self.dephasing_rate().max(0.0)).exp(),
        )
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Kraus operators from the decay factors `e^{−τ/T1}` and `e^{−τ/T_φ}`.
pub fn amplitude_phase_kraus(decay: f64, dephase: f64) -> ([Mat2; 2], [Mat2; 2]) {
    let z = c(0.0);
    let amp = [
        [[c(1.0), z], [z, c(decay.sqrt())]],
        [[z, c((1.0 - decay).max(0.0).sqrt())], [z, z]],
    ];
    let deph = [
        [[c(1.0), z], [z, c(dephase)]],
        [[z, z], [z, c((1.0 - dephase * dephase).max(0.0).sqrt())]],
    ];
    (amp, deph)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    #[default]
    None,
    Thermal(ThermalNoise),
    /// Depolarizing channels of strength `xi` after every gate.
    Depolarizing {
        xi: f64,
    },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::None => Ok(()),
            NoiseModel::Thermal(t) => t.validate(),
            NoiseModel::Depolarizing { xi } => check_xi(*xi),
        }
    }

    pub fn is_none(&self) -> bool {
        match self {
            NoiseModel::None => true,
            NoiseModel::Thermal(t) => t.relaxation_rate() == 0.0 && t.dephasing_rate() <= 0.0,
            NoiseModel::Depolarizing { xi } => *xi == 0.0,
        }
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::invalid(format!(
            "depolarizing strength {xi} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Amplitude damping then dephasing on every qubit for duration `tau`.
pub fn apply_thermal_noise(rho: &mut DensityMatrix, tau: f64, model: &NoiseModel) -> Result<()> {
    let NoiseModel::Thermal(t) = model else {
        return Err(Error::invalid("thermal noise needs a thermal noise model"));
    };
    let (amp, deph) = t.kraus(tau);
    for q in 0..rho.n_qubits() {
        rho.apply_kraus_1q(q, &amp)?;
        rho.apply_kraus_1q(q, &deph)?;
    }
    Ok(())
}

fn scaled(m: &Mat2, s: f64) -> Mat2 {
    let mut out = *m;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    out
}

/// `(1−ξ)ρ + ξ/3 Σ σρσ` on one qubit.
pub fn depolarizing_1q_kraus(xi: f64) -> Result<Vec<Mat2>> {
    check_xi(xi)?;
    let mut ops = vec![scaled(&Pauli::I.matrix(), (1.0 - xi).sqrt())];
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        ops.push(scaled(&p.matrix(), (xi / 3.0).sqrt()));
    }
    Ok(ops)
}

/// `(1−ξ)ρ + ξ/15 Σ_{(i,j)≠(0,0)} σ^iσ^j ρ σ^iσ^j` on two qubits.
pub fn depolarizing_2q_kraus(xi: f64) -> Result<Vec<Mat4>> {
    check_xi(xi)?;
    let mut ops = Vec::with_capacity(16);
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            let w = if a == Pauli::I && b == Pauli::I {
                (1.0 - xi).sqrt()
            } else {
                (xi / 15.0).sqrt()
            };
            ops.push(kron2(&scaled(&a.matrix(), w), &b.matrix()));
        }
    }
    Ok(ops)
}

/// One- or two-qubit depolarizing channel on `sites`.
pub fn apply_depolarizing(rho: &mut DensityMatrix, sites: &[usize], xi: f64) -> Result<()> {
    match *sites {
        [q] => rho.apply_kraus_1q(q, &depolarizing_1q_kraus(xi)?),
        [a, b] => rho.apply_kraus_2q(a, b, &depolarizing_2q_kraus(xi)?),
        _ => Err(Error::invalid(
            "depolarizing channel acts on one or two qubits",
        )),
    }
}
