//! Circuit simulation: density matrices for noisy runs, state vectors for
//! noiseless ones, entanglers, noise channels and finite-shot readout.

mod density;
mod entangler;
pub mod gates;
mod noise;
mod readout;
mod shots;
mod statevector;

pub use density::{concurrence, DensityMatrix, MAX_DENSITY_QUBITS};
pub use entangler::{
    apply_entangler, cr_measured_terms, cr_measured_terms_for_duration, pair_unitary,
    CompiledEntangler, CrTerm, EntanglerLayer, EntanglerPair, EntanglerSpec, TermMap,
    CR_MEASURED_MHZ,
};
pub use noise::{
    amplitude_phase_kraus, apply_depolarizing, apply_thermal_noise, depolarizing_1q_kraus,
    depolarizing_2q_kraus, NoiseModel, ThermalNoise,
};
pub use readout::{correct_assignment, ReadoutModel};
pub use shots::{
    full_basis, outcome_probabilities, outcome_probabilities_pure, sample_from_probabilities,
    sample_shots, sample_shots_pure, ShotRecord,
};
pub use statevector::{StateVector, MAX_STATEVECTOR_QUBITS};

use crate::Result;

/// `ρ → U ρ U†` with `U = Z_θ1 X_θ2 Z_θ3` on qubit `q`.
pub fn apply_euler(
    rho: &mut DensityMatrix,
    q: usize,
    theta1: f64,
    theta2: f64,
    theta3: f64,
) -> Result<()> {
    rho.apply_1q(q, &gates::euler(theta1, theta2, theta3))
}
