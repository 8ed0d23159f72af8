//! Removal of the two spin-parity qubits of parity and binary-tree encodings.
//!
//! In both encodings qubit `M/2 − 1` stores the parity of the spin-up
//! occupation and qubit `M − 1` the total parity, so `Z` on them has
//! eigenvalues `(−1)^{N↑}` and `(−1)^{N}`.

use serde::{Deserialize, Serialize};

use crate::pauli::{Pauli, PauliString};
use crate::prelude::*;
use crate::{Error, QubitHamiltonian, Result};

use super::EncodingScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetrySector {
    pub electron_count: usize,
    /// Eigenvalue substituted for `Z` on qubit `M/2 − 1`.
    pub z_half: i8,
    /// Eigenvalue substituted for `Z` on qubit `M − 1`.
    pub z_full: i8,
    /// Both values of `z_half` are compatible with the electron count.
    pub degenerate_half: bool,
}

impl SymmetrySector {
    /// Choose the `z_half` value in a degenerate sector.
    pub fn with_z_half(mut self, z_half: i8) -> Result<Self> {
        if z_half != 1 && z_half != -1 {
            return Err(Error::invalid("z_half must be +1 or -1"));
        }
        if !self.degenerate_half && z_half != self.z_half {
            return Err(Error::invalid(format!(
                "z_half is fixed to {} for {} electrons",
                self.z_half, self.electron_count
            )));
        }
        self.z_half = z_half;
        Ok(self)
    }
}

/// Sector of a closed-shell system with `m` electrons.
///
/// | m mod 4 | z_half | z_full |
/// |---------|--------|--------|
/// | 0       | +1     | +1     |
/// | 1       | ±1     | −1     |
/// | 2       | −1     | +1     |
/// | 3       | ±1     | −1     |
///
/// Degenerate sectors default to `z_half = +1`.
pub fn sector_from_electron_count(m: usize) -> SymmetrySector {
    let (z_half, z_full, degenerate_half) = match m % 4 {
        0 => (1, 1, false),
        1 => (1, -1, true),
        2 => (-1, 1, false),
        _ => (1, -1, true),
    };
    SymmetrySector {
        electron_count: m,
        z_half,
        z_full,
        degenerate_half,
    }
}

/// Substitute the sector eigenvalues on qubits `M/2 − 1` and `M − 1` and
/// drop those qubits.
pub fn taper(
    hq: &QubitHamiltonian,
    sector: SymmetrySector,
    scheme: EncodingScheme,
) -> Result<QubitHamiltonian> {
    if scheme == EncodingScheme::JordanWigner {
        return Err(Error::invalid(
            "jordan_wigner does not store spin parities on single qubits; use parity or binary_tree",
        ));
    }
    let m = hq.n_qubits();
    if m < 4 || m % 2 != 0 {
        return Err(Error::invalid(format!(
            "cannot taper a {m}-qubit Hamiltonian"
        )));
    }
    let (q_half, q_full) = (m / 2 - 1, m - 1);
    let mut terms = Vec::with_capacity(hq.len() + 1);
    for t in hq.terms() {
        let mut c = t.coefficient;
        for (q, z) in [(q_half, sector.z_half), (q_full, sector.z_full)] {
            match t.pauli.get(q) {
                Pauli::I => {}
                Pauli::Z => c *= f64::from(z),
                _ => return Err(Error::NotASymmetry { qubit: q }),
            }
        }
        let letters: Vec<Pauli> = t
            .pauli
            .letters()
            .into_iter()
            .enumerate()
            .filter(|&(q, _)| q != q_half && q != q_full)
            .map(|(_, p)| p)
            .collect();
        terms.push((c, PauliString::from_letters(&letters)?));
    }
    terms.push((hq.identity_shift(), PauliString::identity(m - 2)?));
    QubitHamiltonian::new(m - 2, terms)
}
