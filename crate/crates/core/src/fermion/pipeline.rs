//! Integrals to qubit Hamiltonian: dress, freeze, encode, taper.

use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::{Error, QubitHamiltonian, Result};

use super::{
    bogoliubov_diagonalize, encode, freeze_core, sector_from_electron_count, taper, EncodingScheme,
    FermionHamiltonian, SymmetrySector,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingOptions {
    pub scheme: EncodingScheme,
    /// Number of lowest dressed spatial orbitals treated as filled.
    #[serde(default)]
    pub frozen_orbitals: usize,
    #[serde(default = "yes")]
    pub taper: bool,
    /// Overrides the electron count of the integral file.
    #[serde(default)]
    pub electrons: Option<usize>,
    /// Choice of `Z_{M/2}` eigenvalue in degenerate sectors.
    #[serde(default)]
    pub z_half: Option<i8>,
}

fn yes() -> bool {
    true
}

impl MappingOptions {
    pub fn new(scheme: EncodingScheme) -> Self {
        MappingOptions {
            scheme,
            frozen_orbitals: 0,
            taper: scheme != EncodingScheme::JordanWigner,
            electrons: None,
            z_half: None,
        }
    }

    pub fn frozen(mut self, orbitals: usize) -> Self {
        self.frozen_orbitals = orbitals;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MappedHamiltonian {
    pub qubit: QubitHamiltonian,
    /// Fermionic Hamiltonian after dressing and freezing.
    pub active: FermionHamiltonian,
    pub sector: Option<SymmetrySector>,
    /// Frozen mode indices of the dressed Hamiltonian.
    pub frozen_modes: Vec<usize>,
    pub active_electrons: Option<usize>,
}

pub fn map_molecule(h: &FermionHamiltonian, options: &MappingOptions) -> Result<MappedHamiltonian> {
    let m = h.n_modes();
    let half = m / 2;
    let k = options.frozen_orbitals;
    if k > half {
        return Err(Error::invalid(format!(
            "cannot freeze {k} of {half} spatial orbitals"
        )));
    }
    let mut h = h.clone();
    if let Some(n) = options.electrons {
        h.set_n_electrons(Some(n));
    }
    let dressed = bogoliubov_diagonalize(&h)?.hamiltonian;
    let frozen_modes: Vec<usize> = (0..k).chain(half..half + k).collect();
    let active = freeze_core(&dressed, &frozen_modes)?;
    let encoded = encode(&active, options.scheme)?;
    let active_electrons = active.n_electrons();
    let (qubit, sector) = if options.taper {
        let n =
            active_electrons.ok_or_else(|| Error::invalid("tapering needs the electron count"))?;
        let mut sector = sector_from_electron_count(n);
        if let Some(z) = options.z_half {
            sector = sector.with_z_half(z)?;
        }
        (taper(&encoded, sector, options.scheme)?, Some(sector))
    } else {
        (encoded, None)
    };
    Ok(MappedHamiltonian {
        qubit,
        active,
        sector,
        frozen_modes,
        active_electrons,
    })
}
