//! Second-quantized molecular Hamiltonians and their reduction to qubits.
//!
//! `H = Σ t_αβ a†_α a_β + ½ Σ u_αβγδ a†_α a†_γ a_δ a_β` with two-body
//! integrals in chemists' notation, `u_αβγδ = (αβ|γδ)`. Modes `0..M/2` are
//! spin-up and `M/2..M` spin-down.

mod encoding;
mod fcidump;
mod orbitals;
mod pipeline;
mod tapering;

pub use encoding::{encode, majorana_pair, EncodingScheme};
pub use fcidump::{parse_fcidump, FcidumpHeader};
pub use orbitals::{bogoliubov_diagonalize, freeze_core, frozen_core_validity, Bogoliubov};
pub use pipeline::{map_molecule, MappedHamiltonian, MappingOptions};
pub use tapering::{sector_from_electron_count, taper, SymmetrySector};

use crate::prelude::*;
use crate::{Error, Result};

/// Tolerance of the structural symmetry checks on `t` and `u`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FermionHamiltonian {
    n_modes: usize,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
    shift: f64,
    n_electrons: Option<usize>,
}

impl FermionHamiltonian {
    /// Zero Hamiltonian on `n_modes` spin-orbitals.
    pub fn zeros(n_modes: usize) -> Result<Self> {
        if n_modes == 0 || n_modes % 2 != 0 {
            return Err(Error::invalid(format!(
                "the number of spin-orbitals must be positive and even, got {n_modes}"
            )));
        }
        Ok(FermionHamiltonian {
            n_modes,
            one_body: vec![0.0; n_modes * n_modes],
            two_body: vec![0.0; n_modes.pow(4)],
            shift: 0.0,
            n_electrons: None,
        })
    }

    /// Build from dense arrays (`t` row-major `M×M`, `u` row-major `M⁴`) and
    /// check the real-orbital symmetries.
    pub fn new(n_modes: usize, one_body: Vec<f64>, two_body: Vec<f64>, shift: f64) -> Result<Self> {
        let mut h = Self::zeros(n_modes)?;
        if one_body.len() != n_modes * n_modes {
            return Err(Error::Dimension {
                expected: n_modes * n_modes,
                found: one_body.len(),
            });
        }
        if two_body.len() != n_modes.pow(4) {
            return Err(Error::Dimension {
                expected: n_modes.pow(4),
                found: two_body.len(),
            });
        }
        h.one_body = one_body;
        h.two_body = two_body;
        h.shift = shift;
        h.check_symmetry(SYMMETRY_TOLERANCE)?;
        Ok(h)
    }

    /// Spin-orbital Hamiltonian from spatial-orbital integrals `h_ij`, `(ij|kl)`.
    pub fn from_spatial(n_orbitals: usize, h1: &[f64], eri: &[f64], shift: f64) -> Result<Self> {
        let n = n_orbitals;
        if h1.len() != n * n || eri.len() != n.pow(4) {
            return Err(Error::Dimension {
                expected: n * n,
                found: h1.len(),
            });
        }
        let mut h = Self::zeros(2 * n)?;
        h.shift = shift;
        for s in 0..2 {
            for i in 0..n {
                for j in 0..n {
                    h.set_one_body(i + s * n, j + s * n, h1[i * n + j]);
                }
            }
        }
        for s1 in 0..2 {
            for s2 in 0..2 {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            for l in 0..n {
                                let v = eri[((i * n + j) * n + k) * n + l];
                                h.set_two_body(i + s1 * n, j + s1 * n, k + s2 * n, l + s2 * n, v);
                            }
                        }
                    }
                }
            }
        }
        h.check_symmetry(SYMMETRY_TOLERANCE)?;
        Ok(h)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn set_shift(&mut self, shift: f64) {
        self.shift = shift;
    }

    pub fn n_electrons(&self) -> Option<usize> {
        self.n_electrons
    }

    pub fn set_n_electrons(&mut self, m: Option<usize>) {
        self.n_electrons = m;
    }

    pub fn one_body(&self, a: usize, b: usize) -> f64 {
        self.one_body[a * self.n_modes + b]
    }

    pub fn two_body(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.two_body[self.idx4(a, b, c, d)]
    }

    pub fn set_one_body(&mut self, a: usize, b: usize, v: f64) {
        self.one_body[a * self.n_modes + b] = v;
    }

    pub fn set_two_body(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let i = self.idx4(a, b, c, d);
        self.two_body[i] = v;
    }

    pub fn one_body_matrix(&self) -> &[f64] {
        &self.one_body
    }

    pub fn two_body_tensor(&self) -> &[f64] {
        &self.two_body
    }

    fn idx4(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        let m = self.n_modes;
        ((a * m + b) * m + c) * m + d
    }

    /// Spin of mode `a`: `false` for up, `true` for down.
    pub fn spin_of(&self, a: usize) -> bool {
        a >= self.n_modes / 2
    }

    /// Verify `t = tᵀ` and the 8-fold symmetry of `u`.
    pub fn check_symmetry(&self, tol: f64) -> Result<()> {
        let m = self.n_modes;
        for a in 0..m {
            for b in 0..a {
                let (x, y) = (self.one_body(a, b), self.one_body(b, a));
                if (x - y).abs() > tol {
                    return Err(Error::Symmetry(format!(
                        "t[{a}][{b}] = {x} but t[{b}][{a}] = {y}"
                    )));
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let v = self.two_body(a, b, c, d);
                        for (p, q, r, s) in [(b, a, c, d), (a, b, d, c), (c, d, a, b)] {
                            let w = self.two_body(p, q, r, s);
                            if (v - w).abs() > tol {
                                return Err(Error::Symmetry(format!(
                                    "u[{a}{b}{c}{d}] = {v} but u[{p}{q}{r}{s}] = {w}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
