//! Fermion-to-qubit encodings.
//!
//! Every scheme is a linear map `b = β n (mod 2)` from mode occupations `n`
//! to qubit bits `b`. With `U(j) = {i : β_ij = 1}` (qubits flipped when mode
//! `j` changes), `P(j)` the qubits whose parity equals the parity of modes
//! `< j`, and `N(j)` the qubits whose parity equals `n_j`:
//!
//! ```text
//! c_j = Z_{P(j)} X_{U(j)}          = a_j + a†_j
//! d_j = i c_j Z_{N(j)}             = i (a†_j − a_j)
//! a†_j = (c_j − i d_j) / 2,   a_j = (c_j + i d_j) / 2
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pauli::{PauliString, Phase};
use crate::prelude::*;
use crate::{Error, QubitHamiltonian, Result};

use super::FermionHamiltonian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingScheme {
    JordanWigner,
    Parity,
    /// Bravyi-Kitaev (Fenwick tree); needs a power-of-two mode count.
    BinaryTree,
}

impl EncodingScheme {
    pub const ALL: [EncodingScheme; 3] = [
        EncodingScheme::JordanWigner,
        EncodingScheme::Parity,
        EncodingScheme::BinaryTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncodingScheme::JordanWigner => "jordan_wigner",
            EncodingScheme::Parity => "parity",
            EncodingScheme::BinaryTree => "binary_tree",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }

    fn check(self, m: usize) -> Result<()> {
        if m == 0 || m > crate::pauli::MAX_QUBITS {
            return Err(Error::invalid(format!("unsupported mode count {m}")));
        }
        if self == EncodingScheme::BinaryTree && !m.is_power_of_two() {
            return Err(Error::invalid(format!(
                "binary_tree encoding needs a power-of-two mode count, got {m}"
            )));
        }
        Ok(())
    }

    /// Rows of `β` as bit masks over modes.
    fn beta(self, m: usize) -> Vec<u64> {
        (0..m)
            .map(|i| match self {
                EncodingScheme::JordanWigner => 1u64 << i,
                EncodingScheme::Parity => mask_upto(i + 1),
                EncodingScheme::BinaryTree => {
                    let low = (i + 1) & (!i);
                    mask_upto(i + 1) & !mask_upto(i + 1 - low)
                }
            })
            .collect()
    }
}

impl core::fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

fn mask_upto(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Inverse of a unit lower/upper GF(2) matrix given by row masks.
fn gf2_inverse(rows: &[u64]) -> Vec<u64> {
    let m = rows.len();
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..m).map(|i| 1u64 << i).collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| a[r] >> col & 1 == 1)
            .expect("encoding matrix is invertible");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..m {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    inv
}

/// Majorana strings `(c_j, d_j)` for mode `j` of an `m`-mode system, each
/// with its exact phase.
pub fn majorana_pair(
    scheme: EncodingScheme,
    m: usize,
    j: usize,
) -> Result<((Phase, PauliString), (Phase, PauliString))> {
    scheme.check(m)?;
    if j >= m {
        return Err(Error::invalid(format!(
            "mode {j} out of range for {m} modes"
        )));
    }
    let beta = scheme.beta(m);
    let inv = gf2_inverse(&beta);
    Ok(majoranas_from(&beta, &inv, m, j))
}

fn majoranas_from(
    beta: &[u64],
    inv: &[u64],
    m: usize,
    j: usize,
) -> ((Phase, PauliString), (Phase, PauliString)) {
    // n_k = Σ_i inv[k]_i b_i, so parity of modes < j reads qubits in the XOR of rows k < j
    let parity_below = inv[..j].iter().fold(0u64, |acc, r| acc ^ r);
    let update = (0..m)
        .filter(|&i| beta[i] >> j & 1 == 1)
        .fold(0u64, |acc, i| acc | 1 << i);
    let z = PauliString::from_masks(m, 0, parity_below).expect("size checked");
    let x = PauliString::from_masks(m, update, 0).expect("size checked");
    let (ph, c) = z.multiply(&x).expect("same size");
    let number = PauliString::from_masks(m, 0, inv[j]).expect("size checked");
    let (ph2, d) = c.multiply(&number).expect("same size");
    ((ph, c), (Phase::I * ph * ph2, d))
}

/// A ladder operator as `½ Σ phase·P`.
type Ladder = [(Phase, PauliString); 2];

/// Qubit Hamiltonian of `h` under `scheme`, acting on `M` qubits.
///
/// Products of ladder operators are expanded with exact Pauli phases; the
/// accumulated coefficients of a Hermitian input are real up to rounding of
/// the integrals themselves.
pub fn encode(h: &FermionHamiltonian, scheme: EncodingScheme) -> Result<QubitHamiltonian> {
    let m = h.n_modes();
    scheme.check(m)?;
    let beta = scheme.beta(m);
    let inv = gf2_inverse(&beta);
    let mut create: Vec<Ladder> = Vec::with_capacity(m);
    let mut annihilate: Vec<Ladder> = Vec::with_capacity(m);
    for j in 0..m {
        let ((pc, c), (pd, d)) = majoranas_from(&beta, &inv, m, j);
        create.push([(pc, c), (Phase::MINUS_I * pd, d)]);
        annihilate.push([(pc, c), (Phase::I * pd, d)]);
    }

    let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
    let mut add_product = |coef: f64, ops: &[&Ladder]| {
        let scale = coef / f64::from(1u32 << ops.len());
        let mut partial: Vec<(Phase, PauliString)> =
            vec![(Phase::ONE, PauliString::identity(m).expect("size checked"))];
        for op in ops {
            let mut next = Vec::with_capacity(partial.len() * 2);
            for (ph, p) in &partial {
                for (oph, o) in op.iter() {
                    let (mph, r) = p.multiply(o).expect("same size");
                    next.push((*ph * *oph * mph, r));
                }
            }
            partial = next;
        }
        for (ph, p) in partial {
            *acc.entry(p).or_insert(Complex64::new(0.0, 0.0)) += ph.to_complex() * scale;
        }
    };

    for a in 0..m {
        for b in 0..m {
            let t = h.one_body(a, b);
            if t != 0.0 {
                add_product(t, &[&create[a], &annihilate[b]]);
            }
        }
    }
    // ½ u_abcd a†_a a†_c a_d a_b
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if c == a {
                    continue;
                }
                for d in 0..m {
                    if d == b {
                        continue;
                    }
                    let u = h.two_body(a, b, c, d);
                    if u != 0.0 {
                        add_product(
                            0.5 * u,
                            &[&create[a], &create[c], &annihilate[d], &annihilate[b]],
                        );
                    }
                }
            }
        }
    }

    let scale = acc.values().map(|v| v.norm()).fold(1.0, f64::max);
    let mut terms = Vec::with_capacity(acc.len() + 1);
    for (p, v) in acc {
        if v.im.abs() > 1e-9 * scale {
            return Err(Error::Symmetry(format!(
                "encoded coefficient of {p} has imaginary part {}; input is not Hermitian",
                v.im
            )));
        }
        terms.push((v.re, p));
    }
    terms.push((h.shift(), PauliString::identity(m)?));
    QubitHamiltonian::new(m, terms)
}
