//! Independent per-qubit assignment errors.
//!
//! The deformed projectors `Π̂_0 = (1−η0) I + η1 Z` and `Π̂_1 = η0 I − η1 Z`
//! imply `P(read 1 | 0) = η0 − η1` and `P(read 0 | 1) = 1 − η0 − η1`. Ideal
//! readout is `η0 = η1 = 1/2`. The measured `Ẑ` relates to the ideal one by
//! `⟨Ẑ⟩ = (1 − 2η0) + 2η1 ⟨Z⟩`.

use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::{Error, Pauli, PauliString, Result};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReadoutModel {
    #[default]
    Ideal,
    Uniform {
        eta0: f64,
        eta1: f64,
    },
    PerQubit {
        eta: Vec<(f64, f64)>,
    },
}

impl ReadoutModel {
    /// Symmetric assignment error `ε_r`: `η0 = 1/2`, `η1 = 1/2 − ε_r`.
    pub fn symmetric(epsilon: f64) -> Self {
        ReadoutModel::Uniform {
            eta0: 0.5,
            eta1: 0.5 - epsilon,
        }
    }

    pub fn is_ideal(&self) -> bool {
        match self {
            ReadoutModel::Ideal => true,
            ReadoutModel::Uniform { eta0, eta1 } => *eta0 == 0.5 && *eta1 == 0.5,
            ReadoutModel::PerQubit { eta } => eta.iter().all(|&e| e == (0.5, 0.5)),
        }
    }

    /// `(η0, η1)` of qubit `q`.
    pub fn eta(&self, q: usize) -> (f64, f64) {
        match self {
            ReadoutModel::Ideal => (0.5, 0.5),
            ReadoutModel::Uniform { eta0, eta1 } => (*eta0, *eta1),
            ReadoutModel::PerQubit { eta } => eta[q],
        }
    }

    /// `(P(read 1 | 0), P(read 0 | 1))` of qubit `q`.
    pub fn flip_probabilities(&self, q: usize) -> (f64, f64) {
        let (e0, e1) = self.eta(q);
        (e0 - e1, 1.0 - e0 - e1)
    }

    /// Offset `s = 1 − 2η0` and contrast `g = 2η1` of qubit `q`.
    pub fn affine(&self, q: usize) -> (f64, f64) {
        let (e0, e1) = self.eta(q);
        (1.0 - 2.0 * e0, 2.0 * e1)
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if let ReadoutModel::PerQubit { eta } = self {
            if eta.len() != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    found: eta.len(),
                });
            }
        }
        for q in 0..n_qubits {
            let (f01, f10) = self.flip_probabilities(q);
            let (_, g) = self.affine(q);
            if !(0.0..=1.0).contains(&f01) || !(0.0..=1.0).contains(&f10) {
                return Err(Error::invalid(format!(
                    "qubit {q}: η parameters give flip probabilities ({f01}, {f10}) outside [0, 1]"
                )));
            }
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::invalid(format!(
                    "qubit {q}: contrast 2η1 = {g} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Push ideal outcome probabilities through the per-qubit flip channels.
    pub fn distort(&self, probs: &mut [f64], n_qubits: usize) {
        if self.is_ideal() {
            return;
        }
        for q in 0..n_qubits {
            let (f01, f10) = self.flip_probabilities(q);
            let s = 1usize << (n_qubits - 1 - q);
            for i in (0..probs.len()).filter(|i| i & s == 0) {
                let (p0, p1) = (probs[i], probs[i + s]);
                probs[i] = p0 * (1.0 - f01) + p1 * f10;
                probs[i + s] = p0 * f01 + p1 * (1.0 - f10);
            }
        }
    }
}

/// Undo the assignment distortion of raw Pauli expectations.
///
/// For a string with support `W`, `⟨Π x̂_q⟩ = Σ_{A⊆W} Π_{W∖A} s_q Π_A g_q ⟨Z_A⟩`,
/// which is inverted from the smallest subsets upward. Raw values of the
/// sub-strings are looked up in `raw`; they are only needed when some
/// `s_q ≠ 0` on the support. With `s = 0` this reduces to division by the
/// contrast `Π g_q`.
pub fn correct_assignment(
    raw: &BTreeMap<PauliString, f64>,
    readout: &ReadoutModel,
) -> Result<BTreeMap<PauliString, f64>> {
    let mut out = BTreeMap::new();
    for (&p, &value) in raw {
        out.insert(p, correct_one(p, value, raw, readout)?);
    }
    Ok(out)
}

fn restrict(p: &PauliString, keep: &[usize]) -> PauliString {
    let mut r = PauliString::identity(p.n_qubits()).expect("valid size");
    for &q in keep {
        r = r.with(q, p.get(q));
    }
    r
}

fn correct_one(
    p: PauliString,
    value: f64,
    raw: &BTreeMap<PauliString, f64>,
    readout: &ReadoutModel,
) -> Result<f64> {
    let support: Vec<usize> = (0..p.n_qubits())
        .filter(|&q| p.get(q) != Pauli::I)
        .collect();
    let w = support.len();
    let aff: Vec<(f64, f64)> = support.iter().map(|&q| readout.affine(q)).collect();
    for &(_, g) in &aff {
        if g <= 0.0 {
            return Err(Error::invalid("readout contrast must be positive"));
        }
    }
    if aff.iter().all(|&(s, _)| s == 0.0) {
        return Ok(value / aff.iter().map(|a| a.1).product::<f64>());
    }
    if w > 16 {
        return Err(Error::invalid("subset correction limited to weight 16"));
    }
    // corrected[mask] for subsets of the support, by increasing mask
    let full = (1usize << w) - 1;
    let mut corrected = vec![0.0; 1 << w];
    corrected[0] = 1.0;
    for mask in 1..=full {
        let raw_value = if mask == full {
            value
        } else {
            let keep: Vec<usize> = (0..w)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| support[k])
                .collect();
            let sub = restrict(&p, &keep);
            *raw.get(&sub).ok_or_else(|| {
                Error::invalid(format!(
                    "assignment correction of {p} needs the raw value of {sub}"
                ))
            })?
        };
        let mut rest = raw_value;
        let mut sub = (mask - 1) & mask;
        loop {
            let mut f = corrected[sub];
            for k in 0..w {
                if mask >> k & 1 == 1 {
                    f *= if sub >> k & 1 == 1 {
                        aff[k].1
                    } else {
                        aff[k].0
                    };
                }
            }
            rest -= f;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        let g: f64 = (0..w)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| aff[k].1)
            .product();
        corrected[mask] = rest / g;
    }
    Ok(corrected[full])
}
