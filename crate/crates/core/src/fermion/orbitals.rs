//! Orbital rotation to the basis diagonalizing the one-body part, and the
//! frozen-core reduction on the dressed basis.

use crate::linalg::{eigh_real, RMatrix};
use crate::prelude::*;
use crate::{Error, Result};

use super::FermionHamiltonian;

#[derive(Debug, Clone)]
pub struct Bogoliubov {
    /// Orthogonal `M×M` matrix; column `a` is dressed mode `a` in the old basis.
    pub rotation: RMatrix,
    /// Dressed one-body energies, ascending within each spin block.
    pub energies: Vec<f64>,
    pub hamiltonian: FermionHamiltonian,
}

/// Rotate the modes so that `t` becomes diagonal. Spin blocks are diagonalized
/// independently; each eigenvector column is signed so that its largest
/// component is positive.
pub fn bogoliubov_diagonalize(h: &FermionHamiltonian) -> Result<Bogoliubov> {
    let m = h.n_modes();
    let half = m / 2;
    for a in 0..m {
        for b in 0..m {
            if h.spin_of(a) != h.spin_of(b) && h.one_body(a, b).abs() > super::SYMMETRY_TOLERANCE {
                return Err(Error::invalid(format!(
                    "one-body term t[{a}][{b}] mixes spin blocks"
                )));
            }
        }
    }
    let mut u = RMatrix::zeros(m, m);
    let mut energies = vec![0.0; m];
    for block in 0..2 {
        let off = block * half;
        let t = RMatrix::from_fn(half, half, |i, j| h.one_body(off + i, off + j));
        let (vals, vecs) = eigh_real(&t);
        for j in 0..half {
            let col = vecs.column(j);
            let pivot = (0..half)
                .max_by(|&a, &b| col[a].abs().total_cmp(&col[b].abs()))
                .unwrap_or(0);
            let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
            for i in 0..half {
                u[(off + i, off + j)] = sign * col[i];
            }
            energies[off + j] = vals[j];
        }
    }
    let hamiltonian = rotate(h, &u)?;
    Ok(Bogoliubov {
        rotation: u,
        energies,
        hamiltonian,
    })
}

/// `t' = Uᵀ t U` and `u'` transformed on all four indices.
fn rotate(h: &FermionHamiltonian, u: &RMatrix) -> Result<FermionHamiltonian> {
    let m = h.n_modes();
    let t = RMatrix::from_row_slice(m, m, h.one_body_matrix());
    let t2 = u.transpose() * t * u;
    let mut one = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            one[a * m + b] = t2[(a, b)];
        }
    }
    // four quarter transformations, each contracting one index
    let mut cur = h.two_body_tensor().to_vec();
    for axis in 0..4 {
        let mut next = vec![0.0; m.pow(4)];
        let stride = m.pow(3 - axis as u32);
        for idx in 0..m.pow(4) {
            let v = cur[idx];
            if v == 0.0 {
                continue;
            }
            let old = (idx / stride) % m;
            let base = idx - old * stride;
            for new in 0..m {
                let c = u[(old, new)];
                if c != 0.0 {
                    next[base + new * stride] += c * v;
                }
            }
        }
        cur = next;
    }
    let mut out = FermionHamiltonian::zeros(m)?;
    for (a, v) in one.into_iter().enumerate() {
        out.set_one_body(a / m, a % m, v);
    }
    for (idx, v) in cur.into_iter().enumerate() {
        let (a, b, c, d) = (idx / m.pow(3), (idx / m.pow(2)) % m, (idx / m) % m, idx % m);
        out.set_two_body(a, b, c, d, v);
    }
    // restore exact symmetry lost to rounding
    for a in 0..m {
        for b in 0..a {
            let v = 0.5 * (out.one_body(a, b) + out.one_body(b, a));
            out.set_one_body(a, b, v);
            out.set_one_body(b, a, v);
        }
    }
    out.set_shift(h.shift());
    out.set_n_electrons(h.n_electrons());
    Ok(out)
}

/// Ratio `max|u'| / min_f(-ω'_f)` over the frozen set. The frozen-core
/// reduction is accurate when this is small; a non-positive minimum yields
/// `f64::INFINITY`.
pub fn frozen_core_validity(h: &FermionHamiltonian, frozen: &[usize]) -> f64 {
    let min_binding = frozen
        .iter()
        .map(|&f| -h.one_body(f, f))
        .fold(f64::INFINITY, f64::min);
    if frozen.is_empty() {
        return 0.0;
    }
    if min_binding <= 0.0 {
        return f64::INFINITY;
    }
    let umax = h
        .two_body_tensor()
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    umax / min_binding
}

/// Treat the modes in `frozen` as permanently filled.
///
/// The one-body energies of frozen modes become a shift; two-body terms with
/// exactly two frozen indices paired as density or exchange contractions turn
/// into effective one-body or shift terms; terms with any other pattern of
/// frozen indices are dropped. Remaining modes are relabeled in order, which
/// keeps the spin layout because `frozen` must be closed under spin partner.
pub fn freeze_core(h: &FermionHamiltonian, frozen: &[usize]) -> Result<FermionHamiltonian> {
    let m = h.n_modes();
    let half = m / 2;
    let mut is_frozen = vec![false; m];
    for &f in frozen {
        if f >= m {
            return Err(Error::invalid(format!("frozen mode {f} out of range")));
        }
        is_frozen[f] = true;
    }
    for f in 0..m {
        let partner = if f < half { f + half } else { f - half };
        if is_frozen[f] && !is_frozen[partner] {
            return Err(Error::invalid(format!(
                "frozen set must contain spin partners: {f} without {partner}"
            )));
        }
    }
    if frozen.is_empty() {
        return Ok(h.clone());
    }
    for f in (0..m).filter(|&f| is_frozen[f]) {
        for x in (0..m).filter(|&x| !is_frozen[x]) {
            if h.one_body(f, x).abs() > super::SYMMETRY_TOLERANCE {
                return Err(Error::invalid(format!(
                    "t[{f}][{x}] couples a frozen mode; rotate to the dressed basis first"
                )));
            }
        }
    }

    let active: Vec<usize> = (0..m).filter(|&a| !is_frozen[a]).collect();
    let mut label = vec![usize::MAX; m];
    for (new, &old) in active.iter().enumerate() {
        label[old] = new;
    }
    let n_active = active.len();
    let mut one = vec![0.0; n_active * n_active];
    let mut shift = h.shift();
    for f in (0..m).filter(|&f| is_frozen[f]) {
        shift += h.one_body(f, f);
    }
    for &a in &active {
        for &b in &active {
            one[label[a] * n_active + label[b]] = h.one_body(a, b);
        }
    }
    let mut out = FermionHamiltonian::zeros(n_active)?;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let v = h.two_body(a, b, c, d);
                    if v == 0.0 {
                        continue;
                    }
                    let half_v = 0.5 * v;
                    let fz = [is_frozen[a], is_frozen[b], is_frozen[c], is_frozen[d]];
                    let n_frozen = fz.iter().filter(|&&x| x).count();
                    match n_frozen {
                        0 => out.set_two_body(label[a], label[b], label[c], label[d], v),
                        2 => {
                            if a == b && fz[0] {
                                // ½u n_a a†_c a_d
                                one[label[c] * n_active + label[d]] += half_v;
                            } else if c == d && fz[2] {
                                one[label[a] * n_active + label[b]] += half_v;
                            } else if a == d && fz[0] {
                                one[label[c] * n_active + label[b]] -= half_v;
                            } else if c == b && fz[2] {
                                one[label[a] * n_active + label[d]] -= half_v;
                            }
                        }
                        4 => {
                            if a == b && c == d && a != c {
                                shift += half_v;
                            } else if a == d && c == b && a != c {
                                shift -= half_v;
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    for (k, v) in one.into_iter().enumerate() {
        out.set_one_body(k / n_active, k % n_active, v);
    }
    out.set_shift(shift);
    out.set_n_electrons(h.n_electrons().map(|n| n.saturating_sub(frozen.len())));
    Ok(out)
}
