//! Shared helpers: independent dense oracles and random instances.
#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;

use hevqe::core::fermion::FermionHamiltonian;
use hevqe::core::linalg::{eigh_real, CMatrix, RMatrix};
use hevqe::core::{Pauli, PauliString, QubitHamiltonian, Rng};
use num_complex::Complex64;
use rand::Rng as _;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Print a verdict line outside the test harness capture.
pub fn verdict(criterion: &str, pass: bool, detail: &str) {
    let line = format!(
        "{criterion}: {} {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stdout().write_all(line.as_bytes());
    let _ = std::io::stdout().flush();
}

fn apply_annihilation(state: usize, mode: usize) -> Option<(f64, usize)> {
    if state >> mode & 1 == 0 {
        return None;
    }
    let sign = if (state & ((1 << mode) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Some((sign, state ^ (1 << mode)))
}

fn apply_creation(state: usize, mode: usize) -> Option<(f64, usize)> {
    if state >> mode & 1 == 1 {
        return None;
    }
    let sign = if (state & ((1 << mode) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Some((sign, state | (1 << mode)))
}

/// `H` on the Fock space, basis state bit `j` = occupation of mode `j`.
pub fn fock_matrix(h: &FermionHamiltonian) -> RMatrix {
    let m = h.n_modes();
    let dim = 1 << m;
    let mut out = RMatrix::zeros(dim, dim);
    for s in 0..dim {
        out[(s, s)] += h.shift();
        for a in 0..m {
            for b in 0..m {
                let t = h.one_body(a, b);
                if t == 0.0 {
                    continue;
                }
                if let Some((s1, x)) = apply_annihilation(s, b) {
                    if let Some((s2, y)) = apply_creation(x, a) {
                        out[(y, s)] += t * s1 * s2;
                    }
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let u = h.two_body(a, b, c, d);
                        if u == 0.0 {
                            continue;
                        }
                        // a†_a a†_c a_d a_b
                        let r = apply_annihilation(s, b)
                            .and_then(|(s1, x)| {
                                apply_annihilation(x, d).map(|(s2, x)| (s1 * s2, x))
                            })
                            .and_then(|(s1, x)| apply_creation(x, c).map(|(s2, x)| (s1 * s2, x)))
                            .and_then(|(s1, x)| apply_creation(x, a).map(|(s2, x)| (s1 * s2, x)));
                        if let Some((sign, y)) = r {
                            out[(y, s)] += 0.5 * u * sign;
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn spectrum_real(m: &RMatrix) -> Vec<f64> {
    let mut e = eigh_real(m).0;
    e.sort_by(f64::total_cmp);
    e
}

/// Lowest eigenvalue of `H` restricted to states with `(−1)^{N↑} = z_half`
/// and `(−1)^{N} = z_full`.
pub fn sector_ground_energy(h: &FermionHamiltonian, z_half: i8, z_full: i8) -> f64 {
    let m = h.n_modes();
    let full = fock_matrix(h);
    let parity = |n: u32| if n.is_multiple_of(2) { 1 } else { -1 };
    let keep: Vec<usize> = (0..1usize << m)
        .filter(|&s| {
            let up = (s & ((1 << (m / 2)) - 1)).count_ones();
            parity(up) == z_half && parity(s.count_ones()) == z_full
        })
        .collect();
    let mut sub = RMatrix::zeros(keep.len(), keep.len());
    for (i, &a) in keep.iter().enumerate() {
        for (j, &b) in keep.iter().enumerate() {
            sub[(i, j)] = full[(a, b)];
        }
    }
    spectrum_real(&sub)[0]
}

/// Random real integrals with the 8-fold symmetry. With `spin_orbital`
/// false the spin-orbital Hamiltonian comes from spatial integrals and
/// conserves `N↑` and `N↓`; otherwise every spin-orbital index is mixed.
pub fn random_fermion(n_modes: usize, spin_orbital: bool, rng: &mut Rng) -> FermionHamiltonian {
    let n = if spin_orbital { n_modes } else { n_modes / 2 };
    let mut h1 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = rng.random_range(-1.0..1.0);
            h1[i * n + j] = v;
            h1[j * n + i] = v;
        }
    }
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let mut eri = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = rng.random_range(-0.5..0.5);
                    for (a, b, c, d) in [
                        (i, j, k, l),
                        (j, i, k, l),
                        (i, j, l, k),
                        (j, i, l, k),
                        (k, l, i, j),
                        (l, k, i, j),
                        (k, l, j, i),
                        (l, k, j, i),
                    ] {
                        eri[idx(a, b, c, d)] = v;
                    }
                }
            }
        }
    }
    let shift = rng.random_range(-1.0..1.0);
    if spin_orbital {
        FermionHamiltonian::new(n_modes, h1, eri, shift).unwrap()
    } else {
        FermionHamiltonian::from_spatial(n, &h1, &eri, shift).unwrap()
    }
}

/// `count` distinct random non-identity Pauli strings with coefficients in
/// `[-1, 1]`.
pub fn random_qubit_hamiltonian(n: usize, count: usize, rng: &mut Rng) -> QubitHamiltonian {
    let mut seen = std::collections::BTreeSet::new();
    let mut terms = Vec::new();
    while terms.len() < count {
        let code: u64 = rng.random_range(1..4u64.pow(n as u32));
        if !seen.insert(code) {
            continue;
        }
        let letters: Vec<Pauli> = (0..n)
            .map(|q| match code >> (2 * q) & 3 {
                0 => Pauli::I,
                1 => Pauli::X,
                2 => Pauli::Y,
                _ => Pauli::Z,
            })
            .collect();
        terms.push((
            rng.random_range(-1.0..1.0),
            PauliString::from_letters(&letters).unwrap(),
        ));
    }
    QubitHamiltonian::new(n, terms).unwrap()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_dense(p: Pauli) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let v = match p {
        Pauli::I => [o, z, z, o],
        Pauli::X => [z, o, o, z],
        Pauli::Y => [z, -i, i, z],
        Pauli::Z => [o, z, z, -o],
    };
    CMatrix::from_row_slice(2, 2, &v)
}

/// `A ⊗ B` with `A` on the more significant index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Dense matrix of a Pauli string, qubit 0 most significant.
pub fn pauli_string_dense(p: &PauliString) -> CMatrix {
    let mut m = CMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in 0..p.n_qubits() {
        m = kron(&m, &pauli_dense(p.get(q)));
    }
    m
}

pub fn hamiltonian_dense(h: &QubitHamiltonian) -> CMatrix {
    let d = 1 << h.n_qubits();
    let mut m = CMatrix::zeros(d, d);
    for t in h.terms() {
        m += pauli_string_dense(&t.pauli) * c(t.coefficient, 0.0);
    }
    m
}

/// `exp(−iθP/2)` for a Pauli matrix or string with `P² = I`.
pub fn pauli_rotation(p: &CMatrix, theta: f64) -> CMatrix {
    let id = CMatrix::identity(p.nrows(), p.ncols());
    id * c((0.5 * theta).cos(), 0.0) - p * c(0.0, (0.5 * theta).sin())
}
