//! Dense density matrices with local (one- and two-qubit) kernels.

use num_complex::Complex64;

use crate::linalg::{CMatrix, ZERO};
use crate::prelude::*;
use crate::{Error, PauliString, QubitHamiltonian, Result};

use super::gates::{Mat2, Mat4};
use super::statevector::StateVector;

/// Largest register simulated with density matrices.
pub const MAX_DENSITY_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    /// Row-major `2^N × 2^N`.
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|0…0⟩⟨0…0|`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::Resource {
                what: "density-matrix qubits",
                size: n_qubits,
                limit: MAX_DENSITY_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        let mut data = vec![ZERO; dim * dim];
        data[0] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { n_qubits, data })
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let mut rho = Self::new(psi.n_qubits())?;
        let a = psi.amplitudes();
        let dim = a.len();
        for i in 0..dim {
            for j in 0..dim {
                rho.data[i * dim + j] = a[i] * a[j].conj();
            }
        }
        Ok(rho)
    }

    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        let dim = m.nrows();
        if !dim.is_power_of_two() || m.ncols() != dim {
            return Err(Error::invalid(
                "density matrix must be square with power-of-two size",
            ));
        }
        let mut rho = Self::new(dim.trailing_zeros() as usize)?;
        for i in 0..dim {
            for j in 0..dim {
                rho.data[i * dim + j] = m[(i, j)];
            }
        }
        Ok(rho)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn to_matrix(&self) -> CMatrix {
        let dim = self.dim();
        CMatrix::from_row_slice(dim, dim, &self.data)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Diagonal in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..=i {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::invalid(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    /// Visit every `2×2` block spanned by qubit `q` in both row and column.
    fn for_each_block1(&mut self, q: usize, mut f: impl FnMut(&mut [[Complex64; 2]; 2])) {
        let dim = self.dim();
        let s = self.bit(q);
        for i in (0..dim).filter(|i| i & s == 0) {
            for j in (0..dim).filter(|j| j & s == 0) {
                let idx = [
                    [i * dim + j, i * dim + j + s],
                    [(i + s) * dim + j, (i + s) * dim + j + s],
                ];
                let mut b = [
                    [self.data[idx[0][0]], self.data[idx[0][1]]],
                    [self.data[idx[1][0]], self.data[idx[1][1]]],
                ];
                f(&mut b);
                for r in 0..2 {
                    for c in 0..2 {
                        self.data[idx[r][c]] = b[r][c];
                    }
                }
            }
        }
    }

    /// Visit every `4×4` block spanned by qubits `(q1, q2)`, `q1` on the more
    /// significant local index.
    fn for_each_block2(
        &mut self,
        q1: usize,
        q2: usize,
        mut f: impl FnMut(&mut [[Complex64; 4]; 4]),
    ) {
        let dim = self.dim();
        let (s1, s2) = (self.bit(q1), self.bit(q2));
        let off = [0, s2, s1, s1 + s2];
        let mask = s1 | s2;
        for i in (0..dim).filter(|i| i & mask == 0) {
            for j in (0..dim).filter(|j| j & mask == 0) {
                let mut b = [[ZERO; 4]; 4];
                for r in 0..4 {
                    for c in 0..4 {
                        b[r][c] = self.data[(i + off[r]) * dim + j + off[c]];
                    }
                }
                f(&mut b);
                for r in 0..4 {
                    for c in 0..4 {
                        self.data[(i + off[r]) * dim + j + off[c]] = b[r][c];
                    }
                }
            }
        }
    }

    /// `ρ → U ρ U†` on qubit `q`.
    pub fn apply_1q(&mut self, q: usize, u: &Mat2) -> Result<()> {
        self.check_qubit(q)?;
        self.for_each_block1(q, |b| *b = conjugate2(u, b));
        Ok(())
    }

    /// `ρ → U ρ U†` on `(q1, q2)` with `q1` the more significant factor of `U`.
    pub fn apply_2q(&mut self, q1: usize, q2: usize, u: &Mat4) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::invalid("two-qubit gate needs distinct qubits"));
        }
        self.for_each_block2(q1, q2, |b| *b = conjugate4(u, b));
        Ok(())
    }

    /// `ρ → Σ_k E_k ρ E_k†` on qubit `q`.
    pub fn apply_kraus_1q(&mut self, q: usize, ops: &[Mat2]) -> Result<()> {
        self.check_qubit(q)?;
        self.for_each_block1(q, |b| {
            let mut acc = [[ZERO; 2]; 2];
            for e in ops {
                let t = conjugate2(e, b);
                for r in 0..2 {
                    for c in 0..2 {
                        acc[r][c] += t[r][c];
                    }
                }
            }
            *b = acc;
        });
        Ok(())
    }

    /// `ρ → Σ_k E_k ρ E_k†` on `(q1, q2)`.
    pub fn apply_kraus_2q(&mut self, q1: usize, q2: usize, ops: &[Mat4]) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::invalid("two-qubit channel needs distinct qubits"));
        }
        self.for_each_block2(q1, q2, |b| {
            let mut acc = [[ZERO; 4]; 4];
            for e in ops {
                let t = conjugate4(e, b);
                for r in 0..4 {
                    for c in 0..4 {
                        acc[r][c] += t[r][c];
                    }
                }
            }
            *b = acc;
        });
        Ok(())
    }

    /// `tr(ρ P)`.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: p.n_qubits(),
            });
        }
        let dim = self.dim();
        let mut acc = ZERO;
        for b in 0..dim {
            // ⟨b|ρ P|b⟩ = φ(b) ρ[b][b ⊕ x]
            let (phase, col) = p.apply_to_basis(b);
            acc += phase * self.data[b * dim + col];
        }
        Ok(acc.re)
    }

    /// `tr(ρ H)`, the identity shift included.
    pub fn energy(&self, h: &QubitHamiltonian) -> Result<f64> {
        let mut e = h.identity_shift();
        for t in h.terms() {
            e += t.coefficient * self.pauli_expectation(&t.pauli)?;
        }
        Ok(e)
    }
}

fn conjugate2(u: &Mat2, b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut ub = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            ub[r][c] = u[r][0] * b[0][c] + u[r][1] * b[1][c];
        }
    }
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = ub[r][0] * u[c][0].conj() + ub[r][1] * u[c][1].conj();
        }
    }
    out
}

fn conjugate4(u: &Mat4, b: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    let mut ub = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            ub[r][c] = (0..4).map(|k| u[r][k] * b[k][c]).sum();
        }
    }
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| ub[r][k] * u[c][k].conj()).sum();
        }
    }
    out
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho.n_qubits(),
        });
    }
    let m = rho.to_matrix();
    let yy = crate::linalg::kron(&pauli_y(), &pauli_y());
    let tilde = &yy * m.conjugate() * &yy;
    // eigenvalues of R = sqrt(sqrt ρ ρ̃ sqrt ρ)
    let (vals, vecs) = crate::linalg::eigh(&m);
    let sqrt_diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    let sqrt_rho = &vecs * sqrt_diag * vecs.adjoint();
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let r = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lam: Vec<f64> = crate::linalg::eigvalsh(&r)
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

fn pauli_y() -> CMatrix {
    let y = crate::Pauli::Y.matrix();
    CMatrix::from_row_slice(2, 2, &[y[0][0], y[0][1], y[1][0], y[1][1]])
}

#[cfg(test)]
mod tests {
    use super::super::gates::{euler, kron2, rx};
    use super::*;
    use crate::linalg::{kron, max_abs_diff};

    fn m2(u: &Mat2) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[u[0][0], u[0][1], u[1][0], u[1][1]])
    }

    fn eye(n: usize) -> CMatrix {
        CMatrix::identity(n, n)
    }

    fn random_state(n: usize, seed: u64) -> DensityMatrix {
        let psi = StateVector::random(n, &mut crate::rng_stream(seed, 0)).unwrap();
        let mut rho = DensityMatrix::from_pure(&psi).unwrap();
        // mix in a second pure state so the test is not purity-specific
        let phi = StateVector::random(n, &mut crate::rng_stream(seed, 1)).unwrap();
        let sigma = DensityMatrix::from_pure(&phi).unwrap();
        for (a, b) in rho.data.iter_mut().zip(&sigma.data) {
            *a = *a * 0.7 + *b * 0.3;
        }
        rho
    }

    #[test]
    fn initial_state() {
        let rho = DensityMatrix::new(2).unwrap();
        assert_eq!(rho.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(rho.trace(), Complex64::new(1.0, 0.0));
        assert!((DensityMatrix::new(6).unwrap().trace().re - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::new(11).is_err());
    }

    #[test]
    fn one_qubit_kernel_matches_kron() {
        let rho = random_state(3, 4);
        let u = euler(0.3, -1.2, 2.2);
        for q in 0..3 {
            let mut got = rho.clone();
            got.apply_1q(q, &u).unwrap();
            let mut full = CMatrix::identity(1, 1);
            for k in 0..3 {
                full = kron(&full, &if k == q { m2(&u) } else { eye(2) });
            }
            let expect = &full * rho.to_matrix() * full.adjoint();
            assert!(max_abs_diff(&got.to_matrix(), &expect) < 1e-13);
            assert!((got.trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_qubit_kernel_on_non_adjacent_reversed_pair() {
        let rho = random_state(3, 8);
        let u4 = kron2(&rx(0.4), &euler(0.1, 0.2, 0.3));
        let mut got = rho.clone();
        got.apply_2q(2, 0, &u4).unwrap();
        // U acts as rx on qubit 2 and euler on qubit 0
        let full = kron(&kron(&m2(&euler(0.1, 0.2, 0.3)), &eye(2)), &m2(&rx(0.4)));
        let expect = &full * rho.to_matrix() * full.adjoint();
        assert!(max_abs_diff(&got.to_matrix(), &expect) < 1e-13);
    }

    #[test]
    fn x_pi_flips() {
        let mut rho = DensityMatrix::new(1).unwrap();
        rho.apply_1q(0, &euler(0.0, core::f64::consts::PI, 0.0))
            .unwrap();
        assert!((rho.get(1, 1).re - 1.0).abs() < 1e-15);
        assert!(rho.apply_1q(1, &euler(0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn pauli_expectation_matches_dense_trace() {
        let rho = random_state(3, 12);
        let h = QubitHamiltonian::new(
            3,
            [
                (0.4, "XYZ".parse().unwrap()),
                (-1.1, "IZY".parse().unwrap()),
                (0.25, "YIX".parse().unwrap()),
                (0.3, "III".parse().unwrap()),
            ],
        )
        .unwrap();
        let dense = (rho.to_matrix() * h.to_matrix().unwrap()).trace();
        assert!((rho.energy(&h).unwrap() - dense.re).abs() < 1e-12);
        assert!(dense.im.abs() < 1e-12);
    }

    #[test]
    fn concurrence_of_bell_and_product_states() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(vec![
            Complex64::new(h, 0.0),
            ZERO,
            ZERO,
            Complex64::new(h, 0.0),
        ])
        .unwrap();
        let c = concurrence(&DensityMatrix::from_pure(&bell).unwrap()).unwrap();
        assert!((c - 1.0).abs() < 1e-7);
        let c = concurrence(&DensityMatrix::new(2).unwrap()).unwrap();
        assert!(c.abs() < 1e-7);
    }
}
