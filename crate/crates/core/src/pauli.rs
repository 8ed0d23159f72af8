//! Bit-packed Pauli strings with exact phase tracking.
//!
//! A string on `n` qubits is stored as two masks: bit `q` of `x` (resp. `z`)
//! is set when the letter on qubit `q` has an X (resp. Z) component, so
//! `Y = (1, 1)`. Strings are limited to 64 qubits.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::{Error, Result};

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// 2×2 matrix in the computational basis, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// A phase `i^k`, `k` in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl core::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_masks(n_qubits, 0, 0)
    }

    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::invalid(format!(
                "Pauli strings need 1..={MAX_QUBITS} qubits, got {n_qubits}"
            )));
        }
        let m = mask(n_qubits);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::invalid("mask has bits beyond n_qubits"));
        }
        Ok(PauliString { n_qubits, x, z })
    }

    pub fn from_letters(letters: &[Pauli]) -> Result<Self> {
        let mut x = 0;
        let mut z = 0;
        for (q, p) in letters.iter().enumerate().take(MAX_QUBITS) {
            let (bx, bz) = p.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        Self::from_masks(letters.len(), x, z)
    }

    /// Single non-identity letter `p` on qubit `q`.
    pub fn single(n_qubits: usize, q: usize, p: Pauli) -> Result<Self> {
        if q >= n_qubits {
            return Err(Error::Dimension {
                expected: n_qubits,
                found: q + 1,
            });
        }
        let (bx, bz) = p.bits();
        Self::from_masks(n_qubits, (bx as u64) << q, (bz as u64) << q)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// True when every letter is I or Z.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn with(&self, q: usize, p: Pauli) -> Self {
        let (bx, bz) = p.bits();
        let bit = 1u64 << q;
        let mut out = *self;
        out.x = (out.x & !bit) | if bx { bit } else { 0 };
        out.z = (out.z & !bit) | if bz { bit } else { 0 };
        out
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n_qubits).map(|q| self.get(q)).collect()
    }

    fn check_same_size(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Operator product `self · other = phase · R`.
    pub fn multiply(&self, other: &PauliString) -> Result<(Phase, PauliString)> {
        self.check_same_size(other)?;
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // P = i^{|x&z|} X^x Z^z; moving Z^{z1} past X^{x2} gives (-1)^{|z1&x2|}.
        let k = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        Ok((
            Phase::from_exponent(k),
            PauliString {
                n_qubits: self.n_qubits,
                x,
                z,
            },
        ))
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        self.check_same_size(other)?;
        let s = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(s % 2 == 0)
    }

    /// On every qubit the letters agree or at least one of them is I.
    pub fn qubitwise_compatible(&self, other: &PauliString) -> Result<bool> {
        self.check_same_size(other)?;
        let both = self.support() & other.support();
        Ok((self.x ^ other.x) & both == 0 && (self.z ^ other.z) & both == 0)
    }

    /// Masks in basis-index space: bit `n-1-q` stands for qubit `q`.
    pub fn index_masks(&self) -> (usize, usize) {
        let shift = 64 - self.n_qubits as u32;
        (
            (self.x.reverse_bits() >> shift) as usize,
            (self.z.reverse_bits() >> shift) as usize,
        )
    }

    /// Number of Y letters modulo 4, the phase in `P|b⟩ = i^{n_y} (-1)^{z·b} |b ⊕ x⟩`.
    pub fn y_phase(&self) -> Phase {
        Phase::from_exponent((self.x & self.z).count_ones())
    }

    /// Action on a computational basis state: `P|b⟩ = amplitude · |b'⟩`.
    pub fn apply_to_basis(&self, b: usize) -> (Complex64, usize) {
        let (xi, zi) = self.index_masks();
        let sign = if (zi & b).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        (self.y_phase().to_complex() * sign, b ^ xi)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::invalid(format!("bad Pauli letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::from_letters(&letters)
    }
}

/// Lexicographic order of the letter sequence (I < X < Y < Z), shorter strings first.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits.cmp(&other.n_qubits).then_with(|| {
            for q in 0..self.n_qubits {
                match self.get(q).cmp(&other.get(q)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Dense Kronecker product, qubit 0 most significant.
    fn dense(p: &PauliString) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
        for q in 0..p.n_qubits() {
            let s = p.get(q).matrix();
            let d = m.len();
            let mut out = vec![vec![Complex64::new(0.0, 0.0); 2 * d]; 2 * d];
            for i in 0..d {
                for j in 0..d {
                    for a in 0..2 {
                        for b in 0..2 {
                            out[2 * i + a][2 * j + b] = m[i][j] * s[a][b];
                        }
                    }
                }
            }
            m = out;
        }
        m
    }

    fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = a.len();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn assert_close(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) {
        for (ra, rb) in a.iter().zip(b) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).norm() < 1e-12, "{x} vs {y}");
            }
        }
    }

    fn all_strings(n: usize) -> Vec<PauliString> {
        (0..4usize.pow(n as u32))
            .map(|mut k| {
                let letters: Vec<Pauli> = (0..n)
                    .map(|_| {
                        let p = Pauli::ALL[k % 4];
                        k /= 4;
                        p
                    })
                    .collect();
                PauliString::from_letters(&letters).unwrap()
            })
            .collect()
    }

    #[test]
    fn textbook_products() {
        assert_eq!(ps("X").multiply(&ps("X")).unwrap(), (Phase::ONE, ps("I")));
        assert_eq!(ps("X").multiply(&ps("Y")).unwrap(), (Phase::I, ps("Z")));
        assert_eq!(
            ps("Y").multiply(&ps("X")).unwrap(),
            (Phase::MINUS_I, ps("Z"))
        );
        assert_eq!(ps("Z").multiply(&ps("X")).unwrap(), (Phase::I, ps("Y")));
        // XZ·ZX = (XZ)⊗(ZX) = (-iY)⊗(iY) = YY
        assert_eq!(
            ps("XZ").multiply(&ps("ZX")).unwrap(),
            (Phase::ONE, ps("YY"))
        );
    }

    #[test]
    fn products_match_dense_matrices() {
        for n in 1..=2 {
            let all = all_strings(n);
            for p in &all {
                for q in &all {
                    let (phase, r) = p.multiply(q).unwrap();
                    let mut expect = dense(&r);
                    for row in expect.iter_mut() {
                        for v in row.iter_mut() {
                            *v *= phase.to_complex();
                        }
                    }
                    assert_close(&matmul(&dense(p), &dense(q)), &expect);
                }
            }
        }
    }

    #[test]
    fn products_are_associative_with_phases() {
        for n in 1..=2 {
            let all = all_strings(n);
            for p in &all {
                for q in &all {
                    for r in &all {
                        let (a1, pq) = p.multiply(q).unwrap();
                        let (a2, left) = pq.multiply(r).unwrap();
                        let (b1, qr) = q.multiply(r).unwrap();
                        let (b2, right) = p.multiply(&qr).unwrap();
                        assert_eq!(left, right);
                        assert_eq!(a1 * a2, b1 * b2);
                    }
                }
            }
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(
            ps("XX").multiply(&ps("X")),
            Err(Error::Dimension { .. })
        ));
        assert!(ps("XX").qubitwise_compatible(&ps("X")).is_err());
    }

    #[test]
    fn qubitwise_compatibility() {
        assert!(ps("ZI").qubitwise_compatible(&ps("IZ")).unwrap());
        assert!(ps("XX").qubitwise_compatible(&ps("XI")).unwrap());
        assert!(!ps("XX").qubitwise_compatible(&ps("ZZ")).unwrap());
        assert!(!ps("YI").qubitwise_compatible(&ps("XI")).unwrap());
    }

    #[test]
    fn basis_action_matches_dense() {
        for p in all_strings(3) {
            let m = dense(&p);
            for b in 0..8 {
                let (amp, b2) = p.apply_to_basis(b);
                assert!((m[b2][b] - amp).norm() < 1e-15, "{p} on {b}");
            }
        }
    }

    #[test]
    fn text_round_trip_and_order() {
        let p = ps("IXYZ");
        assert_eq!(p.to_string(), "IXYZ");
        assert_eq!(p.get(0), Pauli::I);
        assert_eq!(p.get(3), Pauli::Z);
        assert_eq!(p.weight(), 3);
        assert!(ps("IZ") < ps("XI"));
        assert!(ps("XY") < ps("XZ"));
        assert!("XQ".parse::<PauliString>().is_err());
    }
}
