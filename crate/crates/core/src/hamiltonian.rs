//! Weighted sums of Pauli strings, their text format, measurement grouping and
//! the dense exact-diagonalization oracle.

use core::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{eigvalsh, CMatrix, ZERO};
use crate::pauli::{Pauli, PauliString};
use crate::prelude::*;
use crate::{Error, Result};

pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1e-12;
pub const DEFAULT_ORACLE_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub pauli: PauliString,
}

/// `H = identity_shift · I + Σ h_α P_α`.
///
/// Terms are unique, non-identity, above the pruning threshold and kept in
/// lexicographic order of their Pauli strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    identity_shift: f64,
}

impl QubitHamiltonian {
    pub fn new<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        Self::with_threshold(n_qubits, terms, DEFAULT_PRUNE_THRESHOLD)
    }

    /// Sums duplicate strings, moves the all-I term into the shift and drops
    /// terms with `|h| < threshold`.
    pub fn with_threshold<I>(n_qubits: usize, terms: I, threshold: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        PauliString::identity(n_qubits)?;
        let mut acc: BTreeMap<PauliString, f64> = BTreeMap::new();
        let mut shift = 0.0;
        for (h, p) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    found: p.n_qubits(),
                });
            }
            if !h.is_finite() {
                return Err(Error::invalid(format!("non-finite coefficient for {p}")));
            }
            if p.is_identity() {
                shift += h;
            } else {
                *acc.entry(p).or_insert(0.0) += h;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, h)| h.abs() >= threshold)
            .map(|(pauli, coefficient)| PauliTerm { coefficient, pauli })
            .collect();
        Ok(QubitHamiltonian {
            n_qubits,
            terms,
            identity_shift: shift,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Number of non-identity terms `T`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn identity_shift(&self) -> f64 {
        self.identity_shift
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient.abs())
            .fold(0.0, f64::max)
    }

    /// `H + c·I`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.identity_shift += c;
        out
    }

    /// `tr(H) / 2^N`, the energy of the maximally mixed state.
    pub fn mixed_state_energy(&self) -> f64 {
        self.identity_shift
    }

    /// Parse the tab-separated text format: `coefficient<TAB>letters` per line,
    /// `#` starts a comment. Any run of whitespace is accepted as separator.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut terms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(c), Some(l), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::parse(i + 1, "expected `coefficient<TAB>letters`"));
            };
            let h: f64 = c
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad coefficient {c:?}")))?;
            let p: PauliString = l
                .parse()
                .map_err(|e: Error| Error::parse(i + 1, e.to_string()))?;
            match n_qubits {
                None => n_qubits = Some(p.n_qubits()),
                Some(n) if n != p.n_qubits() => {
                    return Err(Error::parse(
                        i + 1,
                        format!("term has {} qubits, expected {n}", p.n_qubits()),
                    ))
                }
                _ => {}
            }
            terms.push((h, p));
        }
        let n = n_qubits.ok_or_else(|| Error::parse(0, "no terms"))?;
        Self::new(n, terms)
    }

    /// Text format with an identity line first. Coefficients use the shortest
    /// representation that round-trips.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let id = PauliString::identity(self.n_qubits).expect("valid size");
        let _ = writeln!(out, "{:?}\t{}", self.identity_shift, id);
        for t in &self.terms {
            let _ = writeln!(out, "{:?}\t{}", t.coefficient, t.pauli);
        }
        out
    }

    /// `Σ h_α P_α + shift·I` as a dense `2^N × 2^N` matrix.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        self.to_matrix_limited(DEFAULT_ORACLE_LIMIT)
    }

    pub fn to_matrix_limited(&self, limit: usize) -> Result<CMatrix> {
        if self.n_qubits > limit {
            return Err(Error::Resource {
                what: "dense Hamiltonian size",
                size: self.n_qubits,
                limit,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::from_element(dim, dim, ZERO);
        for b in 0..dim {
            m[(b, b)] += self.identity_shift;
        }
        for t in &self.terms {
            for b in 0..dim {
                let (amp, b2) = t.pauli.apply_to_basis(b);
                m[(b2, b)] += amp * t.coefficient;
            }
        }
        Ok(m)
    }

    /// Sorted eigenvalues of the dense matrix.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(eigvalsh(&self.to_matrix()?))
    }

    /// Smallest eigenvalue.
    pub fn ground_energy(&self) -> Result<f64> {
        Ok(self.spectrum()?[0])
    }

    /// `⟨ψ|H|ψ⟩` for a normalized state vector.
    pub fn expectation_pure(&self, psi: &[Complex64]) -> Result<f64> {
        let dim = 1usize << self.n_qubits;
        if psi.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: psi.len(),
            });
        }
        let mut e = self.identity_shift * psi.iter().map(|a| a.norm_sqr()).sum::<f64>();
        for t in &self.terms {
            e += t.coefficient * pauli_expectation_pure(&t.pauli, psi);
        }
        Ok(e)
    }

    /// Measurement grouping, see [`TpbGrouping::greedy`].
    pub fn group_tpb(&self) -> TpbGrouping {
        TpbGrouping::greedy(self)
    }
}

/// `⟨ψ|P|ψ⟩` (real because `P` is Hermitian).
pub fn pauli_expectation_pure(p: &PauliString, psi: &[Complex64]) -> f64 {
    let (xi, zi) = p.index_masks();
    let y = p.y_phase().to_complex();
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, amp) in psi.iter().enumerate() {
        let sign = if (zi & b).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        acc += psi[b ^ xi].conj() * amp * sign;
    }
    (acc * y).re
}

/// Partition of the non-identity terms into tensor-product-basis sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TpbGrouping {
    /// Term indices (into [`QubitHamiltonian::terms`]) of each set.
    pub sets: Vec<Vec<usize>>,
    /// Per set, the measurement letter of every qubit. Qubits unused by the
    /// set are measured in Z.
    pub bases: Vec<PauliString>,
}

impl TpbGrouping {
    /// Greedy first-fit over terms sorted by descending `|h|`, ties broken by
    /// lexicographic Pauli order.
    pub fn greedy(h: &QubitHamiltonian) -> Self {
        let terms = h.terms();
        let mut order: Vec<usize> = (0..terms.len()).collect();
        order.sort_by(|&a, &b| {
            terms[b]
                .coefficient
                .abs()
                .total_cmp(&terms[a].coefficient.abs())
                .then_with(|| terms[a].pauli.cmp(&terms[b].pauli))
        });
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut unions: Vec<PauliString> = Vec::new();
        for idx in order {
            let p = terms[idx].pauli;
            let slot = unions
                .iter()
                .position(|u| u.qubitwise_compatible(&p).expect("same size"));
            match slot {
                Some(s) => {
                    let u = unions[s];
                    let support = p.support();
                    unions[s] = PauliString::from_masks(
                        u.n_qubits(),
                        u.x_mask() | (p.x_mask() & support),
                        u.z_mask() | (p.z_mask() & support),
                    )
                    .expect("same size");
                    sets[s].push(idx);
                }
                None => {
                    unions.push(p);
                    sets.push(vec![idx]);
                }
            }
        }
        let bases = unions
            .into_iter()
            .map(|u| {
                let mut b = u;
                for q in 0..u.n_qubits() {
                    if u.get(q) == Pauli::I {
                        b = b.with(q, Pauli::Z);
                    }
                }
                b
            })
            .collect();
        TpbGrouping { sets, bases }
    }

    /// One set per term (no grouping).
    pub fn singletons(h: &QubitHamiltonian) -> Self {
        let sets = (0..h.len()).map(|i| vec![i]).collect();
        let bases = h
            .terms()
            .iter()
            .map(|t| {
                let mut b = t.pauli;
                for q in 0..b.n_qubits() {
                    if b.get(q) == Pauli::I {
                        b = b.with(q, Pauli::Z);
                    }
                }
                b
            })
            .collect();
        TpbGrouping { sets, bases }
    }

    /// Number of sets `A`.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Size of the largest set, `s_max`.
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Checks the partition and diagonality invariants against `h`.
    pub fn validate(&self, h: &QubitHamiltonian) -> Result<()> {
        if self.sets.len() != self.bases.len() {
            return Err(Error::invalid("one basis per set required"));
        }
        let mut seen = vec![false; h.len()];
        for (set, basis) in self.sets.iter().zip(&self.bases) {
            if basis.n_qubits() != h.n_qubits() || basis.weight() != h.n_qubits() {
                return Err(Error::invalid(format!(
                    "basis {basis} must name every qubit"
                )));
            }
            for &i in set {
                let t = h
                    .terms()
                    .get(i)
                    .ok_or_else(|| Error::invalid(format!("term index {i} out of range")))?;
                if core::mem::replace(&mut seen[i], true) {
                    return Err(Error::invalid(format!("term {i} appears twice")));
                }
                if !t.pauli.qubitwise_compatible(basis)? {
                    return Err(Error::invalid(format!(
                        "term {} is not diagonal in basis {basis}",
                        t.pauli
                    )));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("term {i} is not grouped")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigvalsh;

    fn ham(n: usize, terms: &[(f64, &str)]) -> QubitHamiltonian {
        QubitHamiltonian::new(n, terms.iter().map(|(h, s)| (*h, s.parse().unwrap()))).unwrap()
    }

    #[test]
    fn construction_merges_and_prunes() {
        let h = ham(
            2,
            &[
                (0.5, "ZI"),
                (0.25, "ZI"),
                (1.0, "II"),
                (1e-14, "XX"),
                (0.1, "IZ"),
            ],
        );
        assert_eq!(h.len(), 2);
        assert_eq!(h.identity_shift(), 1.0);
        assert_eq!(h.terms()[1].coefficient, 0.75);
        assert!(QubitHamiltonian::new(2, [(1.0, "Z".parse().unwrap())]).is_err());
    }

    #[test]
    fn dense_matrices() {
        let m = ham(1, &[(1.0, "Z")]).to_matrix().unwrap();
        assert_eq!(m[(0, 0)].re, 1.0);
        assert_eq!(m[(1, 1)].re, -1.0);
        let m = ham(2, &[(0.5, "XX")]).to_matrix().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 0.5 } else { 0.0 };
                assert_eq!(m[(i, j)], Complex64::new(expect, 0.0));
            }
        }
        // big-endian: Z on qubit 0 flips sign on the upper half of the basis
        let m = ham(2, &[(1.0, "ZI")]).to_matrix().unwrap();
        assert_eq!(m[(1, 1)].re, 1.0);
        assert_eq!(m[(2, 2)].re, -1.0);
    }

    #[test]
    fn two_site_heisenberg_spectrum() {
        let h = ham(2, &[(1.0, "XX"), (1.0, "YY"), (1.0, "ZZ")]);
        let s = h.spectrum().unwrap();
        let expect = [-3.0, 1.0, 1.0, 1.0];
        for (a, b) in s.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((h.ground_energy().unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_limit_is_enforced() {
        let h = ham(3, &[(1.0, "ZZZ")]);
        assert!(matches!(
            h.to_matrix_limited(2),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn shift_moves_ground_energy() {
        let h = ham(2, &[(0.3, "XY"), (-0.7, "ZZ"), (0.2, "IX")]);
        let e = h.ground_energy().unwrap();
        let e2 = h.shifted(1.25).ground_energy().unwrap();
        assert!((e2 - e - 1.25).abs() < 1e-12);
    }

    #[test]
    fn text_round_trip() {
        let h = ham(2, &[(0.5, "ZX"), (-0.125, "YY"), (2.0, "II")]);
        let back = QubitHamiltonian::parse_text(&h.to_text()).unwrap();
        assert_eq!(h, back);
        let parsed =
            QubitHamiltonian::parse_text("# comment\n0.5\tZX\n\n1.0\tII # trailing\n").unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed.identity_shift(), 1.0);
        assert!(matches!(
            QubitHamiltonian::parse_text("0.5\tZX\n0.1\tZ\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(QubitHamiltonian::parse_text("abc\tZX\n").is_err());
    }

    #[test]
    fn all_z_terms_share_one_set() {
        let h = ham(2, &[(1.0, "ZI"), (0.5, "IZ"), (0.25, "ZZ")]);
        let g = h.group_tpb();
        assert_eq!(g.len(), 1);
        assert_eq!(g.bases[0].to_string(), "ZZ");
        g.validate(&h).unwrap();
    }

    #[test]
    fn grouping_orders_by_magnitude() {
        let h = ham(2, &[(0.1, "XI"), (1.0, "ZZ"), (0.5, "XX"), (0.3, "ZI")]);
        let g = h.group_tpb();
        g.validate(&h).unwrap();
        // ZZ opens set 0 and takes ZI; XX opens set 1 and takes XI
        assert_eq!(g.len(), 2);
        let names: Vec<Vec<String>> = g
            .sets
            .iter()
            .map(|s| s.iter().map(|&i| h.terms()[i].pauli.to_string()).collect())
            .collect();
        assert_eq!(names, vec![vec!["ZZ", "ZI"], vec!["XX", "XI"]]);
        assert_eq!(g, h.group_tpb());
    }

    #[test]
    fn pure_expectation_matches_trace() {
        let h = ham(2, &[(0.3, "XY"), (-0.7, "ZZ"), (0.2, "IX"), (0.4, "II")]);
        let psi = [
            Complex64::new(0.5, 0.1),
            Complex64::new(-0.2, 0.4),
            Complex64::new(0.3, -0.3),
            Complex64::new(0.1, 0.2),
        ];
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = psi.iter().map(|a| a / norm).collect();
        let m = h.to_matrix().unwrap();
        let v = nalgebra::DVector::from_column_slice(&psi);
        let dense = (v.adjoint() * &m * &v)[(0, 0)].re;
        assert!((h.expectation_pure(&psi).unwrap() - dense).abs() < 1e-12);
        assert!(eigvalsh(&m)[0] <= dense);
    }
}
