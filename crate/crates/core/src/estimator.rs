//! Exact and finite-shot energy estimation.
//!
//! Each TPB set gets one joint shot record. For every shot `b` and term `α`
//! in the set, the assignment-corrected single-shot value is
//! `v_α(b) = Π_{q ∈ supp α} (x_q − s_q)/g_q` with `x_q = ±1` the read bit,
//! `s_q = 1 − 2η0` and `g_q = 2η1`. Flips are independent per qubit, so
//! `v_α` is unbiased for `⟨P_α⟩`. The per-set energy `e(b) = Σ_α h_α v_α(b)`
//! has sample variance `Σ_{α,β} h_α h_β Cov(α, β)`, the within-set covariance
//! sum; sets are independent, so `Var[Ê] = Σ_sets Var(e)/S`.

use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::sim::{
    outcome_probabilities, outcome_probabilities_pure, sample_from_probabilities, DensityMatrix,
    ReadoutModel, ShotRecord, StateVector,
};
use crate::{Error, PauliString, QubitHamiltonian, Result, TpbGrouping};

/// A state that can be measured.
pub trait Measurable {
    fn n_qubits(&self) -> usize;
    /// Ideal outcome probabilities after the post-rotations of `basis`.
    fn probabilities_in(&self, basis: &PauliString) -> Result<Vec<f64>>;
    /// `⟨H⟩` without sampling.
    fn exact_energy(&self, h: &QubitHamiltonian) -> Result<f64>;
}

impl Measurable for DensityMatrix {
    fn n_qubits(&self) -> usize {
        DensityMatrix::n_qubits(self)
    }
    fn probabilities_in(&self, basis: &PauliString) -> Result<Vec<f64>> {
        outcome_probabilities(self, basis)
    }
    fn exact_energy(&self, h: &QubitHamiltonian) -> Result<f64> {
        self.energy(h)
    }
}

impl Measurable for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }
    fn probabilities_in(&self, basis: &PauliString) -> Result<Vec<f64>> {
        outcome_probabilities_pure(self, basis)
    }
    fn exact_energy(&self, h: &QubitHamiltonian) -> Result<f64> {
        self.energy(h)
    }
}

/// `tr(ρH)` (or `⟨ψ|H|ψ⟩`).
pub fn exact_energy<S: Measurable + ?Sized>(state: &S, h: &QubitHamiltonian) -> Result<f64> {
    state.exact_energy(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    pub value: f64,
    pub std_error: f64,
    pub shots_per_set: u64,
    pub n_sets: usize,
    /// Corrected `⟨P̂_α⟩`, indexed like `H.terms()`.
    pub term_means: Vec<f64>,
}

fn check_inputs(
    h: &QubitHamiltonian,
    grouping: &TpbGrouping,
    n_qubits: usize,
    shots: u64,
) -> Result<()> {
    if shots < 2 {
        return Err(Error::invalid(
            "at least two shots per set are needed for a variance estimate",
        ));
    }
    if h.n_qubits() != n_qubits {
        return Err(Error::Dimension {
            expected: n_qubits,
            found: h.n_qubits(),
        });
    }
    grouping.validate(h)
}

/// Finite-shot estimate of `⟨H⟩` with `shots` measurements per TPB set.
pub fn sampled_energy<S: Measurable + ?Sized>(
    state: &S,
    h: &QubitHamiltonian,
    grouping: &TpbGrouping,
    shots: u64,
    readout: &ReadoutModel,
    rng: &mut crate::Rng,
) -> Result<EnergyEstimate> {
    check_inputs(h, grouping, state.n_qubits(), shots)?;
    let records = grouping
        .bases
        .iter()
        .map(|basis| {
            let probs = state.probabilities_in(basis)?;
            sample_from_probabilities(probs, *basis, shots, readout, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    estimate_from_records(h, grouping, &records, readout)
}

/// Energy estimate from one shot record per TPB set.
pub fn estimate_from_records(
    h: &QubitHamiltonian,
    grouping: &TpbGrouping,
    records: &[ShotRecord],
    readout: &ReadoutModel,
) -> Result<EnergyEstimate> {
    if records.len() != grouping.len() {
        return Err(Error::Dimension {
            expected: grouping.len(),
            found: records.len(),
        });
    }
    let n = h.n_qubits();
    readout.validate(n)?;
    let affine: Vec<(f64, f64)> = (0..n).map(|q| readout.affine(q)).collect();
    let mut term_means = vec![0.0; h.len()];
    let mut variance = 0.0;
    let mut shots_per_set = u64::MAX;
    for ((set, basis), rec) in grouping.sets.iter().zip(&grouping.bases).zip(records) {
        if rec.basis != *basis {
            return Err(Error::invalid(format!(
                "shot record measured in {} but the set needs {basis}",
                rec.basis
            )));
        }
        let s = rec.shots;
        if s < 2 {
            return Err(Error::invalid(
                "at least two shots per set are needed for a variance estimate",
            ));
        }
        shots_per_set = shots_per_set.min(s);
        // per term: sum of v; per set: sums of e and e²
        let qubits: Vec<Vec<usize>> = set
            .iter()
            .map(|&alpha| {
                let mask = h.terms()[alpha].pauli.support();
                (0..n).filter(|q| mask >> q & 1 == 1).collect()
            })
            .collect();
        let mut sums = vec![0.0; set.len()];
        let (mut e_sum, mut e_sq) = (0.0, 0.0);
        for (b, count) in rec.iter() {
            let c = count as f64;
            let mut e = 0.0;
            for (k, &alpha) in set.iter().enumerate() {
                let mut v = 1.0;
                for &q in &qubits[k] {
                    let x = if b >> (n - 1 - q) & 1 == 0 { 1.0 } else { -1.0 };
                    let (sq, gq) = affine[q];
                    v *= (x - sq) / gq;
                }
                sums[k] += c * v;
                e += h.terms()[alpha].coefficient * v;
            }
            e_sum += c * e;
            e_sq += c * e * e;
        }
        let sf = s as f64;
        for (k, &alpha) in set.iter().enumerate() {
            term_means[alpha] = sums[k] / sf;
        }
        let mean = e_sum / sf;
        variance += ((e_sq - sf * mean * mean) / (sf - 1.0)).max(0.0) / sf;
    }
    let value = h.identity_shift()
        + h.terms()
            .iter()
            .zip(&term_means)
            .map(|(t, m)| t.coefficient * m)
            .sum::<f64>();
    Ok(EnergyEstimate {
        value,
        std_error: variance.sqrt(),
        shots_per_set: if records.is_empty() { 0 } else { shots_per_set },
        n_sets: grouping.len(),
        term_means,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBounds {
    /// `sqrt(T h_max² / S)`.
    pub ungrouped: f64,
    /// `sqrt((A/T) h_max² (T + A s_max²) / S)`, `s_max` the largest set size.
    pub grouped: f64,
}

/// Analytic upper bounds on the standard error of the mean energy.
pub fn error_bound(h: &QubitHamiltonian, grouping: &TpbGrouping, shots: u64) -> ErrorBounds {
    let t = h.len() as f64;
    let a = grouping.len() as f64;
    let s = shots as f64;
    let h2 = h.max_abs_coefficient().powi(2);
    let s_max = grouping.max_set_size() as f64;
    ErrorBounds {
        ungrouped: (t * h2 / s).sqrt(),
        grouped: if t == 0.0 {
            0.0
        } else {
            (a / t * h2 * (t + a * s_max * s_max) / s).sqrt()
        },
    }
}

/// Paired squared standard errors per random state, at equal total budget
/// `A·S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceComparison {
    /// `S` shots per TPB set.
    pub grouped: Vec<f64>,
    /// `S·A/T` shots per Pauli term, measured separately.
    pub ungrouped: Vec<f64>,
    pub shots_per_set: u64,
    pub shots_per_term: u64,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

impl VarianceComparison {
    pub fn grouped_median(&self) -> f64 {
        median(&self.grouped)
    }
    pub fn ungrouped_median(&self) -> f64 {
        median(&self.ungrouped)
    }
}

/// Grouped versus ungrouped estimator variance over `n_states` Haar-random
/// pure states.
pub fn variance_comparison_experiment(
    h: &QubitHamiltonian,
    n_states: usize,
    shots: u64,
    rng: &mut crate::Rng,
) -> Result<VarianceComparison> {
    if n_states == 0 {
        return Err(Error::invalid("need at least one state"));
    }
    if h.is_empty() {
        return Err(Error::invalid("Hamiltonian has no non-identity terms"));
    }
    let grouped = h.group_tpb();
    let singles = TpbGrouping::singletons(h);
    let per_term = ((shots * grouped.len() as u64) as f64 / h.len() as f64)
        .round()
        .max(2.0) as u64;
    let mut out = VarianceComparison {
        grouped: Vec::with_capacity(n_states),
        ungrouped: Vec::with_capacity(n_states),
        shots_per_set: shots,
        shots_per_term: per_term,
    };
    for _ in 0..n_states {
        let psi = StateVector::random(h.n_qubits(), rng)?;
        let g = sampled_energy(&psi, h, &grouped, shots, &ReadoutModel::Ideal, rng)?;
        let u = sampled_energy(&psi, h, &singles, per_term, &ReadoutModel::Ideal, rng)?;
        out.grouped.push(g.std_error * g.std_error);
        out.ungrouped.push(u.std_error * u.std_error);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::gates::ry;

    fn ham(n: usize, terms: &[(f64, &str)]) -> QubitHamiltonian {
        QubitHamiltonian::new(n, terms.iter().map(|&(c, s)| (c, s.parse().unwrap()))).unwrap()
    }

    #[test]
    fn exact_energy_trivial_cases() {
        let rho = DensityMatrix::new(1).unwrap();
        assert_eq!(exact_energy(&rho, &ham(1, &[(1.0, "Z")])).unwrap(), 1.0);
        assert!(exact_energy(&rho, &ham(1, &[(1.0, "X")])).unwrap().abs() < 1e-15);
        assert!(exact_energy(&rho, &ham(2, &[(1.0, "ZZ")])).is_err());
    }

    #[test]
    fn eigenstate_is_exact() {
        let h = ham(2, &[(0.5, "ZI"), (-0.3, "ZZ"), (0.2, "IZ"), (1.5, "II")]);
        let rho = DensityMatrix::new(2).unwrap();
        let g = h.group_tpb();
        let est = sampled_energy(
            &rho,
            &h,
            &g,
            100,
            &ReadoutModel::Ideal,
            &mut crate::rng_stream(0, 0),
        )
        .unwrap();
        assert!((est.value - 1.9).abs() < 1e-12);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.n_sets, 1);
        assert!(sampled_energy(
            &rho,
            &h,
            &g,
            1,
            &ReadoutModel::Ideal,
            &mut crate::rng_stream(0, 0)
        )
        .is_err());
    }

    #[test]
    fn plus_state_z_is_zero_within_statistics() {
        let mut rho = DensityMatrix::new(1).unwrap();
        rho.apply_1q(0, &ry(core::f64::consts::FRAC_PI_2)).unwrap();
        let h = ham(1, &[(1.0, "Z")]);
        let s = 10_000;
        let est = sampled_energy(
            &rho,
            &h,
            &h.group_tpb(),
            s,
            &ReadoutModel::Ideal,
            &mut crate::rng_stream(1, 0),
        )
        .unwrap();
        assert!(est.value.abs() < 5.0 / (s as f64).sqrt());
        assert!((est.std_error - 0.01).abs() < 1e-3);
    }

    #[test]
    fn product_state_covariance() {
        // |ψ⟩ = R_y(θ)|0⟩ ⊗ |0⟩, H = Z_0 + Z_0 Z_1: Z_1 = 1 so both terms equal
        // Z_0 shot by shot, Var(e) = 4 Var(Z_0) = 4 sin²θ
        let theta = 1.1f64;
        let mut rho = DensityMatrix::new(2).unwrap();
        rho.apply_1q(0, &ry(theta)).unwrap();
        let h = ham(2, &[(1.0, "ZI"), (1.0, "ZZ")]);
        let s = 200_000;
        let est = sampled_energy(
            &rho,
            &h,
            &h.group_tpb(),
            s,
            &ReadoutModel::Ideal,
            &mut crate::rng_stream(2, 0),
        )
        .unwrap();
        let expect = 4.0 * theta.sin().powi(2) / s as f64;
        assert!((est.std_error.powi(2) / expect - 1.0).abs() < 0.02);
        let singles = TpbGrouping::singletons(&h);
        let sep = sampled_energy(
            &rho,
            &h,
            &singles,
            s,
            &ReadoutModel::Ideal,
            &mut crate::rng_stream(2, 1),
        )
        .unwrap();
        assert!((sep.std_error.powi(2) / (expect / 2.0) - 1.0).abs() < 0.02);
    }

    #[test]
    fn assignment_correction_is_unbiased() {
        let psi = StateVector::random(3, &mut crate::rng_stream(7, 0)).unwrap();
        let h = ham(
            3,
            &[(0.7, "ZZI"), (-0.4, "XIX"), (0.3, "YYZ"), (0.2, "IIZ")],
        );
        let readout = ReadoutModel::PerQubit {
            eta: vec![(0.48, 0.45), (0.5, 0.44), (0.53, 0.46)],
        };
        let exact = exact_energy(&psi, &h).unwrap();
        let est = sampled_energy(
            &psi,
            &h,
            &h.group_tpb(),
            400_000,
            &readout,
            &mut crate::rng_stream(7, 1),
        )
        .unwrap();
        assert!(
            (est.value - exact).abs() < 5.0 * est.std_error,
            "{} vs {exact}",
            est.value
        );
    }

    #[test]
    fn error_bound_formulas() {
        let h = ham(1, &[(0.8, "Z")]);
        let b = error_bound(&h, &h.group_tpb(), 100);
        assert!((b.ungrouped - 0.08).abs() < 1e-15);
        assert!((b.grouped - 0.08 * 2f64.sqrt()).abs() < 1e-15);
        let b4 = error_bound(&h, &h.group_tpb(), 400);
        assert!((b4.ungrouped * 2.0 - b.ungrouped).abs() < 1e-15);
        assert!((b4.grouped * 2.0 - b.grouped).abs() < 1e-15);
    }

    #[test]
    fn grouping_helps_on_commuting_terms() {
        let h = ham(2, &[(0.5, "ZI"), (0.4, "IZ"), (0.3, "ZZ"), (0.2, "XX")]);
        let cmp =
            variance_comparison_experiment(&h, 200, 1000, &mut crate::rng_stream(5, 0)).unwrap();
        assert_eq!(cmp.shots_per_term, 500);
        assert!(cmp.grouped_median() <= cmp.ungrouped_median());
    }
}
