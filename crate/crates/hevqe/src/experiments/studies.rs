//! Depth search, entangler-phase, noise and sampling scaling, sweeps.

use std::collections::BTreeMap;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use hevqe_core::ansatz::EntanglerTemplate;
use hevqe_core::sim::gates::ry;
use hevqe_core::sim::{concurrence, pair_unitary, DensityMatrix, NoiseModel};
use hevqe_core::spsa::SpsaConfig;

use super::pipeline::{measure_epsilon, vqe_pipeline, PipelineSettings, Problem};
use super::{PointResult, Series};
use crate::config::SamplingMode;

/// `spsa` with as many updates as fit into `budget` objective calls.
pub fn with_budget(spsa: &SpsaConfig, budget: usize) -> SpsaConfig {
    let mut s = spsa.clone();
    s.max_updates = s.updates_for_budget(budget).max(1);
    s.averaging_window = s.averaging_window.min(s.max_updates);
    s
}

fn at_depth(settings: &PipelineSettings, depth: usize) -> PipelineSettings {
    let mut s = settings.clone();
    s.ansatz.depth = depth;
    s
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthSearchOutcome {
    /// Smallest depth meeting the threshold; `None` if none up to `d_max` does.
    pub critical_depth: Option<usize>,
    pub threshold: f64,
    pub budget: usize,
    pub scanned: Vec<usize>,
}

/// Scan `d = d_min..=d_max` and stop at the first depth whose mean final
/// error over `settings.runs` runs is at most `threshold`.
#[allow(clippy::too_many_arguments)]
pub fn critical_depth_search(
    problem: &Problem,
    settings: &PipelineSettings,
    d_min: usize,
    d_max: usize,
    budget: usize,
    threshold: f64,
    master_seed: u64,
    scenario: &str,
) -> (Vec<PointResult>, DepthSearchOutcome) {
    let mut base = settings.clone();
    base.spsa = with_budget(&settings.spsa, budget);
    let mut points = Vec::new();
    let mut found = None;
    for d in d_min..=d_max {
        let p = vqe_pipeline(
            problem,
            &at_depth(&base, d),
            master_seed,
            scenario,
            d,
            format!("d={d}"),
            params(&[("depth", d as f64)]),
        );
        let ok = p.failures.is_empty() && p.mean_error() <= threshold;
        points.push(p);
        if ok {
            found = Some(d);
            break;
        }
    }
    let scanned = points
        .iter()
        .map(|p| p.parameters["depth"] as usize)
        .collect();
    (
        points,
        DepthSearchOutcome {
            critical_depth: found,
            threshold,
            budget,
            scanned,
        },
    )
}

/// Concurrence of the two-qubit entangler applied to `(|00⟩ + |10⟩)/√2`.
pub fn entangler_concurrence(template: &EntanglerTemplate) -> Result<f64> {
    let mut rho = DensityMatrix::new(2)?;
    rho.apply_1q(0, &ry(std::f64::consts::FRAC_PI_2))?;
    rho.apply_2q(0, 1, &pair_unitary(&template.terms()))?;
    Ok(concurrence(&rho)?)
}

/// Mean error per `(depth, phase)` with the entangler fixed at each phase,
/// plus the concurrence curve of the gate.
pub fn entangler_phase_study(
    problem: &Problem,
    settings: &PipelineSettings,
    depths: &[usize],
    phases: &[f64],
    master_seed: u64,
    scenario: &str,
) -> Result<(Vec<PointResult>, Vec<Series>)> {
    let mut points = Vec::new();
    let mut series = Vec::new();
    for &d in depths {
        let mut y = Vec::new();
        for &phi in phases {
            let mut s = at_depth(settings, d);
            s.ansatz.entangler = settings.ansatz.entangler.with_phase(phi);
            let p = vqe_pipeline(
                problem,
                &s,
                master_seed,
                scenario,
                points.len(),
                format!("d={d} phase={phi}"),
                params(&[("depth", d as f64), ("phase", phi)]),
            );
            y.push(p.mean_error());
            points.push(p);
        }
        series.push(Series {
            name: format!("mean_error d={d}"),
            x: phases.to_vec(),
            y,
        });
    }
    let c = phases
        .iter()
        .map(|&phi| entangler_concurrence(&settings.ansatz.entangler.with_phase(phi)))
        .collect::<Result<Vec<_>>>()?;
    series.push(Series {
        name: "concurrence".into(),
        x: phases.to_vec(),
        y: c,
    });
    Ok((points, series))
}

/// Mean error per `(depth, ξ)` with depolarizing noise and the exact
/// noisy objective.
pub fn noise_scaling_study(
    problem: &Problem,
    settings: &PipelineSettings,
    depths: &[usize],
    xi: &[f64],
    master_seed: u64,
    scenario: &str,
) -> (Vec<PointResult>, Vec<Series>) {
    let mut points = Vec::new();
    let mut series = Vec::new();
    for &d in depths {
        let mut y = Vec::new();
        for &x in xi {
            let mut s = at_depth(settings, d);
            s.noise = if x == 0.0 {
                NoiseModel::None
            } else {
                NoiseModel::Depolarizing { xi: x }
            };
            s.sampling.mode = SamplingMode::Exact;
            let p = vqe_pipeline(
                problem,
                &s,
                master_seed,
                scenario,
                points.len(),
                format!("d={d} xi={x}"),
                params(&[("depth", d as f64), ("xi", x)]),
            );
            y.push(p.mean_error());
            points.push(p);
        }
        series.push(Series {
            name: format!("mean_error d={d}"),
            x: xi.to_vec(),
            y,
        });
    }
    (points, series)
}

/// Surrogate sampling study: measure `ε_A` at 10³ shots (unless given), then
/// optimize with Gaussian noise of width `ε_A sqrt(10³/S)` for each `S`.
/// Returns the points, the error-vs-S curve and `ε_A`. An infinite `S`
/// point carries no `shots` parameter.
#[allow(clippy::too_many_arguments)]
pub fn sampling_scaling_study(
    problem: &Problem,
    settings: &PipelineSettings,
    depth: usize,
    shots: &[f64],
    epsilon_states: usize,
    master_seed: u64,
    scenario: &str,
) -> Result<(Vec<PointResult>, Series, f64)> {
    let eps = match settings.sampling.surrogate_epsilon {
        Some(e) => e,
        None => measure_epsilon(
            problem,
            settings.sampling.grouped,
            epsilon_states,
            1000,
            &settings.readout,
            master_seed,
        )?,
    };
    let mut points = Vec::new();
    let mut y = Vec::new();
    for &s_count in shots {
        let mut s = at_depth(settings, depth);
        s.sampling.mode = SamplingMode::Surrogate;
        s.sampling.surrogate_epsilon = Some(eps);
        s.surrogate_shots = Some(s_count);
        let p = vqe_pipeline(
            problem,
            &s,
            master_seed,
            scenario,
            points.len(),
            format!("S={s_count}"),
            if s_count.is_finite() {
                params(&[("depth", depth as f64), ("shots", s_count)])
            } else {
                params(&[("depth", depth as f64)])
            },
        );
        y.push(p.mean_error());
        points.push(p);
    }
    let series = Series {
        name: format!("mean_error d={depth}"),
        x: shots.to_vec(),
        y,
    };
    Ok((points, series, eps))
}

/// One sweep point: a Hamiltonian and the parameter it was built for.
pub struct SweepInput {
    pub label: String,
    pub parameter: (String, f64),
    pub problem: Problem,
}

/// `vqe_pipeline` at every point and depth. Series hold the exact reference
/// surface and the mean and median optimized energies per depth.
pub fn dissociation_sweep(
    inputs: &[SweepInput],
    settings: &PipelineSettings,
    depths: &[usize],
    master_seed: u64,
    scenario: &str,
) -> (Vec<PointResult>, Vec<Series>) {
    let mut points = Vec::new();
    let x: Vec<f64> = inputs.iter().map(|i| i.parameter.1).collect();
    let mut series = vec![Series {
        name: "reference".into(),
        x: x.clone(),
        y: inputs.iter().map(|i| i.problem.reference).collect(),
    }];
    for &d in depths {
        let mut median = Vec::new();
        let mut mean_err = Vec::new();
        for input in inputs {
            let mut s = at_depth(settings, d);
            s.ansatz.n_qubits = input.problem.n_qubits();
            let p = vqe_pipeline(
                &input.problem,
                &s,
                master_seed,
                scenario,
                points.len(),
                format!("{} d={d}", input.label),
                params(&[
                    (input.parameter.0.as_str(), input.parameter.1),
                    ("depth", d as f64),
                ]),
            );
            median.push(p.stats.energy.p50);
            mean_err.push(p.mean_error());
            points.push(p);
        }
        series.push(Series {
            name: format!("median_energy d={d}"),
            x: x.clone(),
            y: median,
        });
        series.push(Series {
            name: format!("mean_error d={d}"),
            x: x.clone(),
            y: mean_err,
        });
    }
    (points, series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hevqe_core::ansatz::{AnsatzConfig, Topology};
    use hevqe_core::{Pauli, PauliString, QubitHamiltonian};

    fn separable() -> Problem {
        let id = PauliString::identity(2).unwrap();
        let h = QubitHamiltonian::new(
            2,
            [(0.5, id.with(0, Pauli::Z)), (-0.3, id.with(1, Pauli::X))],
        )
        .unwrap();
        Problem::new("sep", h).unwrap()
    }

    fn settings() -> PipelineSettings {
        let ansatz = AnsatzConfig {
            n_qubits: 2,
            depth: 0,
            topology: Topology::Experimental2q,
            entangler: EntanglerTemplate::IdealZx {
                phase: std::f64::consts::FRAC_PI_2,
            },
            variant: Default::default(),
        };
        PipelineSettings::exact(ansatz, SpsaConfig::new(0.1, 100), 3)
    }

    #[test]
    fn separable_hamiltonian_has_depth_zero() {
        let (points, out) = critical_depth_search(
            &separable(),
            &settings(),
            0,
            2,
            600,
            1.6e-3,
            1,
            "depth-search",
        );
        assert_eq!(out.critical_depth, Some(0));
        assert_eq!(points.len(), 1);
        assert_eq!(out.scanned, vec![0]);
    }

    #[test]
    fn impossible_threshold_is_not_found() {
        let (points, out) = critical_depth_search(
            &separable(),
            &settings(),
            0,
            1,
            200,
            -1.0,
            1,
            "depth-search",
        );
        assert_eq!(out.critical_depth, None);
        assert_eq!(points.len(), 2);
    }

    #[test]
    fn concurrence_curve() {
        let zx = EntanglerTemplate::IdealZx { phase: 0.0 };
        assert!(entangler_concurrence(&zx).unwrap() < 1e-6);
        let c = entangler_concurrence(&zx.with_phase(std::f64::consts::FRAC_PI_2)).unwrap();
        assert!((c - 1.0).abs() < 1e-6, "{c}");
        let c = entangler_concurrence(&zx.with_phase(std::f64::consts::FRAC_PI_4)).unwrap();
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6, "{c}");
    }

    #[test]
    fn full_depolarization_gives_mixed_state_energy() {
        let p = separable();
        let mut s = settings();
        s.spsa = SpsaConfig::new(0.1, 20);
        s.ansatz.depth = 1;
        let (points, series) = noise_scaling_study(&p, &s, &[1], &[0.75], 0, "noise-scaling");
        let expect = p.hamiltonian.mixed_state_energy() - p.reference;
        for r in &points[0].runs {
            assert!((r.error - expect).abs() < 1e-9, "{} {expect}", r.error);
        }
        assert_eq!(series.len(), 1);
    }

    #[test]
    fn infinite_shots_match_exact_objective() {
        let p = separable();
        let mut s = settings();
        s.sampling.surrogate_epsilon = Some(0.05);
        let (pts, series, eps) =
            sampling_scaling_study(&p, &s, 0, &[f64::INFINITY], 5, 4, "sampling-scaling").unwrap();
        assert_eq!(eps, 0.05);
        let exact = vqe_pipeline(
            &p,
            &s,
            4,
            "sampling-scaling",
            0,
            "S=inf",
            pts[0].parameters.clone(),
        );
        let a: Vec<f64> = pts[0].runs.iter().map(|r| r.energy).collect();
        let b: Vec<f64> = exact.runs.iter().map(|r| r.energy).collect();
        assert_eq!(a, b);
        assert_eq!(series.y.len(), 1);
    }
}
