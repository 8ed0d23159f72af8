//! Simultaneous perturbation stochastic approximation.
//!
//! Gains `c_k = c / k^γ`, `a_k = a / k^α`. Each update draws a Bernoulli ±1
//! direction `Δ_k`, evaluates the objective at `θ_k ± c_k Δ_k` and steps
//! `θ_{k+1} = θ_k − a_k (E⁺ − E⁻)/(2 c_k) Δ_k`. The objective is never
//! evaluated at `θ_k` itself. The returned angles are the mean of the last
//! `window` perturbed pairs (`2·window` vectors), unwrapped.

use core::f64::consts::PI;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::prelude::*;
use crate::{Error, Result};

/// One objective value with its statistical uncertainty (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub std_error: f64,
}

impl Evaluation {
    pub fn exact(value: f64) -> Self {
        Evaluation {
            value,
            std_error: 0.0,
        }
    }
}

/// A black-box, possibly stochastic, objective.
pub trait Objective {
    fn evaluate(&mut self, theta: &[f64], rng: &mut crate::Rng) -> Result<Evaluation>;
}

impl<F> Objective for F
where
    F: FnMut(&[f64], &mut crate::Rng) -> Result<Evaluation>,
{
    fn evaluate(&mut self, theta: &[f64], rng: &mut crate::Rng) -> Result<Evaluation> {
        self(theta, rng)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpsaConfig {
    #[serde(default = "default_c")]
    pub c: f64,
    /// Step scale; calibrated from the objective when `None`.
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Number of updates `k_L`.
    #[serde(default = "default_updates")]
    pub max_updates: usize,
    /// Number of final `(θ⁺, θ⁻)` pairs averaged.
    #[serde(default = "default_window")]
    pub averaging_window: usize,
    #[serde(default = "default_window")]
    pub calibration_samples: usize,
    #[serde(default = "default_first_step")]
    pub target_first_step: f64,
    /// Store `θ_k` in every trace entry.
    #[serde(default)]
    pub record_theta: bool,
}

fn default_c() -> f64 {
    0.1
}
fn default_updates() -> usize {
    250
}
fn default_alpha() -> f64 {
    0.602
}
fn default_gamma() -> f64 {
    0.101
}
fn default_window() -> usize {
    25
}
fn default_first_step() -> f64 {
    2.0 * PI / 10.0
}

impl Default for SpsaConfig {
    fn default() -> Self {
        SpsaConfig::new(default_c(), default_updates())
    }
}

impl SpsaConfig {
    pub fn new(c: f64, max_updates: usize) -> Self {
        SpsaConfig {
            c,
            a: None,
            alpha: default_alpha(),
            gamma: default_gamma(),
            max_updates,
            averaging_window: default_window(),
            calibration_samples: default_window(),
            target_first_step: default_first_step(),
            record_theta: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::invalid(format!("spsa: {m}")));
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad("c must be positive");
        }
        if let Some(a) = self.a {
            if !(a > 0.0 && a.is_finite()) {
                return bad("a must be positive");
            }
        }
        if self.max_updates == 0 {
            return bad("max_updates must be at least 1");
        }
        if self.averaging_window == 0 || self.averaging_window > self.max_updates {
            return bad("averaging_window must be in 1..=max_updates");
        }
        if self.a.is_none() && self.calibration_samples == 0 {
            return bad("calibration needs at least one sample");
        }
        if !(self.alpha > 0.0 && self.gamma > 0.0) {
            return bad("gain exponents must be positive");
        }
        Ok(())
    }

    pub fn c_k(&self, k: usize) -> f64 {
        self.c / (k as f64).powf(self.gamma)
    }

    pub fn a_k(&self, a: f64, k: usize) -> f64 {
        a / (k as f64).powf(self.alpha)
    }

    /// Number of objective calls made by [`run`], final evaluation excluded.
    pub fn function_calls(&self) -> usize {
        2 * self.max_updates
            + if self.a.is_none() {
                2 * self.calibration_samples
            } else {
                0
            }
    }

    /// Largest `k_L` whose [`run`] fits within `budget` objective calls.
    pub fn updates_for_budget(&self, budget: usize) -> usize {
        let cal = if self.a.is_none() {
            2 * self.calibration_samples
        } else {
            0
        };
        budget.saturating_sub(cal) / 2
    }
}

fn bernoulli(p: usize, rng: &mut crate::Rng) -> Vec<f64> {
    (0..p)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

fn shifted(theta: &[f64], delta: &[f64], step: f64) -> Vec<f64> {
    theta.iter().zip(delta).map(|(t, d)| t + step * d).collect()
}

/// `a = target_first_step · 2c / mean_Δ |E(θ + cΔ) − E(θ − cΔ)|`.
pub fn calibrate_a<O: Objective + ?Sized>(
    objective: &mut O,
    theta: &[f64],
    config: &SpsaConfig,
    rng: &mut crate::Rng,
) -> Result<f64> {
    if config.calibration_samples == 0 {
        return Err(Error::invalid("calibration needs at least one sample"));
    }
    let mut total = 0.0;
    for _ in 0..config.calibration_samples {
        let delta = bernoulli(theta.len(), rng);
        let plus = objective.evaluate(&shifted(theta, &delta, config.c), rng)?;
        let minus = objective.evaluate(&shifted(theta, &delta, -config.c), rng)?;
        total += (plus.value - minus.value).abs();
    }
    let mean = total / config.calibration_samples as f64;
    if mean.is_nan() || mean < 1e-12 {
        return Err(Error::FlatLandscape(mean));
    }
    Ok(config.target_first_step * 2.0 * config.c / mean)
}

/// One update.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub theta_next: Vec<f64>,
    pub theta_plus: Vec<f64>,
    pub theta_minus: Vec<f64>,
    pub plus: Evaluation,
    pub minus: Evaluation,
    pub gradient: Vec<f64>,
}

/// Update `k ≥ 1` from `theta` with step scale `a`.
pub fn spsa_iterate<O: Objective + ?Sized>(
    objective: &mut O,
    theta: &[f64],
    k: usize,
    a: f64,
    config: &SpsaConfig,
    rng: &mut crate::Rng,
) -> Result<Step> {
    if k == 0 {
        return Err(Error::invalid("spsa iterations are numbered from 1"));
    }
    let delta = bernoulli(theta.len(), rng);
    spsa_iterate_with(objective, theta, k, a, config, &delta, rng)
}

/// [`spsa_iterate`] with an explicit direction `delta`.
pub fn spsa_iterate_with<O: Objective + ?Sized>(
    objective: &mut O,
    theta: &[f64],
    k: usize,
    a: f64,
    config: &SpsaConfig,
    delta: &[f64],
    rng: &mut crate::Rng,
) -> Result<Step> {
    if delta.len() != theta.len() {
        return Err(Error::Dimension {
            expected: theta.len(),
            found: delta.len(),
        });
    }
    let ck = config.c_k(k);
    let ak = config.a_k(a, k);
    let theta_plus = shifted(theta, delta, ck);
    let theta_minus = shifted(theta, delta, -ck);
    let plus = objective.evaluate(&theta_plus, rng)?;
    let minus = objective.evaluate(&theta_minus, rng)?;
    let scale = (plus.value - minus.value) / (2.0 * ck);
    let gradient: Vec<f64> = delta.iter().map(|d| scale * d).collect();
    let theta_next = theta
        .iter()
        .zip(&gradient)
        .map(|(t, g)| t - ak * g)
        .collect();
    Ok(Step {
        theta_next,
        theta_plus,
        theta_minus,
        plus,
        minus,
        gradient,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub theta_plus_energy: f64,
    pub theta_minus_energy: f64,
    pub std_plus: f64,
    pub std_minus: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub a: f64,
    pub c: f64,
    pub iterations: Vec<IterationRecord>,
    pub theta_final: Vec<f64>,
    #[serde(rename = "E_f")]
    pub final_energy: f64,
    #[serde(rename = "E_f_std")]
    pub final_std_error: f64,
    /// Shots per set of the final estimate; `None` for an exact evaluation.
    #[serde(rename = "S_f")]
    pub final_shots: Option<u64>,
    /// Objective calls, final evaluation excluded.
    pub function_calls: usize,
    /// Seconds; left empty by the core loop.
    #[serde(default)]
    pub wall_time: Option<f64>,
}

/// Full optimization: optional calibration, `k_L` updates, window average and
/// one final evaluation.
pub fn run<O: Objective + ?Sized, F: Objective + ?Sized>(
    objective: &mut O,
    theta1: &[f64],
    config: &SpsaConfig,
    final_objective: &mut F,
    final_shots: Option<u64>,
    rng: &mut crate::Rng,
) -> Result<OptimizationTrace> {
    config.validate()?;
    if theta1.is_empty() {
        return Err(Error::invalid("no parameters to optimize"));
    }
    let mut calls = 0;
    let a = match config.a {
        Some(a) => a,
        None => {
            calls += 2 * config.calibration_samples;
            calibrate_a(objective, theta1, config, rng)?
        }
    };
    let p = theta1.len();
    let mut theta = theta1.to_vec();
    let mut iterations = Vec::with_capacity(config.max_updates);
    let mut avg = vec![0.0; p];
    let first_averaged = config.max_updates - config.averaging_window + 1;
    for k in 1..=config.max_updates {
        let step = spsa_iterate(objective, &theta, k, a, config, rng)?;
        calls += 2;
        if k >= first_averaged {
            for i in 0..p {
                avg[i] += step.theta_plus[i] + step.theta_minus[i];
            }
        }
        iterations.push(IterationRecord {
            k,
            theta_plus_energy: step.plus.value,
            theta_minus_energy: step.minus.value,
            std_plus: step.plus.std_error,
            std_minus: step.minus.std_error,
            theta: config.record_theta.then(|| theta.clone()),
        });
        theta = step.theta_next;
    }
    let n = 2.0 * config.averaging_window as f64;
    let theta_final: Vec<f64> = avg.into_iter().map(|s| s / n).collect();
    let fin = final_objective.evaluate(&theta_final, rng)?;
    Ok(OptimizationTrace {
        a,
        c: config.c,
        iterations,
        theta_final,
        final_energy: fin.value,
        final_std_error: fin.std_error,
        final_shots,
        function_calls: calls,
        wall_time: None,
    })
}
