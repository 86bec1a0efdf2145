use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gradient::{finite_difference_gradient, loss_gradient};
use super::TrainingSample;
use crate::error::{invalid, Error, Result};
use crate::quantum::{propagate, HamiltonianParams, IntegrationConfig};
use crate::schedule::SampledSchedule;

/// Step size along the function-space gradient (GHz² per unit loss
/// derivative, per ns). Suits the entanglement indicator; larger steps
/// overshoot and break the A/B symmetry of the trained schedule.
pub const DEFAULT_LEARNING_RATE: f64 = 3e-5;

/// Step size for the phase indicator, whose projection read-out has a
/// gentler loss surface.
pub const PHASE_LEARNING_RATE: f64 = 3e-4;

/// RMS growth over the starting value that aborts training.
const DIVERGENCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateMode {
    /// Update after every sample, in order.
    #[default]
    Online,
    /// Sum the gradients of all samples, then update once per epoch.
    Batch,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum GradientMethod {
    #[default]
    Adjoint,
    FiniteDifference {
        delta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub rms_stop: f64,
    pub mode: UpdateMode,
    pub gradient: GradientMethod,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            learning_rate: DEFAULT_LEARNING_RATE,
            max_epochs: 5000,
            rms_stop: 1e-4,
            mode: UpdateMode::Online,
            gradient: GradientMethod::Adjoint,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(invalid(format!("learning rate must be positive, got {}", self.learning_rate)));
        }
        if self.rms_stop.is_nan() || self.rms_stop <= 0.0 {
            return Err(invalid(format!("rms_stop must be positive, got {}", self.rms_stop)));
        }
        if let GradientMethod::FiniteDifference { delta } = self.gradient {
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(invalid(format!("finite-difference step must be positive, got {delta}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub target: f64,
    pub output: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainingReport {
    /// RMS before training, then after each epoch.
    pub rms_history: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
    pub initial_learning_rate: f64,
    pub final_learning_rate: f64,
    pub outputs: Vec<SampleOutcome>,
    pub config: TrainingConfig,
    pub integration: IntegrationConfig,
    pub schedule: SampledSchedule,
}

impl TrainingReport {
    pub fn final_rms(&self) -> f64 {
        *self.rms_history.last().expect("history starts with the initial RMS")
    }
}

fn outcomes(
    samples: &[TrainingSample],
    schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
) -> Result<Vec<SampleOutcome>> {
    samples
        .par_iter()
        .map(|s| {
            let rho = propagate(&s.input, schedule, cfg)?;
            Ok(SampleOutcome { target: s.target, output: s.functional.evaluate(&rho) })
        })
        .collect()
}

fn rms(outcomes: &[SampleOutcome]) -> f64 {
    let sum: f64 = outcomes.iter().map(|o| (o.target - o.output).powi(2)).sum();
    (sum / outcomes.len() as f64).sqrt()
}

fn sample_gradient(
    sample: &TrainingSample,
    schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
    method: GradientMethod,
) -> Result<Vec<HamiltonianParams>> {
    match method {
        GradientMethod::Adjoint => Ok(loss_gradient(sample, schedule, cfg)?.grad),
        GradientMethod::FiniteDifference { delta } => finite_difference_gradient(sample, schedule, cfg, delta),
    }
}

fn ensure_finite(schedule: &SampledSchedule, lr: f64) -> Result<()> {
    if schedule.values.iter().all(HamiltonianParams::is_finite) {
        Ok(())
    } else {
        Err(Error::Diverged(format!("schedule became non-finite (learning rate {lr:.3e})")))
    }
}

/// Quadrature weight of each schedule sample in one RK4 sweep: `dt/6` at
/// the two ends, `dt/3` at interior step boundaries (shared by two steps)
/// and `2dt/3` at midpoints (used by two stages).
pub fn quadrature_weights(cfg: &IntegrationConfig) -> Vec<f64> {
    let n = cfg.n_samples();
    (0..n)
        .map(|k| match k {
            0 => cfg.dt / 6.0,
            k if k + 1 == n => cfg.dt / 6.0,
            k if k % 2 == 1 => 2.0 * cfg.dt / 3.0,
            _ => cfg.dt / 3.0,
        })
        .collect()
}

/// Steps against the sample gradient divided by the quadrature weights,
/// i.e. along the function-space gradient. The raw gradient would move
/// midpoint samples twice as fast as their neighbours and leave a sawtooth
/// in the schedule.
fn descend(schedule: &mut SampledSchedule, grad: &[HamiltonianParams], weights: &[f64], lr: f64) -> Result<()> {
    for ((v, g), w) in schedule.values.iter_mut().zip(grad).zip(weights) {
        *v = v.add_scaled(-lr / w, g);
    }
    ensure_finite(schedule, lr)
}

fn run_epoch(
    samples: &[TrainingSample],
    schedule: &mut SampledSchedule,
    cfg: &IntegrationConfig,
    tcfg: &TrainingConfig,
    lr: f64,
) -> Result<()> {
    let weights = quadrature_weights(cfg);
    match tcfg.mode {
        UpdateMode::Online => {
            for s in samples {
                let g = sample_gradient(s, schedule, cfg, tcfg.gradient)?;
                descend(schedule, &g, &weights, lr)?;
            }
        }
        UpdateMode::Batch => {
            let grads: Vec<Vec<HamiltonianParams>> =
                samples.par_iter().map(|s| sample_gradient(s, schedule, cfg, tcfg.gradient)).collect::<Result<_>>()?;
            let mut total = vec![HamiltonianParams::default(); cfg.n_samples()];
            for g in &grads {
                for (t, v) in total.iter_mut().zip(g) {
                    *t = t.add_scaled(1.0, v);
                }
            }
            descend(schedule, &total, &weights, lr)?;
        }
    }
    Ok(())
}

/// Gradient descent on every schedule sample.
///
/// One epoch is one pass over `samples`. The RMS is measured before the
/// first epoch and after each one; training stops once it reaches
/// `rms_stop`. The learning rate is halved whenever an epoch increases the
/// RMS, and training aborts with [`Error::Diverged`] if the RMS grows past
/// ten times its starting value.
pub fn train(
    samples: &[TrainingSample],
    init: &SampledSchedule,
    tcfg: &TrainingConfig,
    cfg: &IntegrationConfig,
) -> Result<TrainingReport> {
    if samples.is_empty() {
        return Err(invalid("training needs at least one sample"));
    }
    tcfg.validate()?;
    cfg.validate()?;
    init.check_grid(cfg)?;
    for s in samples {
        s.functional.validate()?;
    }

    let mut schedule = init.clone();
    schedule.values.truncate(cfg.n_samples());
    let mut lr = tcfg.learning_rate;
    let mut current = outcomes(samples, &schedule, cfg)?;
    let initial = rms(&current);
    let mut history = vec![initial];
    info!("training {} samples, initial RMS {initial:.3e}", samples.len());

    while *history.last().unwrap() > tcfg.rms_stop && history.len() <= tcfg.max_epochs {
        run_epoch(samples, &mut schedule, cfg, tcfg, lr)?;
        current = outcomes(samples, &schedule, cfg)?;
        let value = rms(&current);
        let previous = *history.last().unwrap();
        history.push(value);
        let epoch = history.len() - 1;
        if !value.is_finite() || value > DIVERGENCE_FACTOR * initial {
            return Err(Error::Diverged(format!(
                "RMS {value:.3e} at epoch {epoch} exceeds {DIVERGENCE_FACTOR}x the initial {initial:.3e} (learning rate {lr:.3e})"
            )));
        }
        if value > previous {
            lr *= 0.5;
            debug!("epoch {epoch}: RMS rose to {value:.3e}, learning rate now {lr:.3e}");
        } else if epoch % 10 == 0 {
            debug!("epoch {epoch}: RMS {value:.3e}");
        }
    }

    let final_rms = *history.last().unwrap();
    let converged = final_rms <= tcfg.rms_stop;
    info!("finished after {} epochs, RMS {final_rms:.3e}, converged: {converged}", history.len() - 1);
    Ok(TrainingReport {
        epochs: history.len() - 1,
        rms_history: history,
        converged,
        initial_learning_rate: tcfg.learning_rate,
        final_learning_rate: lr,
        outputs: current,
        config: *tcfg,
        integration: *cfg,
        schedule,
    })
}
