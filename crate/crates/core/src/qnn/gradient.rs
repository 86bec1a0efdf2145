//! Gradient of the squared output error with respect to every schedule
//! sample.
//!
//! The forward pass stores `ρ` at each step boundary. The costate `Λ` starts
//! at `∂L/∂ρ(t_f)` and is carried backward through the exact adjoint of each
//! RK4 step (the same commutator generator with reversed sign). Along the
//! way, each stage contributes `s·Im tr(G_p (y g† − g† y))` to the parameter
//! samples it used, where `y` is the stage input, `g` the stage-slope
//! cotangent and `G_p = ∂H/∂p`. The result is the derivative of the
//! discretized propagation, so it agrees with finite differences to rounding.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{OutputFunctional, TrainingSample};
use crate::error::{invalid, Result};
use crate::quantum::{
    commutator_rhs, generator_traces, propagate, trajectory_with, HamiltonianParams, IntegrationConfig, Matrix4c, Param,
};
use crate::schedule::SampledSchedule;

/// Output, loss and the per-sample gradient `∂(target − output)²/∂p_k(t)`.
#[derive(Debug, Clone)]
pub struct LossGradient {
    pub output: f64,
    pub loss: f64,
    /// One entry per schedule sample (substep time).
    pub grad: Vec<HamiltonianParams>,
}

fn accumulate(slot: &mut HamiltonianParams, y: &Matrix4c, g: &Matrix4c, scale: f64) {
    let gd = g.adjoint();
    let x = y * gd - gd * y;
    let tr = generator_traces(&x);
    for p in Param::ALL {
        *slot.get_mut(p) += scale * tr[p.index()].im;
    }
}

/// Adjoint sweep on prebuilt Hamiltonians. `on_costate(j, Λ_j)` sees the
/// costate at every step boundary, last step first.
pub(crate) fn adjoint_sweep(
    rho0: Matrix4c,
    hams: &[Matrix4c],
    cfg: &IntegrationConfig,
    functional: OutputFunctional,
    target: f64,
    mut on_costate: impl FnMut(usize, &Matrix4c, &Matrix4c),
) -> LossGradient {
    let n = cfg.n_steps();
    let (dt, s) = (cfg.dt, cfg.angular_scale);
    let traj = trajectory_with(rho0, hams, cfg);
    let (output, mut lambda) = functional.loss_seed(&traj.states[n], target);
    let loss = (target - output).powi(2);
    let mut grad = vec![HamiltonianParams::default(); cfg.n_samples()];
    on_costate(n, &traj.states[n], &lambda);

    let c = |v: f64| Complex64::new(v, 0.0);
    for j in (0..n).rev() {
        let rho = &traj.states[j];
        let (h0, hm, h1) = (&hams[2 * j], &hams[2 * j + 1], &hams[2 * j + 2]);

        let k1 = commutator_rhs(h0, rho, s);
        let y2 = rho + k1 * c(0.5 * dt);
        let k2 = commutator_rhs(hm, &y2, s);
        let y3 = rho + k2 * c(0.5 * dt);
        let k3 = commutator_rhs(hm, &y3, s);
        let y4 = rho + k3 * c(dt);

        let mut g_k1 = lambda * c(dt / 6.0);
        let mut g_k2 = lambda * c(dt / 3.0);
        let mut g_k3 = lambda * c(dt / 3.0);
        let g_k4 = lambda * c(dt / 6.0);
        let mut next = lambda;

        accumulate(&mut grad[2 * j + 2], &y4, &g_k4, s);
        let g_y4 = -commutator_rhs(h1, &g_k4, s);
        next += g_y4;
        g_k3 += g_y4 * c(dt);

        accumulate(&mut grad[2 * j + 1], &y3, &g_k3, s);
        let g_y3 = -commutator_rhs(hm, &g_k3, s);
        next += g_y3;
        g_k2 += g_y3 * c(0.5 * dt);

        accumulate(&mut grad[2 * j + 1], &y2, &g_k2, s);
        let g_y2 = -commutator_rhs(hm, &g_k2, s);
        next += g_y2;
        g_k1 += g_y2 * c(0.5 * dt);

        accumulate(&mut grad[2 * j], rho, &g_k1, s);
        next += -commutator_rhs(h0, &g_k1, s);

        lambda = next;
        on_costate(j, rho, &lambda);
    }
    LossGradient { output, loss, grad }
}

/// Adjoint gradient of `(target − output)²` for one training sample.
///
/// The gradient covers the samples used by `cfg`; a longer schedule is
/// accepted and its extra samples get no entries.
pub fn loss_gradient(
    sample: &TrainingSample,
    schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
) -> Result<LossGradient> {
    sample.functional.validate()?;
    let hams = schedule.hamiltonians(cfg)?;
    Ok(adjoint_sweep(*sample.input.density().matrix(), &hams, cfg, sample.functional, sample.target, |_, _, _| {}))
}

fn loss_at(sample: &TrainingSample, schedule: &SampledSchedule, cfg: &IntegrationConfig) -> Result<f64> {
    let rho = propagate(&sample.input, schedule, cfg)?;
    Ok((sample.target - sample.functional.evaluate(&rho)).powi(2))
}

/// Central finite difference of the loss for one parameter sample.
pub fn finite_difference_entry(
    sample: &TrainingSample,
    schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
    index: usize,
    param: Param,
    delta: f64,
) -> Result<f64> {
    if index >= cfg.n_samples() {
        return Err(invalid(format!("sample index {index} outside 0..{}", cfg.n_samples())));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(invalid("finite-difference step must be positive"));
    }
    let mut plus = schedule.clone();
    *plus.values[index].get_mut(param) += delta;
    let mut minus = schedule.clone();
    *minus.values[index].get_mut(param) -= delta;
    Ok((loss_at(sample, &plus, cfg)? - loss_at(sample, &minus, cfg)?) / (2.0 * delta))
}

/// Full gradient by central differences: two propagations per parameter
/// sample. Slow; kept as an independent route to the same quantity.
pub fn finite_difference_gradient(
    sample: &TrainingSample,
    schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
    delta: f64,
) -> Result<Vec<HamiltonianParams>> {
    schedule.check_grid(cfg)?;
    let entries: Vec<(usize, Param)> = (0..cfg.n_samples()).flat_map(|k| Param::ALL.map(|p| (k, p))).collect();
    let values: Vec<f64> = entries
        .par_iter()
        .map(|&(k, p)| finite_difference_entry(sample, schedule, cfg, k, p, delta))
        .collect::<Result<_>>()?;
    let mut grad = vec![HamiltonianParams::default(); cfg.n_samples()];
    for (&(k, p), v) in entries.iter().zip(values) {
        *grad[k].get_mut(p) = v;
    }
    Ok(grad)
}
