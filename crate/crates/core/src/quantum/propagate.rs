use std::f64::consts::TAU;

use nalgebra::SMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, Matrix4c, PureState};
use crate::error::{invalid, Result};
use crate::schedule::SampledSchedule;

/// Fixed-step integration settings.
///
/// Hamiltonian parameters are frequencies in GHz and times are in ns. The
/// generator of the motion is `−i·angular_scale·[H, ρ]`; the default
/// `angular_scale = 2π` converts GHz to rad/ns. Setting it to `1` treats the
/// parameters as angular frequencies directly (ħ = 1 in rad/ns).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "default_angular_scale")]
    pub angular_scale: f64,
}

fn default_angular_scale() -> f64 {
    TAU
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self { dt: 0.05, t_final: 190.0, angular_scale: TAU }
    }
}

impl IntegrationConfig {
    pub fn new(dt: f64, t_final: f64) -> Result<Self> {
        let cfg = Self { dt, t_final, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_angular_scale(mut self, angular_scale: f64) -> Self {
        self.angular_scale = angular_scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(invalid(format!("t_final must be positive, got {}", self.t_final)));
        }
        if !(self.angular_scale > 0.0 && self.angular_scale.is_finite()) {
            return Err(invalid("angular_scale must be positive"));
        }
        let ratio = self.t_final / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
            return Err(invalid(format!("t_final / dt = {ratio} is not a positive integer step count")));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Number of schedule samples needed: step endpoints and midpoints.
    pub fn n_samples(&self) -> usize {
        2 * self.n_steps() + 1
    }

    /// Time of schedule sample `k` (`k·dt/2`).
    pub fn sample_time(&self, k: usize) -> f64 {
        k as f64 * 0.5 * self.dt
    }
}

/// Hamiltonians at the start, midpoint and end of one RK4 step.
#[derive(Debug, Clone, Copy)]
pub struct StepHamiltonians {
    pub start: Matrix4c,
    pub mid: Matrix4c,
    pub end: Matrix4c,
}

/// `−i·scale·[H, y]`.
#[inline]
pub(crate) fn commutator_rhs(h: &Matrix4c, y: &Matrix4c, scale: f64) -> Matrix4c {
    (h * y - y * h) * Complex64::new(0.0, -scale)
}

/// One classical RK4 step; slopes k2 and k3 share the midpoint Hamiltonian.
#[inline]
pub(crate) fn rk4_step_matrix(
    rho: &Matrix4c,
    start: &Matrix4c,
    mid: &Matrix4c,
    end: &Matrix4c,
    dt: f64,
    scale: f64,
) -> Matrix4c {
    let half = Complex64::new(0.5 * dt, 0.0);
    let k1 = commutator_rhs(start, rho, scale);
    let k2 = commutator_rhs(mid, &(rho + k1 * half), scale);
    let k3 = commutator_rhs(mid, &(rho + k2 * half), scale);
    let k4 = commutator_rhs(end, &(rho + k3 * Complex64::new(dt, 0.0)), scale);
    rho + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(dt / 6.0, 0.0)
}

/// One RK4 step of `dρ/dt = −i·angular_scale·[H(t), ρ]`.
pub fn rk4_step(rho: &DensityMatrix, h: &StepHamiltonians, dt: f64, angular_scale: f64) -> Result<DensityMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("dt must be positive, got {dt}")));
    }
    Ok(DensityMatrix::from_matrix_unchecked(rk4_step_matrix(rho.matrix(), &h.start, &h.mid, &h.end, dt, angular_scale)))
}

/// Density matrices at every step boundary, `states[j] = ρ(j·dt)`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    pub states: Vec<Matrix4c>,
}

impl Trajectory {
    pub fn final_state(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(*self.states.last().expect("trajectory is never empty"))
    }

    pub fn state(&self, step: usize) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.states[step])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

pub(crate) fn run(
    rho0: Matrix4c,
    hams: &[Matrix4c],
    cfg: &IntegrationConfig,
    mut on_step: impl FnMut(&Matrix4c),
) -> Matrix4c {
    let mut rho = rho0;
    on_step(&rho);
    for j in 0..cfg.n_steps() {
        rho = rk4_step_matrix(&rho, &hams[2 * j], &hams[2 * j + 1], &hams[2 * j + 2], cfg.dt, cfg.angular_scale);
        on_step(&rho);
    }
    rho
}

/// Propagates a general density matrix to `t_final`.
pub fn propagate_density(
    rho0: &DensityMatrix,
    schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
) -> Result<DensityMatrix> {
    let hams = schedule.hamiltonians(cfg)?;
    Ok(DensityMatrix::from_matrix_unchecked(run(*rho0.matrix(), &hams, cfg, |_| {})))
}

/// Propagates `|ψ0⟩⟨ψ0|` to `t_final` and returns `ρ(t_final)`.
pub fn propagate(psi0: &PureState, schedule: &SampledSchedule, cfg: &IntegrationConfig) -> Result<DensityMatrix> {
    propagate_density(&psi0.density(), schedule, cfg)
}

/// Like [`propagate`], but keeps `ρ` at every step boundary.
pub fn propagate_trajectory(
    psi0: &PureState,
    schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
) -> Result<Trajectory> {
    let hams = schedule.hamiltonians(cfg)?;
    Ok(trajectory_with(*psi0.density().matrix(), &hams, cfg))
}

pub(crate) fn trajectory_with(rho0: Matrix4c, hams: &[Matrix4c], cfg: &IntegrationConfig) -> Trajectory {
    let mut states = Vec::with_capacity(cfg.n_steps() + 1);
    run(rho0, hams, cfg, |r| states.push(*r));
    Trajectory { dt: cfg.dt, states }
}

/// The full propagation as a linear map on 4×4 matrices.
///
/// RK4 applied to `−i[H, ρ]` is linear in `ρ`, so propagating the sixteen
/// matrix units once gives the exact same map as [`propagate_density`] up to
/// rounding. Used when many inputs share one schedule.
#[derive(Debug, Clone)]
pub struct TransferMap {
    // column (4i + j) is the image of the matrix unit E_ij, row-major flattened
    map: SMatrix<Complex64, 16, 16>,
}

impl TransferMap {
    pub fn new(schedule: &SampledSchedule, cfg: &IntegrationConfig) -> Result<Self> {
        let hams = schedule.hamiltonians(cfg)?;
        let mut map = SMatrix::<Complex64, 16, 16>::zeros();
        for col in 0..16 {
            let mut unit = Matrix4c::zeros();
            unit[(col / 4, col % 4)] = Complex64::new(1.0, 0.0);
            let img = run(unit, &hams, cfg, |_| {});
            for r in 0..16 {
                map[(r, col)] = img[(r / 4, r % 4)];
            }
        }
        Ok(Self { map })
    }

    pub fn apply(&self, rho0: &DensityMatrix) -> DensityMatrix {
        let m = rho0.matrix();
        let v = SMatrix::<Complex64, 16, 1>::from_fn(|r, _| m[(r / 4, r % 4)]);
        let out = self.map * v;
        DensityMatrix::from_matrix_unchecked(Matrix4c::from_fn(|i, j| out[4 * i + j]))
    }

    pub fn apply_pure(&self, psi0: &PureState) -> DensityMatrix {
        self.apply(&psi0.density())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{build_hamiltonian, HamiltonianParams};

    #[test]
    fn config_defaults_and_validation() {
        let cfg = IntegrationConfig::default();
        assert_eq!(cfg.n_steps(), 3800);
        assert_eq!(cfg.n_samples(), 7601);
        assert!(IntegrationConfig::new(0.03, 1.0).is_err());
        assert!(IntegrationConfig::new(-0.05, 1.0).is_err());
        assert!(IntegrationConfig::new(0.05, 0.0).is_err());
        assert!(IntegrationConfig::new(0.05, 1.0).is_ok());
    }

    #[test]
    fn zero_generator_leaves_state_unchanged() {
        let rho = PureState::from_real([1.0, 2.0, 3.0, 4.0]).unwrap().density();
        let z = Matrix4c::zeros();
        let h = StepHamiltonians { start: z, mid: z, end: z };
        let out = rk4_step(&rho, &h, 0.05, TAU).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn maximally_mixed_state_is_stationary() {
        let hm = build_hamiltonian(&HamiltonianParams::new(0.3, 0.1, -0.2, 0.5, 0.7)).unwrap();
        let h = StepHamiltonians { start: hm, mid: hm * Complex64::new(0.5, 0.0), end: hm };
        let rho = DensityMatrix::maximally_mixed();
        let out = rk4_step(&rho, &h, 0.1, TAU).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-16);
    }

    #[test]
    fn rk4_step_rejects_bad_dt() {
        let z = Matrix4c::zeros();
        let h = StepHamiltonians { start: z, mid: z, end: z };
        assert!(rk4_step(&DensityMatrix::maximally_mixed(), &h, 0.0, 1.0).is_err());
    }
}
