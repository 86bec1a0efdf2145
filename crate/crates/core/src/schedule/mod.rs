//! Time-dependent Hamiltonian parameter functions: the trainable weights.
//!
//! A [`SampledSchedule`] stores one [`HamiltonianParams`] per RK4 substep
//! time (`k·dt/2`), so gradients line up one-to-one with samples. A
//! [`FourierSchedule`] is the closed-form curve-fit representation. Both
//! serialize to JSON tagged with `"form"`.

mod fit;
mod preset;

pub use fit::{fit_fourier, fit_series, FourierFit, SeriesFit, OMEGA_GRID_MAX_POINTS};
pub use preset::Preset;

use std::borrow::Cow;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quantum::{build_hamiltonian, HamiltonianParams, IntegrationConfig, Matrix4c, Param};

/// Schedule samples at every substep time `k·dt/2`, `k = 0..=2·n_steps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSchedule {
    pub dt: f64,
    pub values: Vec<HamiltonianParams>,
}

impl SampledSchedule {
    pub fn new(dt: f64, values: Vec<HamiltonianParams>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid(format!("dt must be positive, got {dt}")));
        }
        if values.len() < 3 || values.len().is_multiple_of(2) {
            return Err(invalid(format!("sampled schedule needs 2·n_steps + 1 values, got {}", values.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite schedule sample at index {k}")));
        }
        Ok(Self { dt, values })
    }

    pub fn constant(params: HamiltonianParams, cfg: &IntegrationConfig) -> Self {
        Self { dt: cfg.dt, values: vec![params; cfg.n_samples()] }
    }

    pub fn from_fn(cfg: &IntegrationConfig, mut f: impl FnMut(f64) -> HamiltonianParams) -> Self {
        let values = (0..cfg.n_samples()).map(|k| f(cfg.sample_time(k))).collect();
        Self { dt: cfg.dt, values }
    }

    pub fn n_steps(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    pub fn t_final(&self) -> f64 {
        self.n_steps() as f64 * self.dt
    }

    pub fn sample_time(&self, k: usize) -> f64 {
        k as f64 * 0.5 * self.dt
    }

    /// Stored sample at `t`, which must be a substep time inside the domain.
    pub fn evaluate(&self, t: f64) -> Result<HamiltonianParams> {
        let pos = t / (0.5 * self.dt);
        let k = pos.round();
        if !t.is_finite() || (pos - k).abs() > 1e-9 * pos.abs().max(1.0) {
            return Err(invalid(format!("t = {t} is not on the sample grid (dt/2 = {})", 0.5 * self.dt)));
        }
        if k < 0.0 || k as usize >= self.values.len() {
            return Err(invalid(format!("t = {t} outside [0, {}]", self.t_final())));
        }
        Ok(self.values[k as usize])
    }

    /// Time series of one parameter function.
    pub fn series(&self, p: Param) -> Vec<f64> {
        self.values.iter().map(|v| v.get(p)).collect()
    }

    /// Checks the grid is compatible with `cfg`.
    pub fn check_grid(&self, cfg: &IntegrationConfig) -> Result<()> {
        cfg.validate()?;
        if (self.dt - cfg.dt).abs() > 1e-12 * cfg.dt {
            return Err(invalid(format!("schedule dt {} does not match integration dt {}", self.dt, cfg.dt)));
        }
        if self.values.len() < cfg.n_samples() {
            return Err(invalid(format!(
                "schedule covers {} ns, shorter than t_final = {} ns",
                self.t_final(),
                cfg.t_final
            )));
        }
        Ok(())
    }

    /// Hamiltonian at each sample needed by `cfg`.
    pub fn hamiltonians(&self, cfg: &IntegrationConfig) -> Result<Vec<Matrix4c>> {
        self.check_grid(cfg)?;
        self.values[..cfg.n_samples()].iter().map(build_hamiltonian).collect()
    }

    /// `self + alpha * grad`, sample by sample.
    pub fn add_scaled(&mut self, alpha: f64, grad: &[HamiltonianParams]) {
        for (v, g) in self.values.iter_mut().zip(grad) {
            *v = v.add_scaled(alpha, g);
        }
    }

    /// Largest `|f(t) − g(t)|` over samples, for two parameter functions.
    pub fn max_difference(&self, a: Param, b: Param) -> f64 {
        self.values.iter().map(|v| (v.get(a) - v.get(b)).abs()).fold(0.0, f64::max)
    }

    /// `max − min` of one parameter function.
    pub fn range(&self, p: Param) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .map(|v| v.get(p))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        hi - lo
    }
}

/// `a0 + a1 cos(ωt) + b1 sin(ωt) + a2 cos(2ωt) + b2 sin(2ωt)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourierSeries {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    #[serde(default)]
    pub a2: f64,
    #[serde(default)]
    pub b2: f64,
    pub omega: f64,
}

impl FourierSeries {
    pub fn constant(a0: f64) -> Self {
        Self { a0, ..Self::default() }
    }

    pub fn one_harmonic(a0: f64, a1: f64, b1: f64, omega: f64) -> Self {
        Self { a0, a1, b1, a2: 0.0, b2: 0.0, omega }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (s1, c1) = (self.omega * t).sin_cos();
        let (s2, c2) = (2.0 * self.omega * t).sin_cos();
        self.a0 + self.a1 * c1 + self.b1 * s1 + self.a2 * c2 + self.b2 * s2
    }

    pub fn has_second_harmonic(&self) -> bool {
        self.a2 != 0.0 || self.b2 != 0.0
    }
}

/// One Fourier series per parameter function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierSchedule {
    pub k_a: FourierSeries,
    pub k_b: FourierSeries,
    pub eps_a: FourierSeries,
    pub eps_b: FourierSeries,
    pub zeta: FourierSeries,
}

impl FourierSchedule {
    /// Both qubits share the `k` and `eps` series.
    pub fn symmetric(k: FourierSeries, eps: FourierSeries, zeta: FourierSeries) -> Self {
        Self { k_a: k, k_b: k, eps_a: eps, eps_b: eps, zeta }
    }

    pub fn constant(p: HamiltonianParams) -> Self {
        Self {
            k_a: FourierSeries::constant(p.k_a),
            k_b: FourierSeries::constant(p.k_b),
            eps_a: FourierSeries::constant(p.eps_a),
            eps_b: FourierSeries::constant(p.eps_b),
            zeta: FourierSeries::constant(p.zeta),
        }
    }

    pub fn series(&self, p: Param) -> &FourierSeries {
        match p {
            Param::KA => &self.k_a,
            Param::KB => &self.k_b,
            Param::EpsA => &self.eps_a,
            Param::EpsB => &self.eps_b,
            Param::Zeta => &self.zeta,
        }
    }

    pub fn series_mut(&mut self, p: Param) -> &mut FourierSeries {
        match p {
            Param::KA => &mut self.k_a,
            Param::KB => &mut self.k_b,
            Param::EpsA => &mut self.eps_a,
            Param::EpsB => &mut self.eps_b,
            Param::Zeta => &mut self.zeta,
        }
    }

    pub fn evaluate(&self, t: f64) -> HamiltonianParams {
        HamiltonianParams::new(
            self.k_a.eval(t),
            self.k_b.eval(t),
            self.eps_a.eval(t),
            self.eps_b.eval(t),
            self.zeta.eval(t),
        )
    }

    pub fn to_sampled(&self, cfg: &IntegrationConfig) -> SampledSchedule {
        SampledSchedule::from_fn(cfg, |t| self.evaluate(t))
    }
}

/// A schedule in either representation; the JSON file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum Schedule {
    Fourier(FourierSchedule),
    Sampled(SampledSchedule),
}

impl Schedule {
    pub fn evaluate(&self, t: f64) -> Result<HamiltonianParams> {
        match self {
            Schedule::Fourier(f) => {
                if !(t.is_finite() && t >= 0.0) {
                    return Err(invalid(format!("t = {t} outside [0, ∞)")));
                }
                Ok(f.evaluate(t))
            }
            Schedule::Sampled(s) => s.evaluate(t),
        }
    }

    /// Sampled form on the grid of `cfg`; borrows when already sampled.
    pub fn sampled(&self, cfg: &IntegrationConfig) -> Result<Cow<'_, SampledSchedule>> {
        match self {
            Schedule::Fourier(f) => Ok(Cow::Owned(f.to_sampled(cfg))),
            Schedule::Sampled(s) => {
                s.check_grid(cfg)?;
                Ok(Cow::Borrowed(s))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Schedule = serde_json::from_str(text)?;
        if let Schedule::Sampled(ref inner) = s {
            SampledSchedule::new(inner.dt, inner.values.clone())?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|source| Error::Io { path: path.to_path_buf(), source })
    }
}

impl From<FourierSchedule> for Schedule {
    fn from(f: FourierSchedule) -> Self {
        Schedule::Fourier(f)
    }
}

impl From<SampledSchedule> for Schedule {
    fn from(s: SampledSchedule) -> Self {
        Schedule::Sampled(s)
    }
}
