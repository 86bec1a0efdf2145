//! Least-squares Fourier curve fits of parameter functions.
//!
//! The frequency enters nonlinearly; for any fixed `ω` the coefficients
//! are a linear least-squares problem. `ω` is found by scanning a uniform
//! grid over `[2π/(4·T), 2π/(20·dt)]` on a strided subsample, then refined
//! by golden-section search on the full data around the best grid point.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{FourierSchedule, FourierSeries, SampledSchedule};
use crate::error::{invalid, Result};
use crate::quantum::{HamiltonianParams, Param};

/// Cap on the number of grid frequencies scanned.
pub const OMEGA_GRID_MAX_POINTS: usize = 4000;
const SCAN_MAX_SAMPLES: usize = 1024;
const MIN_SAMPLES: usize = 8;

/// Fit of one function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub series: FourierSeries,
    pub rms: f64,
    /// Input was constant; harmonics are zero and `omega = 0`.
    pub degenerate: bool,
}

/// Fit of a whole schedule, with the per-function RMS residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierFit {
    pub harmonics: usize,
    pub schedule: FourierSchedule,
    pub rms: HamiltonianParams,
    pub degenerate: Vec<Param>,
    pub omega_range: (f64, f64),
}

fn design(times: &[f64], omega: f64, harmonics: usize) -> DMatrix<f64> {
    let cols = 1 + 2 * harmonics;
    DMatrix::from_fn(times.len(), cols, |r, c| {
        let t = times[r];
        match c {
            0 => 1.0,
            1 => (omega * t).cos(),
            2 => (omega * t).sin(),
            3 => (2.0 * omega * t).cos(),
            _ => (2.0 * omega * t).sin(),
        }
    })
}

/// Linear coefficients and sum of squared residuals at a fixed `omega`.
fn solve_at(times: &[f64], values: &DVector<f64>, omega: f64, harmonics: usize) -> (Vec<f64>, f64) {
    let a = design(times, omega, harmonics);
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(values, 1e-13).expect("SVD computed with U and V");
    let resid = values - &a * &coef;
    (coef.iter().copied().collect(), resid.norm_squared())
}

fn to_series(coef: &[f64], omega: f64) -> FourierSeries {
    FourierSeries {
        a0: coef[0],
        a1: coef[1],
        b1: coef[2],
        a2: coef.get(3).copied().unwrap_or(0.0),
        b2: coef.get(4).copied().unwrap_or(0.0),
        omega,
    }
}

/// Fits `a0 + Σ_h (a_h cos(hωt) + b_h sin(hωt))` with `harmonics ∈ {1, 2}`.
///
/// `omega_range` is the `(min, max)` search interval for `ω`.
pub fn fit_series(times: &[f64], values: &[f64], harmonics: usize, omega_range: (f64, f64)) -> Result<SeriesFit> {
    if !(1..=2).contains(&harmonics) {
        return Err(invalid(format!("harmonics must be 1 or 2, got {harmonics}")));
    }
    if times.len() != values.len() {
        return Err(invalid("times and values differ in length"));
    }
    if values.len() < MIN_SAMPLES {
        return Err(invalid(format!("need at least {MIN_SAMPLES} samples, got {}", values.len())));
    }
    let (w_lo, w_hi) = omega_range;
    if !(w_lo > 0.0 && w_hi > w_lo) {
        return Err(invalid(format!("bad omega range {omega_range:?}")));
    }

    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let spread = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if spread <= 1e-13 * mean.abs() || spread == 0.0 {
        return Ok(SeriesFit { series: FourierSeries::constant(mean), rms: 0.0, degenerate: true });
    }

    // coarse scan on a strided subsample
    let stride = values.len().div_ceil(SCAN_MAX_SAMPLES);
    let sub_t: Vec<f64> = times.iter().step_by(stride).copied().collect();
    let sub_v = DVector::from_iterator(sub_t.len(), values.iter().step_by(stride).copied());
    let step = (0.5 * w_lo).max((w_hi - w_lo) / OMEGA_GRID_MAX_POINTS as f64);
    let n_grid = ((w_hi - w_lo) / step).floor() as usize + 1;
    let mut best = (w_lo, f64::INFINITY);
    for i in 0..n_grid {
        let w = w_lo + i as f64 * step;
        let (_, sse) = solve_at(&sub_t, &sub_v, w, harmonics);
        if sse < best.1 {
            best = (w, sse);
        }
    }

    // golden-section refinement on all samples
    let full_v = DVector::from_column_slice(values);
    let sse = |w: f64| solve_at(times, &full_v, w, harmonics).1;
    let (mut a, mut b) = ((best.0 - step).max(0.5 * w_lo), (best.0 + step).min(w_hi + step));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (sse(c), sse(d));
    while (b - a) > 1e-13 * b.abs() {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sse(d);
        }
    }
    let omega = 0.5 * (a + b);
    let (coef, sse_final) = solve_at(times, &full_v, omega, harmonics);
    Ok(SeriesFit { series: to_series(&coef, omega), rms: (sse_final / n).sqrt(), degenerate: false })
}

/// Default `ω` search interval for a schedule of duration `t_final` sampled
/// with step `dt`.
pub fn default_omega_range(t_final: f64, dt: f64) -> (f64, f64) {
    use std::f64::consts::TAU;
    (TAU / (4.0 * t_final), TAU / (2.0 * dt * 10.0))
}

/// Fits every parameter function of `samples`.
pub fn fit_fourier(samples: &SampledSchedule, harmonics: usize) -> Result<FourierFit> {
    let times: Vec<f64> = (0..samples.values.len()).map(|k| samples.sample_time(k)).collect();
    let range = default_omega_range(samples.t_final(), samples.dt);
    let mut schedule = FourierSchedule::constant(HamiltonianParams::default());
    let mut rms = HamiltonianParams::default();
    let mut degenerate = Vec::new();
    for p in Param::ALL {
        let fit = fit_series(&times, &samples.series(p), harmonics, range)?;
        *schedule.series_mut(p) = fit.series;
        *rms.get_mut(p) = fit.rms;
        if fit.degenerate {
            degenerate.push(p);
        }
        log::debug!("fit {}: omega = {:.6}, rms = {:.3e}", p.name(), fit.series.omega, fit.rms);
    }
    Ok(FourierFit { harmonics, schedule, rms, degenerate, omega_range: range })
}
