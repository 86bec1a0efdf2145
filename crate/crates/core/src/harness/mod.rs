//! Experiment sweeps behind each figure: witness curves, random-state
//! scatters, indicator surfaces and the phase-correction comparison.
//!
//! A sweep produces a [`Table`] (one row per grid point or random draw, in
//! grid order) and a [`SweepSummary`] of the statistics the figure is judged
//! by. Grid points are evaluated in parallel and collected in order, so the
//! output depends only on the [`SweepSpec`].

mod emit;
mod random;
mod stats;

pub use emit::{emit_csv, emit_json, Table};
pub use random::{random_pure_state, StateMode};
pub use stats::{pearson, ranks, rms_difference, spearman, zero_crossings};

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correction::{oscillation_model, Corrector, OscillationModel, SignResolution};
use crate::error::{invalid, Error, Result};
use crate::measures::{
    bell_state, entanglement_of_formation_from_concurrence, mintert_witness, pure_concurrence, BellKind, WitnessTarget,
};
use crate::qnn::{Indicator, OutputFunctional};
use crate::quantum::{IntegrationConfig, PureState};
use crate::schedule::{Preset, SampledSchedule, Schedule};

/// Default random-state count for the scatter experiments.
pub const DESK_SAMPLES: usize = 1000;
/// State count of the full-size scatter figures.
pub const FULL_SAMPLES: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Fig1Witness,
    Fig2ResetWitness,
    Fig5RealScatter,
    Fig6ComplexScatter,
    Fig8Correction,
    Fig9Surface,
    Fig10Surface,
    QnnBellSurface,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Fig1Witness,
        Experiment::Fig2ResetWitness,
        Experiment::Fig5RealScatter,
        Experiment::Fig6ComplexScatter,
        Experiment::Fig8Correction,
        Experiment::Fig9Surface,
        Experiment::Fig10Surface,
        Experiment::QnnBellSurface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1Witness => "fig1_witness",
            Experiment::Fig2ResetWitness => "fig2_reset_witness",
            Experiment::Fig5RealScatter => "fig5_real_scatter",
            Experiment::Fig6ComplexScatter => "fig6_complex_scatter",
            Experiment::Fig8Correction => "fig8_correction",
            Experiment::Fig9Surface => "fig9_surface",
            Experiment::Fig10Surface => "fig10_surface",
            Experiment::QnnBellSurface => "qnn_bell_surface",
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Experiment::Fig5RealScatter | Experiment::Fig6ComplexScatter)
    }

    fn uses_entanglement_schedule(self) -> bool {
        !matches!(self, Experiment::Fig1Witness | Experiment::Fig2ResetWitness)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| Error::UnknownExperiment(s.to_string()))
    }
}

/// Evenly spaced points from `start` to `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count }
    }

    /// `[−π, π]` with `count` points.
    pub fn full_turn(count: usize) -> Self {
        Self::new(-PI, PI, count)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.count == 0 {
            return Err(invalid(format!("{name} axis is empty")));
        }
        if !(self.start.is_finite() && self.end.is_finite()) {
            return Err(invalid(format!("{name} axis has non-finite bounds")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

/// Where a sweep gets a schedule from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum ScheduleSource {
    Preset(Preset),
    File(PathBuf),
    Inline(Schedule),
}

impl ScheduleSource {
    pub fn resolve(&self) -> Result<Schedule> {
        match self {
            ScheduleSource::Preset(p) => Ok(p.schedule()),
            ScheduleSource::File(path) => Schedule::load(path),
            ScheduleSource::Inline(s) => Ok(s.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ScheduleSource::Preset(p) => format!("preset:{}", p.name()),
            ScheduleSource::File(path) => format!("file:{}", path.display()),
            ScheduleSource::Inline(_) => "inline".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub experiment: Experiment,
    /// Phase axis (`θ` or `φ`).
    pub angle: Axis,
    /// Magnitude axis for the surfaces: the mixing angle `α` for the Bell
    /// magnitude family, `a01` for the contaminated family.
    pub magnitude: Axis,
    /// Number of random states for the scatter experiments.
    pub samples: usize,
    pub seed: Option<u64>,
    pub entanglement_schedule: ScheduleSource,
    pub phase_schedule: ScheduleSource,
    pub integration: IntegrationConfig,
    pub sign_resolution: SignResolution,
}

impl SweepSpec {
    /// Default grids: 5° steps on angle axes, 37 phases for the correction
    /// comparison, 1000 random states, published schedules.
    pub fn new(experiment: Experiment) -> Self {
        let angle = match experiment {
            Experiment::Fig8Correction => Axis::full_turn(37),
            _ => Axis::full_turn(73),
        };
        let magnitude = match experiment {
            Experiment::Fig10Surface => Axis::new(0.0, 1.0, 21),
            _ => Axis::new(0.0, FRAC_PI_2, 19),
        };
        Self {
            experiment,
            angle,
            magnitude,
            samples: DESK_SAMPLES,
            seed: experiment.is_randomized().then_some(0),
            entanglement_schedule: ScheduleSource::Preset(Preset::EntanglementTrained),
            phase_schedule: ScheduleSource::Preset(Preset::PhaseTrained),
            integration: IntegrationConfig::default(),
            sign_resolution: SignResolution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.angle.validate("angle")?;
        self.magnitude.validate("magnitude")?;
        self.integration.validate()?;
        if self.experiment.is_randomized() {
            if self.seed.is_none() {
                return Err(invalid(format!("{} needs a seed", self.experiment)));
            }
            if self.samples < 2 {
                return Err(invalid("scatter experiments need at least 2 samples"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub experiment: Experiment,
    pub seed: Option<u64>,
    pub records: usize,
    pub statistics: BTreeMap<String, f64>,
    /// Schedule provenance by role.
    pub schedules: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub table: Table,
    pub summary: SweepSummary,
}

fn sampled(source: &ScheduleSource, cfg: &IntegrationConfig) -> Result<SampledSchedule> {
    Ok(source.resolve()?.sampled(cfg)?.into_owned())
}

fn entanglement_of_formation(psi: &PureState) -> f64 {
    entanglement_of_formation_from_concurrence(pure_concurrence(psi))
}

/// Runs one experiment.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let cfg = &spec.integration;
    let mut schedules = BTreeMap::new();
    let ent = if spec.experiment.uses_entanglement_schedule() {
        schedules.insert("entanglement".to_string(), spec.entanglement_schedule.describe());
        let s = sampled(&spec.entanglement_schedule, cfg)?;
        Some(Indicator::new(&s, OutputFunctional::ZzCorrelationSquared, cfg)?)
    } else {
        None
    };
    let mut statistics = BTreeMap::new();
    let mut notes = Vec::new();

    let table = match spec.experiment {
        Experiment::Fig1Witness => witness_curves(spec, false, &mut statistics)?,
        Experiment::Fig2ResetWitness => witness_curves(spec, true, &mut statistics)?,
        Experiment::Fig5RealScatter | Experiment::Fig6ComplexScatter => {
            let mode =
                if spec.experiment == Experiment::Fig5RealScatter { StateMode::Real } else { StateMode::Complex };
            notes.push(match mode {
                StateMode::Real => "states: normalized real Gaussian vectors, a00 >= 0".to_string(),
                StateMode::Complex => "states: Haar-uniform (normalized complex Gaussian), a00 real >= 0".to_string(),
            });
            scatter(spec, mode, ent.as_ref().unwrap(), &mut statistics)
        }
        Experiment::Fig8Correction => {
            schedules.insert("phase".to_string(), spec.phase_schedule.describe());
            let phase = sampled(&spec.phase_schedule, cfg)?;
            let ent_sched = sampled(&spec.entanglement_schedule, cfg)?;
            let corrector = Corrector::new(&phase, &ent_sched, cfg, spec.sign_resolution)?;
            correction(spec, &corrector, &mut statistics)?
        }
        Experiment::Fig9Surface | Experiment::QnnBellSurface => {
            let with_model = spec.experiment == Experiment::Fig9Surface;
            surface(spec, ent.as_ref().unwrap(), Family::BellMagnitude, with_model, &mut statistics)
        }
        Experiment::Fig10Surface => surface(spec, ent.as_ref().unwrap(), Family::Contaminated, true, &mut statistics),
    };

    Ok(SweepOutput {
        summary: SweepSummary {
            experiment: spec.experiment,
            seed: spec.experiment.is_randomized().then_some(spec.seed).flatten(),
            records: table.len(),
            statistics,
            schedules,
            notes,
        },
        table,
    })
}

/// Column order used by the witness sweeps.
const WITNESS_ORDER: [BellKind; 4] = [BellKind::PsiMinus, BellKind::PsiPlus, BellKind::PhiMinus, BellKind::PhiPlus];

fn witness_curves(spec: &SweepSpec, reset: bool, stats: &mut BTreeMap<String, f64>) -> Result<Table> {
    let thetas = spec.angle.values();
    let mut table = Table::new(&["theta", "psi_minus", "psi_plus", "phi_minus", "phi_plus"]);
    for &theta in &thetas {
        let mut row = vec![theta];
        for kind in WITNESS_ORDER {
            let target = if reset { WitnessTarget::new(kind) } else { WitnessTarget::default() };
            row.push(mintert_witness(&bell_state(kind, theta).density(), target)?);
        }
        table.rows.push(row);
    }
    let col = |name: &str| table.column(name).expect("known column");
    if reset {
        let spread = table
            .rows
            .iter()
            .map(|r| {
                let (lo, hi) =
                    r[1..].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
                hi - lo
            })
            .fold(0.0, f64::max);
        stats.insert("max_curve_spread".into(), spread);
    } else {
        let phi_max = col("phi_minus").iter().chain(&col("phi_plus")).fold(0.0f64, |m, v| m.max(v.abs()));
        stats.insert("max_abs_phi_family".into(), phi_max);
    }
    let crossings = zero_crossings(&thetas, &col("psi_minus"), 1e-12);
    stats.insert("psi_minus_zero_crossings".into(), crossings.len() as f64);
    for (i, x) in crossings.iter().enumerate() {
        stats.insert(format!("psi_minus_zero_crossing_{i}"), *x);
    }
    Ok(table)
}

fn scatter(spec: &SweepSpec, mode: StateMode, ent: &Indicator, stats: &mut BTreeMap<String, f64>) -> Table {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.expect("validated"));
    let states: Vec<PureState> = (0..spec.samples).map(|_| random_pure_state(mode, &mut rng)).collect();
    let rows: Vec<Vec<f64>> = states
        .par_iter()
        .map(|psi| {
            let mut row: Vec<f64> = psi.amplitudes().iter().flat_map(|a| [a.re, a.im]).collect();
            let c = pure_concurrence(psi);
            row.extend([ent.evaluate(psi), entanglement_of_formation_from_concurrence(c), c]);
            row
        })
        .collect();
    let mut table = Table::new(&[
        "a00_re",
        "a00_im",
        "a01_re",
        "a01_im",
        "a10_re",
        "a10_im",
        "a11_re",
        "a11_im",
        "indicator",
        "e_f",
        "concurrence",
    ]);
    table.rows = rows;
    let ind = table.column("indicator").unwrap();
    let ef = table.column("e_f").unwrap();
    stats.insert("spearman_indicator_vs_e_f".into(), spearman(&ind, &ef));
    stats.insert("pearson_indicator_vs_e_f".into(), pearson(&ind, &ef));
    stats.insert("rms_indicator_minus_e_f".into(), rms_difference(&ind, &ef));
    stats.insert("samples".into(), spec.samples as f64);
    table
}

fn correction(spec: &SweepSpec, corrector: &Corrector, stats: &mut BTreeMap<String, f64>) -> Result<Table> {
    let phis = spec.angle.values();
    let rows: Vec<Vec<f64>> = phis
        .par_iter()
        .map(|&phi| {
            let a = corrector.correct(&bell_state(BellKind::PhiPlus, phi), 3)?;
            let b = corrector.correct(&bell_state(BellKind::PsiPlus, phi), 2)?;
            Ok(vec![
                phi,
                a.uncorrected,
                a.corrected,
                a.estimate.phi,
                b.uncorrected,
                b.corrected,
                b.estimate.phi,
                a.oracle,
            ])
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[
        "phi",
        "uncorrected_00_11",
        "corrected_00_11",
        "estimated_phi_00_11",
        "uncorrected_01_10",
        "corrected_01_10",
        "estimated_phi_01_10",
        "e_f",
    ]);
    table.rows = rows;
    for family in ["00_11", "01_10"] {
        let unc = table.column(&format!("uncorrected_{family}")).unwrap();
        let cor = table.column(&format!("corrected_{family}")).unwrap();
        let (imin, umin) = unc
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bv), (i, v)| if *v < bv { (i, *v) } else { (bi, bv) });
        stats.insert(format!("min_uncorrected_{family}"), umin);
        stats.insert(format!("argmin_uncorrected_{family}"), phis[imin]);
        stats.insert(format!("min_corrected_{family}"), cor.iter().copied().fold(f64::INFINITY, f64::min));
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    /// `cos α|00⟩ + e^{iφ} sin α|11⟩`.
    BellMagnitude,
    /// `a|00⟩ + a01|01⟩ + e^{iφ} a|11⟩` with `a = √((1 − a01²)/2)`.
    Contaminated,
}

fn family_state(family: Family, m: f64, phi: f64) -> PureState {
    let z = Complex64::new(0.0, 0.0);
    let amps = match family {
        Family::BellMagnitude => [Complex64::new(m.cos(), 0.0), z, z, Complex64::from_polar(m.sin(), phi)],
        Family::Contaminated => {
            let a = ((1.0 - m * m).max(0.0) / 2.0).sqrt();
            [Complex64::new(a, 0.0), Complex64::new(m, 0.0), z, Complex64::from_polar(a, phi)]
        }
    };
    PureState::normalized(amps).expect("family amplitudes are nonzero")
}

fn surface(
    spec: &SweepSpec,
    ent: &Indicator,
    family: Family,
    with_model: bool,
    stats: &mut BTreeMap<String, f64>,
) -> Table {
    let mags = spec.magnitude.values();
    let phis = spec.angle.values();
    let points: Vec<(f64, f64)> = mags.iter().flat_map(|&m| phis.iter().map(move |&p| (m, p))).collect();
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&(m, phi)| {
            let psi = family_state(family, m, phi);
            let model = match family {
                Family::BellMagnitude => OscillationModel::BellMagnitude { alpha: m },
                Family::Contaminated => OscillationModel::Contaminated { a01: m },
            };
            vec![m, phi, ent.evaluate(&psi), oscillation_model(model, phi), entanglement_of_formation(&psi)]
        })
        .collect();
    let first = match family {
        Family::BellMagnitude => "alpha",
        Family::Contaminated => "a01",
    };
    let mut table = Table::new(&[first, "phi", "indicator", "model", "e_f"]);
    table.rows = rows;
    let ind = table.column("indicator").unwrap();
    if with_model {
        stats.insert("rms_indicator_minus_model".into(), rms_difference(&ind, &table.column("model").unwrap()));
    }
    stats.insert("rms_indicator_minus_e_f".into(), rms_difference(&ind, &table.column("e_f").unwrap()));
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(experiment: Experiment) -> SweepSpec {
        let mut spec = SweepSpec::new(experiment);
        spec.integration = IntegrationConfig::new(0.5, 190.0).unwrap();
        spec
    }

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!(matches!("fig3".parse::<Experiment>(), Err(Error::UnknownExperiment(_))));
    }

    #[test]
    fn axis_values_are_inclusive() {
        let v = Axis::full_turn(73).values();
        assert_eq!(v.len(), 73);
        assert_eq!(v[0], -PI);
        assert!((v[72] - PI).abs() < 1e-15);
        assert!((v[1] - v[0] - 5f64.to_radians()).abs() < 1e-15);
        assert_eq!(Axis::new(0.3, 1.0, 1).values(), vec![0.3]);
    }

    #[test]
    fn fig1_phi_columns_vanish() {
        let out = run_sweep(&SweepSpec::new(Experiment::Fig1Witness)).unwrap();
        assert_eq!(out.table.len(), 73);
        assert!(out.summary.statistics["max_abs_phi_family"] <= 1e-10);
        assert_eq!(out.summary.statistics["psi_minus_zero_crossings"], 2.0);
    }

    #[test]
    fn fig2_curves_coincide() {
        let out = run_sweep(&SweepSpec::new(Experiment::Fig2ResetWitness)).unwrap();
        assert!(out.summary.statistics["max_curve_spread"] <= 1e-10);
    }

    #[test]
    fn randomized_sweeps_need_a_seed() {
        let mut spec = quick(Experiment::Fig5RealScatter);
        spec.seed = None;
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn scatter_is_deterministic_and_records_seed() {
        let mut spec = quick(Experiment::Fig6ComplexScatter);
        spec.samples = 20;
        spec.seed = Some(42);
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a.table, b.table);
        assert_eq!(a.summary.seed, Some(42));
        assert_eq!(a.table.len(), 20);
    }

    #[test]
    fn surfaces_have_one_row_per_grid_point() {
        let mut spec = quick(Experiment::Fig10Surface);
        spec.angle = Axis::full_turn(5);
        spec.magnitude = Axis::new(0.0, 1.0, 3);
        let out = run_sweep(&spec).unwrap();
        assert_eq!(out.table.len(), 15);
        assert_eq!(out.table.columns[0], "a01");
        assert!(out.summary.statistics.contains_key("rms_indicator_minus_model"));
    }

    #[test]
    fn contaminated_family_is_normalized_with_equal_outer_magnitudes() {
        for a01 in [0.0, 0.4, 1.0] {
            let psi = family_state(Family::Contaminated, a01, 0.7);
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-14);
            assert!((psi.amplitude(0).norm() - psi.amplitude(3).norm()).abs() < 1e-14);
            assert!((psi.amplitude(1).re - a01).abs() < 1e-14);
        }
    }

    #[test]
    fn empty_axis_is_rejected() {
        let mut spec = quick(Experiment::Fig9Surface);
        spec.angle.count = 0;
        assert!(run_sweep(&spec).is_err());
    }
}
