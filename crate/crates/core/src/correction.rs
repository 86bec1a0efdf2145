//! Two-copy phase correction of the entanglement indicator.
//!
//! The entanglement indicator responds to the relative phase of a state as
//! well as to its entanglement. One copy of the state goes through the phase
//! indicator, whose output `cos²(φ/2)` is inverted to recover `φ`. A second
//! copy is rotated by `−φ` on the same basis state and then measured with the
//! entanglement indicator.
//!
//! Basis index `b` selects the phase of `|b⟩` relative to its complement
//! `|b ⊕ 3⟩`: `3` is the `|00⟩/|11⟩` pair, `2` and `1` the `|01⟩/|10⟩` pair.
//! For `b ∈ {1, 2}` the copy passes through a local bit flip that maps the
//! pair onto `|00⟩/|11⟩` before the phase indicator, which is trained only on
//! that pair. The flip is local, so it leaves the entanglement unchanged.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measures::{entanglement_of_formation_from_concurrence, pure_concurrence};
use crate::qnn::{Indicator, OutputFunctional};
use crate::quantum::{IntegrationConfig, PureState};
use crate::schedule::SampledSchedule;

/// Largest excursion of an indicator output outside `[0, 1]` that is
/// clamped rather than rejected.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

/// How the sign of `φ` is recovered, since `cos²(φ/2)` is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignResolution {
    /// Spend one more copy: rotate it by `−π/2` first, so the phase
    /// indicator reads `(1 + sin φ)/2`, whose side of ½ gives the sign.
    #[default]
    QuadratureProbe,
    /// Take `φ ≥ 0` and leave the ambiguity flag set.
    AssumePositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    /// Estimated phase: in `[0, π]` when the sign is unresolved, otherwise
    /// in `[−π, π]`.
    pub phi: f64,
    pub raw_output: f64,
    /// Phase-indicator output of the quadrature copy, if one was used.
    pub quadrature_output: Option<f64>,
    /// Set when the sign of `phi` was assumed rather than measured.
    pub ambiguity_flag: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionResult {
    pub uncorrected: f64,
    pub corrected: f64,
    /// Entanglement of formation of the input.
    pub oracle: f64,
    pub estimate: PhaseEstimate,
}

fn check_index(b: usize) -> Result<()> {
    if (1..=3).contains(&b) {
        Ok(())
    } else {
        Err(invalid(format!("phase basis index must be 1, 2 or 3, got {b}")))
    }
}

fn clamp_unit(x: f64) -> Result<f64> {
    if !(-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&x) {
        return Err(invalid(format!("indicator output {x} outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Inverts `output = cos²(φ/2)` on `[0, π]`.
pub fn invert_phase_output(output: f64) -> Result<f64> {
    Ok(2.0 * clamp_unit(output)?.sqrt().acos())
}

/// Multiplies the amplitude of `|basis_index⟩` by `e^{−iφ}`.
pub fn phase_rotation(input: &PureState, basis_index: usize, phi: f64) -> Result<PureState> {
    if basis_index > 3 {
        return Err(invalid(format!("basis index {basis_index} out of range 0..=3")));
    }
    let mut a = *input.amplitudes();
    a[basis_index] *= Complex64::from_polar(1.0, -phi);
    Ok(PureState::from_amplitudes_unchecked(a))
}

/// Maps the `|b⟩/|b ⊕ 3⟩` pair onto `|11⟩/|00⟩` with a local bit flip.
fn relabel(input: &PureState, b: usize) -> PureState {
    let flip = b ^ 3;
    let a = input.amplitudes();
    PureState::from_amplitudes_unchecked(std::array::from_fn(|i| a[i ^ flip]))
}

/// The phase and entanglement indicators compiled for repeated use.
#[derive(Debug, Clone)]
pub struct Corrector {
    phase: Indicator,
    entanglement: Indicator,
    resolution: SignResolution,
}

impl Corrector {
    pub fn new(
        phase_schedule: &SampledSchedule,
        ent_schedule: &SampledSchedule,
        cfg: &IntegrationConfig,
        resolution: SignResolution,
    ) -> Result<Self> {
        Ok(Self {
            phase: Indicator::new(phase_schedule, OutputFunctional::ProjectionProbability(3), cfg)?,
            entanglement: Indicator::new(ent_schedule, OutputFunctional::ZzCorrelationSquared, cfg)?,
            resolution,
        })
    }

    pub fn resolution(&self) -> SignResolution {
        self.resolution
    }

    /// Raw phase-indicator output for the `|b⟩/|b ⊕ 3⟩` pair.
    pub fn phase_output(&self, input: &PureState, basis_index: usize) -> Result<f64> {
        check_index(basis_index)?;
        Ok(self.phase.evaluate(&relabel(input, basis_index)))
    }

    pub fn entanglement_output(&self, input: &PureState) -> f64 {
        self.entanglement.evaluate(input)
    }

    pub fn estimate_phase(&self, input: &PureState, basis_index: usize) -> Result<PhaseEstimate> {
        let raw_output = self.phase_output(input, basis_index)?;
        let magnitude = invert_phase_output(raw_output)?;
        match self.resolution {
            SignResolution::AssumePositive => {
                Ok(PhaseEstimate { phi: magnitude, raw_output, quadrature_output: None, ambiguity_flag: true })
            }
            SignResolution::QuadratureProbe => {
                let probe = phase_rotation(input, basis_index, FRAC_PI_2)?;
                let q = clamp_unit(self.phase_output(&probe, basis_index)?)?;
                let phi = if q < 0.5 { -magnitude } else { magnitude };
                Ok(PhaseEstimate { phi, raw_output, quadrature_output: Some(q), ambiguity_flag: false })
            }
        }
    }

    pub fn correct(&self, input: &PureState, basis_index: usize) -> Result<CorrectionResult> {
        let estimate = self.estimate_phase(input, basis_index)?;
        let rotated = phase_rotation(input, basis_index, estimate.phi)?;
        Ok(CorrectionResult {
            uncorrected: self.entanglement.evaluate(input),
            corrected: self.entanglement.evaluate(&rotated),
            oracle: entanglement_of_formation_from_concurrence(pure_concurrence(input)),
            estimate,
        })
    }
}

/// Runs the phase indicator on one copy and inverts its output.
pub fn estimate_phase(
    input: &PureState,
    basis_index: usize,
    phase_schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
    resolution: SignResolution,
) -> Result<PhaseEstimate> {
    check_index(basis_index)?;
    let phase = Indicator::new(phase_schedule, OutputFunctional::ProjectionProbability(3), cfg)?;
    // Only the phase indicator is needed; reuse it for the unused slot.
    let corrector = Corrector { entanglement: phase.clone(), phase, resolution };
    corrector.estimate_phase(input, basis_index)
}

/// The full two-copy pipeline: estimate the phase, rotate a second copy back
/// by it and measure the entanglement indicator, alongside the uncorrected
/// value and the entanglement of formation.
pub fn corrected_entanglement(
    input: &PureState,
    basis_index: usize,
    phase_schedule: &SampledSchedule,
    ent_schedule: &SampledSchedule,
    cfg: &IntegrationConfig,
    resolution: SignResolution,
) -> Result<CorrectionResult> {
    check_index(basis_index)?;
    Corrector::new(phase_schedule, ent_schedule, cfg, resolution)?.correct(input, basis_index)
}

/// Empirical surfaces for the residual phase oscillation of the trained
/// entanglement indicator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OscillationModel {
    /// `sin²(2α)·cos²φ` for `cos α|00⟩ + e^{iφ} sin α|11⟩`.
    BellMagnitude { alpha: f64 },
    /// `0.9·cos²(1.3·a01)·cos²φ` for the family with a `|01⟩` admixture.
    Contaminated { a01: f64 },
}

pub fn oscillation_model(model: OscillationModel, phi: f64) -> f64 {
    let c = phi.cos().powi(2);
    match model {
        OscillationModel::BellMagnitude { alpha } => (2.0 * alpha).sin().powi(2) * c,
        OscillationModel::Contaminated { a01 } => 0.9 * (1.3 * a01).cos().powi(2) * c,
    }
}
