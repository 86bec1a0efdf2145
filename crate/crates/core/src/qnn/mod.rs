//! The trainable network: output functionals, adjoint gradients and the
//! gradient-descent training loop for the entanglement and phase
//! indicators.

mod data;
mod gradient;
mod train;

pub use data::{extended_phase_target, make_entanglement_training_set, make_phase_training_set, TrainingSample};
pub use gradient::{finite_difference_entry, finite_difference_gradient, loss_gradient, LossGradient};
pub use train::{
    train, GradientMethod, SampleOutcome, TrainingConfig, TrainingReport, UpdateMode, DEFAULT_LEARNING_RATE,
    PHASE_LEARNING_RATE,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quantum::{
    expectation_zz, propagate, DensityMatrix, IntegrationConfig, Matrix4c, PureState, TransferMap, ZZ_DIAG,
};
use crate::schedule::SampledSchedule;

/// The final-time measurement read out as the network output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFunctional {
    /// `⟨σ_zA σ_zB⟩²`, the entanglement indicator.
    ZzCorrelationSquared,
    /// `⟨b|ρ|b⟩`, the phase indicator.
    ProjectionProbability(usize),
}

impl OutputFunctional {
    pub fn validate(&self) -> Result<()> {
        match self {
            OutputFunctional::ProjectionProbability(b) if *b > 3 => {
                Err(invalid(format!("basis index {b} out of range 0..=3")))
            }
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> f64 {
        match *self {
            OutputFunctional::ZzCorrelationSquared => expectation_zz(rho).powi(2),
            OutputFunctional::ProjectionProbability(b) => rho.matrix()[(b, b)].re,
        }
    }

    /// Output and `∂L/∂ρ` for `L = (target − output)²`, where the derivative
    /// is the matrix `Λ` with `dL = Re tr(Λ† dρ)`.
    pub(crate) fn loss_seed(&self, rho: &Matrix4c, target: f64) -> (f64, Matrix4c) {
        let rho = DensityMatrix::from_matrix_unchecked(*rho);
        let out = self.evaluate(&rho);
        let dl_dout = -2.0 * (target - out);
        let mut seed = Matrix4c::zeros();
        match *self {
            OutputFunctional::ZzCorrelationSquared => {
                let x = expectation_zz(&rho);
                for i in 0..4 {
                    seed[(i, i)].re = dl_dout * 2.0 * x * ZZ_DIAG[i];
                }
            }
            OutputFunctional::ProjectionProbability(b) => seed[(b, b)].re = dl_dout,
        }
        (out, seed)
    }
}

/// Propagates `input` under `schedule` and reads out `functional`.
pub fn evaluate_indicator(
    input: &PureState,
    schedule: &SampledSchedule,
    functional: OutputFunctional,
    cfg: &IntegrationConfig,
) -> Result<f64> {
    functional.validate()?;
    Ok(functional.evaluate(&propagate(input, schedule, cfg)?))
}

/// An indicator with its propagation precomputed as a [`TransferMap`], for
/// evaluating many inputs against one schedule.
#[derive(Debug, Clone)]
pub struct Indicator {
    map: TransferMap,
    functional: OutputFunctional,
}

impl Indicator {
    pub fn new(schedule: &SampledSchedule, functional: OutputFunctional, cfg: &IntegrationConfig) -> Result<Self> {
        functional.validate()?;
        Ok(Self { map: TransferMap::new(schedule, cfg)?, functional })
    }

    pub fn functional(&self) -> OutputFunctional {
        self.functional
    }

    /// Same schedule, different read-out.
    pub fn with_functional(&self, functional: OutputFunctional) -> Result<Self> {
        functional.validate()?;
        Ok(Self { map: self.map.clone(), functional })
    }

    pub fn evaluate(&self, input: &PureState) -> f64 {
        self.functional.evaluate(&self.map.apply_pure(input))
    }

    pub fn evaluate_density(&self, rho: &DensityMatrix) -> f64 {
        self.functional.evaluate(&self.map.apply(rho))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::HamiltonianParams;
    use crate::schedule::FourierSchedule;

    #[test]
    fn zero_schedule_leaves_zz_at_one() {
        let cfg = IntegrationConfig::new(0.5, 20.0).unwrap();
        let zero = SampledSchedule::constant(HamiltonianParams::default(), &cfg);
        let out =
            evaluate_indicator(&PureState::basis(0).unwrap(), &zero, OutputFunctional::ZzCorrelationSquared, &cfg)
                .unwrap();
        assert_eq!(out, 1.0);
    }

    #[test]
    fn compiled_indicator_matches_direct_propagation() {
        let cfg = IntegrationConfig::new(0.25, 40.0).unwrap();
        let sched = FourierSchedule::constant(HamiltonianParams::new(3e-3, 2e-3, 1e-3, -2e-3, 4e-3)).to_sampled(&cfg);
        let psi = PureState::from_polar([0.3, 0.5, 0.1, (1.0f64 - 0.35).sqrt()], [0.4, -1.0, 2.5]).unwrap();
        for f in [OutputFunctional::ZzCorrelationSquared, OutputFunctional::ProjectionProbability(2)] {
            let direct = evaluate_indicator(&psi, &sched, f, &cfg).unwrap();
            let fast = Indicator::new(&sched, f, &cfg).unwrap().evaluate(&psi);
            assert!((direct - fast).abs() < 1e-13);
        }
    }

    #[test]
    fn bad_basis_index_is_rejected() {
        let cfg = IntegrationConfig::new(0.5, 1.0).unwrap();
        let s = SampledSchedule::constant(HamiltonianParams::default(), &cfg);
        let psi = PureState::basis(0).unwrap();
        assert!(evaluate_indicator(&psi, &s, OutputFunctional::ProjectionProbability(4), &cfg).is_err());
    }
}
