//! Trained schedules shared by the tests in one binary. Training is
//! deterministic, so every binary sees the same schedules.

#![allow(dead_code)]

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use entwit::qnn::{
    make_entanglement_training_set, make_phase_training_set, train, TrainingConfig, TrainingReport, PHASE_LEARNING_RATE,
};
use entwit::schedule::Preset;
use entwit::{IntegrationConfig, SampledSchedule};

/// RMS the shared schedules are trained to.
pub const TRAINED_RMS: f64 = 1e-3;

pub struct Trained {
    pub report: TrainingReport,
    pub elapsed: Duration,
}

impl Trained {
    pub fn schedule(&self) -> &SampledSchedule {
        &self.report.schedule
    }
}

pub fn entanglement_config() -> TrainingConfig {
    TrainingConfig { rms_stop: TRAINED_RMS, ..Default::default() }
}

pub fn phase_config() -> TrainingConfig {
    TrainingConfig { rms_stop: TRAINED_RMS, learning_rate: PHASE_LEARNING_RATE, ..Default::default() }
}

fn run(samples: &[entwit::qnn::TrainingSample], preset: Preset, tcfg: TrainingConfig) -> Trained {
    let cfg = IntegrationConfig::default();
    let init = preset.fourier().to_sampled(&cfg);
    let start = Instant::now();
    let report = train(samples, &init, &tcfg, &cfg).expect("training runs");
    Trained { report, elapsed: start.elapsed() }
}

pub fn entanglement() -> &'static Trained {
    static CELL: OnceLock<Trained> = OnceLock::new();
    CELL.get_or_init(|| run(&make_entanglement_training_set(), Preset::EntanglementInit, entanglement_config()))
}

pub fn phase() -> &'static Trained {
    static CELL: OnceLock<Trained> = OnceLock::new();
    CELL.get_or_init(|| run(&make_phase_training_set(11).unwrap(), Preset::PhaseInit, phase_config()))
}
