//! Shared fixtures for the criterion benchmarks.

use entwit::qnn::{make_entanglement_training_set, TrainingSample};
use entwit::schedule::Preset;
use entwit::{IntegrationConfig, SampledSchedule};

/// The trained entanglement preset sampled on the default grid, plus the
/// Bell training sample.
pub fn entanglement_fixture() -> (SampledSchedule, IntegrationConfig, TrainingSample) {
    let cfg = IntegrationConfig::default();
    let schedule = Preset::EntanglementTrained.fourier().to_sampled(&cfg);
    (schedule, cfg, make_entanglement_training_set()[0])
}
