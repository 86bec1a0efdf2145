use std::f64::consts::TAU;

use entwit::quantum::{propagate_density, propagate_trajectory};
use entwit::schedule::{FourierSchedule, Preset};
use entwit::{
    build_hamiltonian, expectation_zz, propagate, Complex64, DensityMatrix, HamiltonianParams, IntegrationConfig,
    Matrix4c, PureState, SampledSchedule,
};
use proptest::prelude::*;

/// Exact propagator `exp(−i s H t)` from the Hermitian eigendecomposition.
fn exact_propagator(h: &Matrix4c, scale: f64, t: f64) -> Matrix4c {
    let eig = h.symmetric_eigen();
    let phases = Matrix4c::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -scale * l * t)));
    eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

fn params() -> impl Strategy<Value = HamiltonianParams> {
    prop::array::uniform5(-5e-3..5e-3f64).prop_map(HamiltonianParams::from_array)
}

fn state() -> impl Strategy<Value = PureState> {
    prop::array::uniform8(-1.0..1.0f64).prop_filter_map("nonzero", |v| {
        PureState::normalized(std::array::from_fn(|i| Complex64::new(v[2 * i], v[2 * i + 1]))).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constant_schedule_matches_matrix_exponential(p in params(), psi in state()) {
        let cfg = IntegrationConfig::default();
        let schedule = SampledSchedule::constant(p, &cfg);
        let rho = propagate(&psi, &schedule, &cfg).unwrap();
        let u = exact_propagator(&build_hamiltonian(&p).unwrap(), cfg.angular_scale, cfg.t_final);
        let expected = u * psi.density().matrix() * u.adjoint();
        let err = (rho.matrix() - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-7, "max-norm error {err:e}");
    }

    #[test]
    fn global_phase_does_not_change_the_result(p in params(), psi in state(), alpha in -10.0..10.0f64) {
        let cfg = IntegrationConfig::new(0.5, 190.0).unwrap();
        let schedule = SampledSchedule::constant(p, &cfg);
        let a = propagate(&psi, &schedule, &cfg).unwrap();
        let b = propagate(&psi.with_global_phase(alpha), &schedule, &cfg).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-15);
    }
}

#[test]
fn global_phase_invariance_is_exact_for_density_inputs() {
    // |ψ⟩⟨ψ| with the phase removed is bitwise the same input.
    let cfg = IntegrationConfig::new(0.5, 20.0).unwrap();
    let s = SampledSchedule::constant(HamiltonianParams::new(2e-3, 1e-3, 5e-4, -5e-4, 1e-3), &cfg);
    let psi = PureState::from_real([0.5, 0.5, 0.5, 0.5]).unwrap();
    let shifted = psi.with_global_phase(std::f64::consts::PI);
    let a = propagate(&psi, &s, &cfg).unwrap();
    let b = propagate(&shifted, &s, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_tunneling_term_rotates_qubit_a() {
    // Only K_A on |00⟩: ⟨σzA σzB⟩ = cos(2·s·K·t).
    let k = 2e-3;
    for scale in [1.0, TAU] {
        let cfg = IntegrationConfig::new(0.05, 190.0).unwrap().with_angular_scale(scale);
        let s = SampledSchedule::constant(HamiltonianParams::new(k, 0.0, 0.0, 0.0, 0.0), &cfg);
        let traj = propagate_trajectory(&PureState::basis(0).unwrap(), &s, &cfg).unwrap();
        for step in [0, 1000, 2345, 3800] {
            let t = step as f64 * cfg.dt;
            let zz = expectation_zz(&traj.state(step));
            assert!((zz - (2.0 * scale * k * t).cos()).abs() < 1e-9, "scale {scale}, t {t}: {zz}");
        }
    }
}

#[test]
fn conservation_along_every_stored_step() {
    let cfg = IntegrationConfig::default();
    let schedule = Preset::EntanglementTrained.fourier().to_sampled(&cfg);
    let psi = PureState::from_polar([0.3, 0.5, 0.6, (1.0f64 - 0.7).sqrt()], [0.4, 1.3, -2.2]).unwrap();
    let traj = propagate_trajectory(&psi, &schedule, &cfg).unwrap();
    assert_eq!(traj.len(), 3801);
    for i in 0..traj.len() {
        let rho = traj.state(i);
        assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-9);
        assert!(rho.hermiticity_error() <= 1e-9);
    }
    assert!((traj.final_state().purity() - 1.0).abs() <= 1e-6);
}

#[test]
fn zero_schedule_and_mixed_state_are_fixed_points() {
    let cfg = IntegrationConfig::new(0.25, 50.0).unwrap();
    let zero = SampledSchedule::constant(HamiltonianParams::default(), &cfg);
    let psi = PureState::from_polar([0.5, 0.5, 0.5, 0.5], [0.1, 0.2, 0.3]).unwrap();
    assert_eq!(propagate(&psi, &zero, &cfg).unwrap(), psi.density());
    let busy = FourierSchedule::constant(HamiltonianParams::new(3e-3, 1e-3, 2e-3, 1e-3, 4e-3)).to_sampled(&cfg);
    let mixed = DensityMatrix::maximally_mixed();
    assert!(propagate_density(&mixed, &busy, &cfg).unwrap().max_abs_diff(&mixed) < 1e-15);
}

#[test]
fn schedule_shorter_than_run_is_rejected() {
    let short = IntegrationConfig::new(0.05, 100.0).unwrap();
    let cfg = IntegrationConfig::default();
    let s = SampledSchedule::constant(HamiltonianParams::default(), &short);
    assert!(propagate(&PureState::basis(0).unwrap(), &s, &cfg).is_err());
}

#[test]
fn published_entanglement_schedule_reproduces_training_pattern() {
    let cfg = IntegrationConfig::default();
    let s = Preset::EntanglementTrained.fourier().to_sampled(&cfg);
    let out =
        |amps: [f64; 4]| expectation_zz(&propagate(&PureState::from_real(amps).unwrap(), &s, &cfg).unwrap()).powi(2);
    assert!(out([1.0, 0.0, 0.0, 1.0]) >= 0.97);
    assert!(out([1.0, 1.0, 1.0, 1.0]) <= 1e-2);
    assert!(out([0.0, 0.0, 0.5, 1.0]) <= 1e-2);
    assert!((out([1.0, 1.0, 1.0, 0.0]) - 0.44).abs() <= 0.03);
}
