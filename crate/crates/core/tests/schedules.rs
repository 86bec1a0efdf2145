use std::f64::consts::TAU;

use entwit::quantum::Param;
use entwit::schedule::{fit_fourier, fit_series, FourierSeries, Preset};
use entwit::{FourierSchedule, HamiltonianParams, IntegrationConfig, SampledSchedule, Schedule};
use proptest::prelude::*;

fn series() -> impl Strategy<Value = FourierSeries> {
    (-5e-3..5e-3f64, -3e-3..3e-3f64, -3e-3..3e-3f64, 0.02..0.3f64)
        .prop_map(|(a0, a1, b1, omega)| FourierSeries::one_harmonic(a0, a1, b1, omega))
}

fn schedule() -> impl Strategy<Value = FourierSchedule> {
    (series(), series(), series(), series(), series()).prop_map(|(k_a, k_b, eps_a, eps_b, zeta)| FourierSchedule {
        k_a,
        k_b,
        eps_a,
        eps_b,
        zeta,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fit_rms_is_invariant_under_time_shift(s in series(), shift in -200.0..200.0f64, wobble in 1e-5..1e-3f64) {
        // A second incommensurate component keeps the residual nonzero.
        let times: Vec<f64> = (0..1521).map(|i| i as f64 * 0.125).collect();
        let values: Vec<f64> = times.iter().map(|&t| s.eval(t) + wobble * (0.731 * t).sin()).collect();
        let shifted: Vec<f64> = times.iter().map(|t| t + shift).collect();
        let range = (TAU / 760.0, TAU / 2.5);
        let a = fit_series(&times, &values, 1, range).unwrap();
        let b = fit_series(&shifted, &values, 1, range).unwrap();
        prop_assert!((a.rms - b.rms).abs() <= 1e-6, "{} vs {}", a.rms, b.rms);
    }

    #[test]
    fn fit_recovers_single_harmonic_schedules(f in schedule()) {
        let cfg = IntegrationConfig::new(0.125, 190.0).unwrap();
        let fit = fit_fourier(&f.to_sampled(&cfg), 1).unwrap();
        for p in Param::ALL {
            let (got, want) = (fit.schedule.series(p), f.series(p));
            prop_assert!(fit.rms.get(p) <= 1e-10, "{p:?} rms {}", fit.rms.get(p));
            for t in [0.0, 37.0, 95.5, 190.0] {
                prop_assert!((got.eval(t) - want.eval(t)).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn json_round_trip(f in schedule(), steps in 1usize..400) {
        let fourier = Schedule::Fourier(f);
        prop_assert_eq!(Schedule::from_json(&fourier.to_json().unwrap()).unwrap(), fourier);
        let cfg = IntegrationConfig::new(20.0 / steps as f64, 20.0).unwrap();
        let sampled = Schedule::Sampled(f.to_sampled(&cfg));
        prop_assert_eq!(Schedule::from_json(&sampled.to_json().unwrap()).unwrap(), sampled);
    }
}

#[test]
fn constant_schedule_fits_as_degenerate() {
    let cfg = IntegrationConfig::new(0.5, 190.0).unwrap();
    let s = SampledSchedule::constant(HamiltonianParams::new(1e-3, 2e-3, 0.0, -1e-3, 4e-3), &cfg);
    let fit = fit_fourier(&s, 2).unwrap();
    assert_eq!(fit.degenerate.len(), 5);
    assert!((fit.schedule.zeta.a0 - 4e-3).abs() < 1e-15);
    assert_eq!(fit.schedule.zeta.omega, 0.0);
}

#[test]
fn presets_evaluate_at_origin() {
    let ent = Preset::EntanglementTrained.fourier().evaluate(0.0);
    assert!((ent.k_a - (0.0019495 - 1.002e-6 + 2.981e-6)).abs() < 1e-15);
    assert_eq!(ent.k_a, ent.k_b);
    let phase = Preset::PhaseTrained.fourier().evaluate(0.0);
    assert!(phase.zeta.is_finite());
}

#[test]
fn preset_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for preset in [Preset::EntanglementTrained, Preset::PhaseTrained, Preset::EntanglementInit, Preset::PhaseInit] {
        let path = dir.path().join(format!("{}.json", preset.name()));
        preset.schedule().save(&path).unwrap();
        assert_eq!(Schedule::load(&path).unwrap(), preset.schedule());
    }
}

#[test]
fn sampled_evaluation_is_on_the_half_step_grid() {
    let cfg = IntegrationConfig::new(0.5, 10.0).unwrap();
    let s = SampledSchedule::from_fn(&cfg, |t| HamiltonianParams::new(t, 0.0, 0.0, 0.0, -t));
    let p = s.evaluate(3.25).unwrap();
    assert_eq!((p.k_a, p.zeta), (3.25, -3.25));
    assert!(s.evaluate(3.1).is_err());
    assert!(s.evaluate(10.5).is_err());
}
