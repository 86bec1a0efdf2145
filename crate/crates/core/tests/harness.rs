use std::fs;

use entwit::harness::{emit_csv, emit_json, run_sweep, Axis, Experiment, SweepSpec};

fn small(experiment: Experiment) -> SweepSpec {
    let mut spec = SweepSpec::new(experiment);
    spec.angle = Axis::full_turn(13);
    spec.magnitude = Axis::new(0.0, 1.0, 5);
    spec.samples = 40;
    spec
}

#[test]
fn seeded_sweeps_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    for exp in [Experiment::Fig5RealScatter, Experiment::Fig6ComplexScatter] {
        let spec = small(exp);
        let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
        for p in &paths {
            emit_csv(&run_sweep(&spec).unwrap().table, p).unwrap();
        }
        let (a, b) = (fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());
        assert!(!a.is_empty());
        assert_eq!(a, b, "{exp:?}");
    }
}

#[test]
fn witness_sweep_shape_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = SweepSpec::new(Experiment::Fig1Witness);
    spec.angle = Axis::full_turn(73);
    let out = run_sweep(&spec).unwrap();
    assert_eq!(out.table.len(), 73);
    assert!(out.table.column("phi_plus").unwrap().iter().all(|w| w.abs() <= 1e-10));
    let csv = dir.path().join("fig1.csv");
    emit_csv(&out.table, &csv).unwrap();
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 74);
    assert_eq!(text.lines().next().unwrap(), "theta,psi_minus,psi_plus,phi_minus,phi_plus");
    let json = dir.path().join("fig1.json");
    emit_json(&out.summary, &json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["statistics"]["psi_minus_zero_crossings"].as_f64(), Some(2.0));
}

#[test]
fn every_experiment_runs_at_small_size() {
    for exp in Experiment::ALL {
        let out = run_sweep(&small(exp)).unwrap_or_else(|e| panic!("{exp:?}: {e}"));
        assert!(!out.table.is_empty());
        assert_eq!(out.summary.experiment, exp);
    }
}

#[test]
fn experiment_names_parse() {
    for exp in Experiment::ALL {
        assert_eq!(exp.name().parse::<Experiment>().unwrap(), exp);
    }
    assert!("fig99".parse::<Experiment>().is_err());
}
