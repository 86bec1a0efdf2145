use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use entwit::schedule::{FourierFit, Preset};
use entwit::Schedule;
use serde_json::Value;

fn entwit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entwit"))
        .args(args)
        .current_dir(dir)
        .env_remove("ENTWIT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn eval_reports_indicator_and_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let bell = entwit(dir.path(), &["eval", "--state", "0.70710678118654752,0,0,0.70710678118654752"]);
    assert_eq!(code(&bell), 0);
    let v = stdout_json(&bell);
    assert!(v["indicator"].as_f64().unwrap() > 0.97);
    assert!((v["entanglement_of_formation"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let product = stdout_json(&entwit(dir.path(), &["eval", "--state", "1,0,0,0"]));
    assert_eq!(product["entanglement_of_formation"].as_f64().unwrap(), 0.0);

    let partial = stdout_json(&entwit(dir.path(), &["eval", "--state", "1,1,1,0", "--normalize"]));
    assert!((partial["entanglement_of_formation"].as_f64().unwrap() - 0.55).abs() < 0.005);

    let complex = entwit(dir.path(), &["eval", "--state", "0.5,0.5j,-0.5,-0.5j", "--functional", "p3"]);
    assert_eq!(code(&complex), 0);
    assert!(stdout_json(&complex)["schedule"].as_str().unwrap().contains("phase_trained"));
}

#[test]
fn bad_states_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for state in ["1,1,1,0", "0,0,0,0", "1,0,0", "1,x,0,0"] {
        let out = entwit(dir.path(), &["eval", "--state", state]);
        assert_eq!(code(&out), 2, "{state}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(code(&entwit(dir.path(), &["eval", "--state", "0,0,0,0", "--normalize"])), 2);
}

#[test]
fn zero_epoch_training_writes_report_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = entwit(dir.path(), &["train", "entanglement", "--max-epochs", "0"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["initial_rms"], v["final_rms"]);
    assert_eq!(v["converged"], false);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("entanglement_report.json")).unwrap()).unwrap();
    assert_eq!(report["rms_history"].as_array().unwrap().len(), 1);
    assert!(Schedule::load(&dir.path().join("entanglement_schedule.json")).is_ok());
}

#[test]
fn training_reaches_target_error() {
    let dir = tempfile::tempdir().unwrap();
    for target in ["entanglement", "phase"] {
        let out = entwit(dir.path(), &["train", target, "--rms-stop", "1e-3"]);
        assert_eq!(code(&out), 0, "{target}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout_json(&out)["final_rms"].as_f64().unwrap() <= 1e-3);
    }
    let phase: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("phase_report.json")).unwrap()).unwrap();
    assert_eq!(phase["initial_learning_rate"].as_f64(), Some(entwit::qnn::PHASE_LEARNING_RATE));

    let fit = entwit(dir.path(), &["fit", "entanglement_schedule.json"]);
    assert_eq!(code(&fit), 0);
    assert!(stdout_json(&fit)["rms"]["zeta"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), r#"{"training": {"max_epochs": 0}, "out_dir": "from_config"}"#).unwrap();
    let out = entwit(dir.path(), &["--config", "cfg.json", "train", "entanglement"]);
    assert_eq!(code(&out), 1);
    assert!(dir.path().join("from_config/entanglement_report.json").exists());

    let out =
        entwit(dir.path(), &["--config", "cfg.json", "train", "entanglement", "--max-epochs", "1", "--rms-stop", "10"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["epochs"], 0);

    fs::write(dir.path().join("bad.json"), r#"{"max_epochs": 3}"#).unwrap();
    assert_eq!(code(&entwit(dir.path(), &["--config", "bad.json", "eval", "--state", "1,0,0,0"])), 2);
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = entwit(dir.path(), &["sweep", "fig1_witness"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["experiment"], "fig1_witness");
    let csv = fs::read_to_string(dir.path().join("fig1_witness.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "theta,psi_minus,psi_plus,phi_minus,phi_plus");
    assert_eq!(csv.lines().count(), 74);
    assert!(dir.path().join("fig1_witness.json").exists());

    let unknown = entwit(dir.path(), &["sweep", "fig99"]);
    assert_eq!(code(&unknown), 2);
}

#[test]
fn sweeps_are_deterministic_and_honor_out_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for sub in ["a", "b"] {
        let out = Command::new(env!("CARGO_BIN_EXE_entwit"))
            .args(["sweep", "fig6_complex_scatter", "--samples", "50", "--seed", "9"])
            .current_dir(dir.path())
            .env("ENTWIT_OUT_DIR", dir.path().join(sub))
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        files.push(fs::read(dir.path().join(sub).join("fig6_complex_scatter.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn fit_recovers_preset_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let dump = entwit(dir.path(), &["dump-preset", "entanglement_trained", "--sampled", "--output", "ent.json"]);
    assert_eq!(code(&dump), 0);
    let out = entwit(dir.path(), &["fit", "ent.json", "--harmonics", "2"]);
    assert_eq!(code(&out), 0);
    let fit: FourierFit = serde_json::from_str(&fs::read_to_string(dir.path().join("ent_fit.json")).unwrap()).unwrap();
    let published = Preset::EntanglementTrained.fourier();
    for t in [0.0, 50.0, 123.45, 190.0] {
        let (a, b) = (fit.schedule.evaluate(t), published.evaluate(t));
        for (x, y) in a.to_array().iter().zip(b.to_array()) {
            assert!((x - y).abs() <= 1e-8, "t = {t}: {x} vs {y}");
        }
    }

    let init = entwit(dir.path(), &["dump-preset", "phase_init", "--sampled", "--output", "init.json"]);
    assert_eq!(code(&init), 0);
    let fit = entwit(dir.path(), &["fit", "init.json"]);
    let v = stdout_json(&fit);
    assert!(v["rms"].as_object().unwrap().values().all(|r| r.as_f64() == Some(0.0)));
    assert_eq!(code(&entwit(dir.path(), &["fit", "missing.json"])), 1);
}

#[test]
fn dump_preset_prints_loadable_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = entwit(dir.path(), &["dump-preset", "phase_trained"]);
    assert_eq!(code(&out), 0);
    let schedule = Schedule::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(schedule, Preset::PhaseTrained.schedule());
}

#[test]
fn correct_reports_estimate_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = entwit(dir.path(), &["correct", "--state", "0.70710678118654752,0,0,0.70710678118654752"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["oracle"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(v["estimate"]["quadrature_output"].is_number());
    let bad = entwit(dir.path(), &["correct", "--state", "1,0,0,0", "--basis-index", "0"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn every_subcommand_has_help() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["train", "eval", "sweep", "fit", "correct", "dump-preset"] {
        let out = entwit(dir.path(), &[sub, "--help"]);
        assert_eq!(code(&out), 0, "{sub}");
        assert!(!out.stdout.is_empty());
    }
}
