use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn inertphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inertphase"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn shipped(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scenario_file(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("scenario.toml");
    fs::write(&path, text).unwrap();
    path
}

const RING: &str = r#"
id = "cli-ring"
kind = "ring"
[grid]
t_end_s = 1.0
n_steps = N_STEPS
[field]
profile = "raised-cosine"
bmax_t = BMAX
start_s = START
duration_s = 0.5
[ring]
radius_m = 0.05
current_a = 2.0
device_mass_kg = 0.05
fluid_mass_kg = 0.01
fluid_speed_m_per_s = 2.0
"#;

fn ring_text(n_steps: usize, bmax: f64, start: f64) -> String {
    RING.replace("N_STEPS", &n_steps.to_string())
        .replace("BMAX", &format!("{bmax:?}"))
        .replace("START", &format!("{start:?}"))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn each_subcommand_runs_its_shipped_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_string_lossy().into_owned();
    for (cmd, file, id) in [
        ("neutron", "neutron_pulse.toml", "neutron-pulse"),
        ("ring", "ring_pulse.toml", "ring-pulse"),
        ("compare", "compare_pulse.toml", "compare-pulse"),
        ("sweep", "sweep_amplitude.toml", "sweep-amplitude"),
    ] {
        let out = inertphase(&[
            cmd,
            "--config",
            &shipped(file),
            "--out",
            &out_dir,
            "--workers",
            "2",
        ]);
        assert_eq!(code(&out), 0, "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.path().join(format!("{id}_summary.csv")).is_file());
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(stdout.contains(id), "{stdout}");
    }
}

#[test]
fn validate_reports_without_writing() {
    let out = inertphase(&["validate", "--config", &shipped("sweep_amplitude.toml")]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("5 sub-runs"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&inertphase(&[])), 2);
    assert_eq!(code(&inertphase(&["neutron"])), 2);
    assert_eq!(code(&inertphase(&["bogus", "--config", "x"])), 2);
}

#[test]
fn malformed_toml_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(dir.path(), "kind = \"ring\"\n[grid\n");
    let out = inertphase(&["ring", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn field_on_at_start_exits_4_naming_the_premise() {
    let dir = tempfile::tempdir().unwrap();
    let text = ring_text(1024, 0.5, -0.1);
    let path = scenario_file(dir.path(), &text);
    let out = inertphase(&["ring", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("field must vanish at start"));
}

#[test]
fn subcommand_kind_mismatch_exits_4() {
    let out = inertphase(&["neutron", "--config", &shipped("ring_pulse.toml")]);
    assert_eq!(code(&out), 4);
}

#[test]
fn coarse_grid_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(dir.path(), &ring_text(8, 0.5, 0.1));
    let out = inertphase(&[
        "ring",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 5, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn stalling_fluid_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario_file(dir.path(), &ring_text(2048, 50.0, 0.1));
    let out = inertphase(&[
        "ring",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 6, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_config_exits_8() {
    let out = inertphase(&["validate", "--config", "/nonexistent/scenario.toml"]);
    assert_eq!(code(&out), 8);
}
