use std::process::Command;

fn semitensor() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semitensor"))
}

#[test]
fn csv_run_writes_one_row_per_seed() {
    let path = std::env::temp_dir().join(format!("semitensor-run-{}.csv", std::process::id()));
    let status = semitensor()
        .args(["--bench", "spmm", "--n", "64", "--density", "0.05", "--procs", "4"])
        .args(["--seed", "10", "--seeds", "2", "--reps", "3", "--verify", "on", "--format", "csv"])
        .arg("--out")
        .arg(&path)
        .env(semitensor_cli::WORKERS_ENV, "2")
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("spmm,10,64,8,"));
    assert!(lines[2].starts_with("spmm,11,64,8,"));
}

#[test]
fn json_goes_to_standard_output() {
    let output = semitensor()
        .args(["--bench", "mp3", "--n", "4", "--m", "2", "--density", "0.5"])
        .args(["--procs", "2", "--memory", "100000", "--reps", "1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value[0]["config"]["memory"], 100000.0);
    assert!(value[0]["energy"].is_number());
}

#[test]
fn zero_seeds_fail_without_creating_the_output() {
    let path = std::env::temp_dir().join(format!("semitensor-none-{}.json", std::process::id()));
    let output = semitensor()
        .args(["--bench", "apsp", "--n", "8", "--seeds", "0", "--verify", "off"])
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("no seeds"));
    assert!(!path.exists());
}

#[test]
fn invalid_worker_count_is_rejected() {
    let output = semitensor()
        .args(["--bench", "spmm", "--n", "16", "--reps", "1"])
        .env(semitensor_cli::WORKERS_ENV, "many")
        .output()
        .unwrap();
    assert!(!output.status.success());
}
