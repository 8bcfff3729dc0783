use std::process::{Command, Output};

fn plurival(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plurival"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn jumping_number_of_coordinate_against_diagonal_weight() {
    let o = plurival(&["jump", "--g", "1,0", "--a", "2/1,2/1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3/2");
}

#[test]
fn log_canonical_threshold_json() {
    let o = plurival(&["lct", "--weight", "1:1,0;0,2", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("\"3/2\""), "{text}");
}

#[test]
fn invalid_direction_exits_one_and_names_constraint() {
    let o = plurival(&["jump", "--g", "1,0", "--a", "2/1,3/1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("1/a_j"), "{}", stderr(&o));
    let projected = plurival(&["jump", "--g", "1,0", "--a", "1,1", "--project"]);
    assert_eq!(projected.status.code(), Some(0), "{}", stderr(&projected));
    assert_eq!(stdout(&projected).trim(), "3/2");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(plurival(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(plurival(&["jump", "--g", "x,y", "--a", "2,2"]).status.code(), Some(1));
    let o = plurival(&["integral", "--a", "2,2", "--psi", "1,0", "--samples", "10000"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn capacity_errors_exit_two() {
    let o = plurival(&["mideal", "--weight", "1:1,0;0,1", "--t", "1000000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("capacity"), "{}", stderr(&o));
    let o = plurival(&["green", "--z", "0.5,0.5,0.5,0.5", "--m", "400:400"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tian_reports_breakpoints_and_domain_failures() {
    let o = plurival(&["tian", "--f", "1,1", "--v", "1:1,0;0,2", "--range", "0:3", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "breakpoint,value,slope\n0,3/2,3/2\n3,6,3/2\n");
    let o = plurival(&["tian", "--f", "0,1", "--v", "1:1,0;0,2", "--range", "-1:4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("t = -1"), "{}", stderr(&o));
}

#[test]
fn closed_form_ratio_csv() {
    let o = plurival(&["integral", "--a", "2,2", "--psi", "1,0", "--t-grid", "1:4:2", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "t,mass,moment,ratio,stderr");
    let ratio = |line: &str| line.split(',').nth(3).unwrap().parse::<f64>().unwrap();
    assert!((ratio(rows[1]) - 1.0).abs() < 1e-12);
    assert!((ratio(rows[2]) - 0.625).abs() < 1e-12);
}

#[test]
fn seeded_monte_carlo_is_byte_identical() {
    let args = |workers: &'static str| {
        [
            "integral", "--a", "2,2", "--psi", "1,0", "--t-grid", "1:4:2", "--samples", "20000", "--seed", "7",
            "--workers", workers, "--output", "csv",
        ]
    };
    let first = plurival(&args("3"));
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let again = plurival(&args("3"));
    let other = plurival(&args("1"));
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, other.stdout);
}

#[test]
fn verify_single_suite_passes() {
    let o = plurival(&["verify", "--suite", "valuation"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"), "{}", stdout(&o));
}

#[test]
fn verification_commands_report_success() {
    let o = plurival(&["divides", "--f", "2,3", "--g", "1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = plurival(&["thmA", "--ideal", "1,0;0,2", "--weight", "1:1,0;0,1", "--res", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn job_inline_and_from_file() {
    let o = plurival(&["run", "--job", r#"{"command":"jump","g":"1,0","a":"2/1,2/1"}"#]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3/2");

    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    let out = dir.path().join("out.json");
    std::fs::write(&job, r#"{"command":"lct","a":["2","2"]}"#).unwrap();
    let o = plurival(&[
        "--output",
        "json",
        "--out",
        out.to_str().unwrap(),
        "run",
        "--job",
        job.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(written.to_string().contains("\"1\""), "{written}");
}

#[test]
fn stochastic_job_without_seed_is_rejected() {
    let o = plurival(&["run", "--job", r#"{"command":"integral","a":"2,2","psi":"1,0","samples":10000}"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));
}
