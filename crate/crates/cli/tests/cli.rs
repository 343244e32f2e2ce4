use std::process::Command;

use clap::Parser;
use serde_json::Value;
use torspec_cli::config::{ComplexArg, RunConfig};
use torspec_cli::run_captured;

fn torspec(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_torspec")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = torspec(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

#[test]
fn trees_on_3x3() {
    let (code, v) = json(&["trees", "--dims", "3,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["spanning_trees"], "11664");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "trees");
}

#[test]
fn constants_d2_matches_catalan_form() {
    let (code, v) = json(&["constants", "--d", "2"]);
    assert_eq!(code, 0);
    let x = v["I_d0"].as_f64().unwrap();
    assert!((x - 1.166_243_616_123_275).abs() < 1e-12, "{x}");
    assert_eq!(v["closed_form"], "4G/pi");
    assert!(v["I_d0_error"].as_f64().unwrap() > 0.0);
    let (_, v1) = json(&["constants", "--d", "1"]);
    assert_eq!(v1["closed_form"], "0");
    assert!(v1["I_d0"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn detlog_of_a_cycle() {
    let (code, v) = json(&["detlog", "--dims", "5"]);
    assert_eq!(code, 0);
    assert!((v["log_det_star"].as_f64().unwrap() - 25f64.ln()).abs() < 1e-12);
}

#[test]
fn rejected_input_exits_2() {
    assert_eq!(torspec(&["trees", "--dims", "3,0"]).0, 2);
    assert_eq!(torspec(&["no-such-command"]).0, 2);
    let (code, v) = json(&["zeta-real", "--alphas", "1,1", "--w", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["code"], "pole");
    let (code, v) = json(&["zeta-discrete", "--dims", "4", "--w", "-1,0.5"]);
    assert_eq!(code, 2);
    assert_eq!(v["code"], "domain");
}

#[test]
fn cap_exceeded_is_reported() {
    let (code, v) = json(&["trees", "--dims", "100,100"]);
    assert_eq!(code, 2);
    assert_eq!(v["code"], "cap_exceeded");
    let (code, v) = json(&["trees", "--dims", "10,10", "--exact-cap", "50"]);
    assert_eq!(code, 2);
    assert_eq!(v["code"], "cap_exceeded");
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(torspec(&["--help"]).0, 0);
    assert_eq!(torspec(&["--version"]).0, 0);
}

#[test]
fn degenerate_csv_columns() {
    let (code, text) = torspec(&["degenerate", "--alphas", "1,2", "--u", "8,16", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["u", "n_1", "n_2", "V", "logdet_discrete", "lead", "log_u2", "const_term", "residual"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[1][1], "16");
    assert_eq!(&rows[1][2], "32");
    let cell = |i: usize| rows[1][i].parse::<f64>().unwrap();
    assert!((cell(8) - (cell(4) - cell(5) - cell(6) - cell(7))).abs() < 1e-9);
}

#[test]
fn out_file_receives_report() {
    let dir = std::env::temp_dir().join(format!("torspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trees.json");
    let (code, stdout) = torspec(&["trees", "--dims", "3,3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["spanning_trees"], "11664");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_does_not_change_results() {
    let one = run_captured(["torspec", "detlog", "--dims", "64,64", "--threads", "1"]);
    let four = run_captured(["torspec", "detlog", "--dims", "64,64", "--threads", "4"]);
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run_captured(["torspec", "detlog", "--dims", "4", "--threads", "0"]).code, 2);
}

#[test]
fn run_config_round_trips_through_json() {
    let cfg = RunConfig::try_parse_from([
        "torspec", "verify-theorem36", "--dims", "4,6", "--s", "0.5,-0.25", "--format", "csv", "--tol", "1e-9",
    ])
    .unwrap();
    let text = serde_json::to_string(&cfg).unwrap();
    let back: RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"]["subcommand"], "verify-theorem36");
    assert_eq!(v["command"]["dims"], serde_json::json!([4, 6]));
    assert_eq!(v["command"]["s"], serde_json::to_value(ComplexArg { re: 0.5, im: -0.25 }).unwrap());
}

#[test]
fn complex_arg_parsing() {
    assert_eq!("2".parse::<ComplexArg>().unwrap(), ComplexArg { re: 2.0, im: 0.0 });
    assert_eq!(" -1 , 3e-2".parse::<ComplexArg>().unwrap(), ComplexArg { re: -1.0, im: 0.03 });
    assert!("1,2,3".parse::<ComplexArg>().is_err());
    assert!("nan".parse::<ComplexArg>().is_err());
}
