use std::process::{Command, Output};

use serde_json::Value;

fn psing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psing"))
        .args(args)
        .env_remove("PSING_MAX_PARTITIONS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("single json document")
}

#[test]
fn classify_json() {
    let out = psing(&["classify", "-p", "5", "--rep", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["schema"], "psing/1");
    assert_eq!(doc["delta"], 1);
    assert_eq!(doc["class"], "terminal");
    assert_eq!(doc["cm"], false);
    assert_eq!(doc["D"], 6);
    assert_eq!(doc["lower_bound"], "2/5");
    assert_eq!(doc["upper_bound"], 1);
    assert_eq!(doc["maximizers"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn classify_plain_negative_infinity_and_smooth() {
    let out = psing(&["classify", "-p", "5", "--rep", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("delta: -inf"));

    let out = psing(&["classify", "-p", "7", "--rep", "1^2", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(doc["delta"], "smooth");
    assert_eq!(doc["upper_bound"], Value::Null);
}

#[test]
fn classify_validation_errors() {
    let out = psing(&["classify", "-p", "4", "--rep", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("p must be prime"));

    let out = psing(&["classify", "-p", "5", "--rep", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds p"));

    let out = psing(&["classify", "-p", "5", "--rep", "2^x"]);
    assert_eq!(out.status.code(), Some(2));

    let out = psing(&["classify", "-p", "5", "--rep", "4", "--center-dim", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_center_bounds_policies() {
    let out = psing(&["classify", "-p", "5", "--rep", "4", "--center-dim", "0", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(doc["center_bounds"]["lower"], "7/5");
    assert_eq!(doc["center_bounds"]["upper"], 2);

    let out = psing(&["classify", "-p", "3", "--rep", "2,2", "--center-dim", "2", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(doc["center_bounds"]["lower"], Value::Null);
    assert_eq!(doc["center_bounds"]["lower_hypothesis_gap"], true);

    let out =
        psing(&["--remark-literal", "classify", "-p", "3", "--rep", "2,2", "--center-dim", "2", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(doc["center_bounds"]["lower"], "-2/3");
}

#[test]
fn classify_csv_has_fixed_header() {
    let out = psing(&["classify", "-p", "2", "--rep", "2^3", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,rep,d,l,codim,D,cm,delta,class,maximizers,upper_bound,lower_bound"));
    assert_eq!(lines.next(), Some("2,2^3,6,3,3,3,false,1,terminal,1,1,1/1"));
}

#[test]
fn sht_single_profile_and_nu() {
    let out = psing(&["sht", "-p", "5", "--rep", "4", "-j", "4"]);
    assert_eq!(stdout(&out).trim(), "3");

    let out = psing(&["sht", "-p", "5", "--rep", "4", "-j", "8"]);
    assert_eq!(stdout(&out).trim(), "8");

    let out = psing(&["sht", "-p", "5", "--rep", "4", "-j", "0", "--nu"]);
    assert_eq!(stdout(&out).trim(), "1");

    let out = psing(&["sht", "-p", "5", "--rep", "4", "--profile", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,sht,jump,nu");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(2) == Some("1")));

    let out = psing(&["sht", "-p", "5", "--rep", "4", "-j", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_examples() {
    let out =
        psing(&["search", "--primes", "5", "--d-max", "6", "--terminal", "--not-cm", "--minimal", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["count"], 1);
    assert_eq!(doc["rows"][0]["rep"], "4");
    assert_eq!(doc["rows"][0]["d"], 4);

    let out =
        psing(&["search", "--primes", "2", "--d-max", "8", "--terminal", "--not-cm", "--minimal", "--format", "json"]);
    let doc = json(&out);
    assert_eq!(doc["count"], 1);
    assert_eq!(doc["rows"][0]["rep"], "2^3");
    assert_eq!(doc["rows"][0]["d"], 6);

    let out = psing(&["search", "--primes", "3", "--d-max", "2", "--terminal", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"], serde_json::json!([]));
}

#[test]
fn search_rejects_bad_ranges() {
    let out = psing(&["search", "--primes", "5", "--d-min", "4", "--d-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = psing(&["search", "--primes", "6", "--d-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumeration_cap_exit_code() {
    let out = Command::new(env!("CARGO_BIN_EXE_psing"))
        .args(["table", "--primes", "5", "--d-max", "4"])
        .env("PSING_MAX_PARTITIONS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("enumeration cap"));
}

#[test]
fn table_csv_rep_strings_round_trip() {
    let out = psing(&["table", "--primes", "2,3,5", "--d-max", "7", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["p", "rep", "d", "l", "codim", "D", "delta", "class", "cm", "maximizers"]);
    let mut count = 0;
    for record in reader.records() {
        let record = record.unwrap();
        let p: u64 = record[0].parse().unwrap();
        let rep = psing_core::Representation::parse(p, &record[1]).unwrap();
        assert_eq!(rep.to_string(), &record[1]);
        assert_eq!(rep.invariants().unwrap().d_v.to_string(), &record[5]);
        count += 1;
    }
    assert!(count > 0);
}

#[test]
fn verify_examples() {
    let out = psing(&["verify", "--primes", "2,3,5,7", "--d-max", "10", "--n-max", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["passed"], true);
    let props = doc["report"]["properties"].as_array().unwrap();
    assert_eq!(props.len(), 9);
    assert!(props.iter().all(|p| p["instances"].as_u64().unwrap() > 0));

    let out = psing(&["verify", "--primes", "2", "--d-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("result: pass"));

    let out = psing(&["verify", "--primes", "13", "--d-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
}
