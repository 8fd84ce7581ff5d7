use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const ANTI: &str = r#"{ "symmetric": [[0, 2], [2, 0]], "actions": [["a1", "a2"], ["a1", "a2"]] }"#;
const COORD: &str = r#"{ "types": [{ "id": "coord", "kind": "coordination" }], "play": [[["1/2", "1/2"]]] }"#;
const TWO: &str = r#"{ "actions": [["a11","a12","a13"],["a21","a22","a23"]],
  "payoffs": [[7,7],[0,0],[0,0],[0,0],[9,6],[0,0],[0,0],[0,0],[6,9]] }"#;

fn dominant_pair(a: &str, b: &str) -> String {
    format!(
        r#"{{ "populations": [
            {{ "types": [{{ "id": "d1", "kind": "dominant", "action": "{a}" }}] }},
            {{ "types": [{{ "id": "d2", "kind": "dominant", "action": "{b}" }}] }} ],
          "play": {{ "uniform": ["{a}", "{b}"] }} }}"#
    )
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn put(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

fn esp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esp"))
        .args(args)
        .env_remove("ESP_BUDGET")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn classify_anti_coordination() {
    let o = esp(&["classify2x2", "--payoffs", "0", "2", "2", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stable order exactly 1 at ((1/2,1/2),(1/2,1/2))"));
}

#[test]
fn classify_accepts_negative_and_fractional_payoffs() {
    let o = esp(&["classify2x2", "--payoffs", "3", "-1/2", "5", "0", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["payoffs"], "(3,-1/2,5,0)");
}

#[test]
fn frontier_of_two_population_game() {
    let f = Files::new();
    let g = f.put("g.json", TWO);
    let o = esp(&["frontier", p(&g), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let list = |k: &str| -> Vec<String> {
        v["result"][k].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
    };
    assert_eq!(list("noncooperative_frontier_pure"), ["(7,7)", "(9,6)", "(6,9)"]);
    assert_eq!(list("cooperative_frontier_in_noncooperative_pure"), ["(9,6)", "(6,9)"]);
}

#[test]
fn oracle_agrees_on_order_two_witness() {
    let f = Files::new();
    let g = f.put("g.json", ANTI);
    let c = f.put("c.json", COORD);
    let o = esp(&["oracle", p(&g), p(&c), "--order", "2", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["sign_agreement"], true);
    for d in v["result"]["differences"].as_array().unwrap() {
        let x: f64 = d["numeric"].as_str().unwrap().parse().unwrap();
        assert!((x - 0.001).abs() < 1e-12, "{x}");
        assert_eq!(d["polynomial"], "ε");
    }
}

#[test]
fn certify_single_orders_one_and_two() {
    let f = Files::new();
    let g = f.put("g.json", ANTI);
    let c = f.put("c.json", COORD);
    let one = json(&esp(&["certify", "--single", p(&g), p(&c), "--order", "1", "--format", "machine"]));
    assert_eq!(one["result"]["verdict"], "stable");
    assert_eq!(one["result"]["certificate"]["theorem"], "2x2-mixed-supporter");
    let two = json(&esp(&["certify", "--single", p(&g), p(&c), "--order", "2", "--format", "machine"]));
    assert_eq!(two["result"]["verdict"], "unstable");
    assert_eq!(two["result"]["witness"]["order"], 2);
}

#[test]
fn certify_multi_two_population_profiles() {
    let f = Files::new();
    let g = f.put("g.json", TWO);
    let low = f.put("low.json", &dominant_pair("a11", "a21"));
    let high = f.put("high.json", &dominant_pair("a12", "a22"));
    let v = json(&esp(&["certify", "--multi", p(&g), p(&low), "--order", "1", "--format", "machine"]));
    assert_eq!(v["result"]["verdict"], "stable");
    let v = json(&esp(&["certify", "--multi", p(&g), p(&low), "--order", "2", "--format", "machine"]));
    assert_eq!(v["result"]["verdict"], "unstable");
    let v = json(&esp(&["certify", "--multi", p(&g), p(&high), "--order", "inf", "--format", "machine"]));
    assert_eq!(v["result"]["verdict"], "stable");
    assert_eq!(v["result"]["certificate"]["order"], "inf");
}

#[test]
fn invade_emits_full_document() {
    let f = Files::new();
    let g = f.put("g.json", TWO);
    let c = f.put("c.json", &dominant_pair("a11", "a21"));
    let o = esp(&["invade", p(&g), p(&c), "--order", "2", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let w = &json(&o)["result"]["witness"];
    assert_eq!(w["mutants"].as_array().unwrap().len(), 4);
    assert_eq!(w["share_families"].as_array().unwrap().len(), 2);
    assert_eq!(w["play"].as_array().unwrap().len(), 9);
    for d in w["evidence"]["differences"].as_array().unwrap() {
        assert_eq!(d["polynomial"], "ε");
    }
}

#[test]
fn invade_without_witness_is_unknown() {
    let f = Files::new();
    let g = f.put("g.json", ANTI);
    let c = f.put("c.json", COORD);
    let o = esp(&["invade", p(&g), p(&c), "--order", "1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("status: unknown"));
}

#[test]
fn analyze_three_player_game() {
    let f = Files::new();
    let g = f.put(
        "g.json",
        r#"{ "actions": [["a11","a12"],["a21","a22"],["a31","a32"]],
             "payoffs": [[7,7,7],[0,9,6],[9,6,0],[9,6,0],[6,0,9],[0,9,6],[6,0,9],[1,1,1]] }"#,
    );
    let o = esp(&["analyze", p(&g), "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    let first = &json(&o)["result"]["profiles"][0];
    assert_eq!(first["profile"], "(a11,a21,a31)");
    assert_eq!(first["nash"], true);
    assert_eq!(first["strict_nash"], true);
    assert_eq!(first["strictly_strong_nash"], "true");
    assert_eq!(first["dominates_all"], false);
}

#[test]
fn malformed_file_reports_location() {
    let f = Files::new();
    let g = f.put("g.json", "{ \"symmetric\": [[0, 2], [2 0]] }");
    let o = esp(&["analyze", p(&g)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("g.json:1:28:"), "{}", stdout(&o));
}

#[test]
fn mismatched_flag_is_input_error() {
    let f = Files::new();
    let g = f.put("g.json", TWO);
    let c = f.put("c.json", &dominant_pair("a11", "a21"));
    let o = esp(&["certify", "--single", p(&g), p(&c), "--order", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unbalanced_configuration_is_infeasible() {
    let f = Files::new();
    let g = f.put("g.json", r#"{ "symmetric": [[1, 0], [0, 0]] }"#);
    let c = f.put(
        "c.json",
        r#"{ "types": [{ "id": "x", "kind": "dominant", "action": 1 }, { "id": "y", "kind": "dominant", "action": 2 }],
             "weights": ["1/2", "1/2"], "play": [[1, 1], [2, 2]] }"#,
    );
    let o = esp(&["certify", "--single", p(&g), p(&c), "--order", "1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn bad_budget_is_input_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_esp"))
        .args(["classify2x2", "--payoffs", "0", "2", "2", "0"])
        .env("ESP_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn leaves(v: &serde_json::Value, out: &mut Vec<String>) {
    match v {
        serde_json::Value::Object(m) => m.values().for_each(|x| leaves(x, out)),
        serde_json::Value::Array(a) => a.iter().for_each(|x| leaves(x, out)),
        serde_json::Value::String(s) => out.push(s.clone()),
        other => out.push(other.to_string()),
    }
}

#[test]
fn renderings_carry_the_same_facts_and_are_deterministic() {
    let f = Files::new();
    let g = f.put("g.json", TWO);
    let c = f.put("c.json", &dominant_pair("a11", "a21"));
    let args = |fmt: &'static str| vec!["invade", p(&g), p(&c), "--order", "2", "--format", fmt];
    let m1 = esp(&args("machine"));
    let m2 = esp(&args("machine"));
    assert_eq!(m1.stdout, m2.stdout);
    let text = stdout(&esp(&args("text")));
    let mut facts = Vec::new();
    leaves(&json(&m1), &mut facts);
    for fact in facts.iter().filter(|x| !x.starts_with("esp ")) {
        assert!(text.contains(fact.as_str()), "text rendering lacks `{fact}`");
    }
    let digest_line = |s: &str| s.lines().find(|l| l.contains("sha256:")).unwrap().trim().to_string();
    assert!(digest_line(&text).ends_with(json(&m1)["inputs"].as_str().unwrap()));
}
