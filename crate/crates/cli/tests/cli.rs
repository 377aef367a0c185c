use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pwl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwl")).args(args).output().expect("pwl runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn entries(v: &Value) -> &Vec<Value> {
    v["entries"].as_array().expect("entries array")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pwl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn witt_mul_over_f2() {
    // (1, 0) is the unit of W_2(F_2)
    let out = pwl(&["witt", "mul", "--p", "2", "--n", "2", "--ring", "F2", "--x", "[1,0]", "--y", "[1,1]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(entries(&v)[0]["details"]["result"], serde_json::json!(["1", "1"]));
    // [1] + [1] = (0, 1) in W_2(F_2), i.e. 2 = V(1)
    let out = pwl(&["witt", "add", "--ring", "F2", "--x", "[1,0]", "--y", "[1,0]"]);
    assert_eq!(entries(&json(&out))[0]["details"]["result"], serde_json::json!(["0", "1"]));
}

#[test]
fn witt_over_z8_and_ghost() {
    // ghost components of (x0, x1) are x0 and x0^2 + 2 x1
    let out = pwl(&["witt", "ghost", "--ring", "Z/8", "--x", "[3,5]"]);
    assert_eq!(entries(&json(&out))[0]["details"]["ghost"], serde_json::json!(["3", "3"]));
    let out = pwl(&["witt", "fvr", "--ring", "F2", "--x", "[1,1,0]"]);
    let v = json(&out);
    let d = &entries(&v)[0]["details"];
    assert_eq!(d["V"], serde_json::json!(["0", "1", "1", "0"]));
    assert_eq!(d["R"], serde_json::json!(["1", "1"]));
}

#[test]
fn crystalline_rn_of_one_one() {
    let out = pwl(&["prism", "rn", "--preset", "crystalline", "--p", "2", "--n", "2", "--input", "[1,1]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let d = &entries(&v)[0]["details"];
    assert_eq!((d["value"].as_str(), d["modulus"].as_u64()), (Some("3"), Some(4)));
}

#[test]
fn basis_dump_shape() {
    let out = pwl(&["drw", "basis", "--p", "2", "--r", "2", "--vars", "2", "--deg-cap", "4", "--i", "1", "--format", "json"]);
    let v = json(&out);
    let es = entries(&v);
    assert!(!es.is_empty());
    for e in es {
        let d = &e["details"];
        assert!(d["weight"].is_array() && d["partition"].is_array() && d["coeff-module"].is_string(), "{e}");
    }
}

#[test]
fn commut_gives_six_passing_diagrams() {
    let out = pwl(&["verify", "commut", "--p", "2", "--r", "2", "--model", "charp"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let es = entries(&v);
    assert_eq!(es.len(), 6);
    assert!(es.iter().all(|e| e["status"] == "pass" && e["anchor"] == "tilt.diagrams"));
    let names: BTreeSet<&str> = es.iter().map(|e| e["details"]["diagram"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 6);
}

#[test]
fn cartier_and_crystalline_per_weight() {
    let out = pwl(&["verify", "cartier", "--p", "2", "--n", "2", "--vars", "1", "--deg-cap", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(entries(&json(&out)).iter().all(|e| e["weight"].is_string() && e["status"] == "pass"));
    let out = pwl(&["compare", "crystalline", "--p", "2", "--n", "2", "--vars", "1", "--deg-cap", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cris: Vec<&Value> = entries(&v).iter().filter(|e| e["anchor"] == "compare.crystalline").collect();
    assert!(!cris.is_empty());
    for e in cris {
        let d = &e["details"];
        for key in ["weight", "degree", "lhs_rank", "rhs_rank", "iso", "certificate"] {
            assert!(!d[key].is_null(), "{key} missing in {d}");
        }
        assert_eq!(d["lhs_rank"], d["rhs_rank"]);
    }
}

#[test]
fn reports_are_deterministic_and_sorted() {
    let args = ["verify", "all", "--p", "2", "--budget", "small", "--seed", "11"];
    let (a, b) = (pwl(&args), pwl(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 11);
    let es = entries(&v);
    let anchors: Vec<&str> = es.iter().map(|e| e["anchor"].as_str().unwrap()).collect();
    assert!(anchors.windows(2).all(|w| w[0] <= w[1]));
    assert!(anchors.contains(&"compare.base-change") && anchors.contains(&"drw.axioms") && anchors.contains(&"tilt.xi"));
}

#[test]
fn every_anchor_is_indexed() {
    let doc = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/anchors.md")).unwrap();
    let indexed: BTreeSet<String> = doc
        .lines()
        .filter_map(|l| l.strip_prefix("| `"))
        .filter_map(|l| l.split('`').next())
        .map(String::from)
        .collect();
    let runs: [&[&str]; 7] = [
        &["verify", "all", "--budget", "small"],
        &["witt", "ghost", "--x", "[1]"],
        &["prism", "rn", "--input", "[1]"],
        &["prism", "embed", "--input", "[1,0]"],
        &["prism", "validate"],
        &["drw", "normalize", "--word", "d V [T1]"],
        &["tilt", "perfectoid"],
    ];
    for args in runs {
        for e in entries(&json(&pwl(args))) {
            let a = e["anchor"].as_str().unwrap();
            assert!(indexed.contains(a), "{a} from {args:?} missing in docs/anchors.md");
        }
    }
}

#[test]
fn csv_is_a_flat_projection() {
    let j = json(&pwl(&["verify", "cartier", "--deg-cap", "3"]));
    let out = pwl(&["verify", "cartier", "--deg-cap", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("command,seed,anchor,weight,status,details"));
    assert_eq!(lines.count(), entries(&j).len());
}

#[test]
fn exit_codes() {
    assert_eq!(pwl(&["witt", "mul", "--ring", "Z/6", "--x", "[1]", "--y", "[1]"]).status.code(), Some(2));
    assert_eq!(pwl(&["verify", "nonsense"]).status.code(), Some(2));
    // F_p[t] is not perfectoid: the control run reports failures
    assert_eq!(pwl(&["tilt", "perfectoid", "--control"]).status.code(), Some(1));
    let capped = Command::new(env!("CARGO_BIN_EXE_pwl"))
        .args(["verify", "cartier", "--deg-cap", "4"])
        .env("PWL_STEP_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3), "{}", String::from_utf8_lossy(&capped.stderr));
}

#[test]
fn merge_reports() {
    let a = pwl(&["verify", "square", "--samples", "5"]);
    let b = pwl(&["verify", "commut"]);
    let (pa, pb, pc) = (scratch("a.json"), scratch("b.json"), scratch("c.json"));
    std::fs::write(&pa, &a.stdout).unwrap();
    std::fs::write(&pb, &b.stdout).unwrap();
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    std::fs::write(&pc, text.replacen("\"status\": \"pass\"", "\"status\": \"fail\"", 1)).unwrap();

    let union = json(&pwl(&["report", "merge", pa.to_str().unwrap(), pb.to_str().unwrap()]));
    let na = entries(&json(&a)).len();
    assert_eq!(union["rows"].as_array().unwrap().len(), na + 6);
    assert_eq!(union["conflicts"], 0);

    let conflict = pwl(&["report", "merge", pa.to_str().unwrap(), pc.to_str().unwrap()]);
    assert_eq!(conflict.status.code(), Some(0));
    let t = json(&conflict);
    assert_eq!(t["conflicts"], 1);
    let flagged: Vec<&Value> = t["rows"].as_array().unwrap().iter().filter(|r| r["conflict"] == true).collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0]["status"], "fail");

    let empty = pwl(&["report", "merge"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(json(&empty)["rows"].as_array().unwrap().len(), 0);

    std::fs::write(&pc, text.replace("\"schema\": 1", "\"schema\": 9")).unwrap();
    assert_eq!(pwl(&["report", "merge", pc.to_str().unwrap()]).status.code(), Some(2));
}
