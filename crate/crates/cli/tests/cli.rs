use std::path::Path;
use std::process::{Command, Output};

use formality_cli::report::sha256_hex;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formality")).args(args).output().unwrap()
}

fn bin_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formality")).args(args).env(key, val).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn corpus_exit_codes() {
    let list = bin(&["corpus"]);
    let names: Vec<String> = String::from_utf8(list.stdout).unwrap().lines().map(str::to_string).collect();
    assert_eq!(names.len(), 11);
    for name in &names {
        let o = bin(&["analyze", name]);
        let expect = if name.starts_with("heisenberg") { 10 } else { 0 };
        assert_eq!(o.status.code(), Some(expect), "{name}");
        let v = json(&o);
        let verdict = if expect == 0 { "FORMAL_CERTIFIED" } else { "NONFORMAL_CERTIFIED" };
        assert_eq!(v["verdict"], verdict);
    }
}

#[test]
fn search_with_other_q() {
    for q in ["3", "-2", "1/2"] {
        assert_eq!(bin(&["analyze", "cp2.cdga", "--q", q, "--search"]).status.code(), Some(0), "q = {q}");
    }
    assert_eq!(bin(&["analyze", "heisenberg.cdga", "--q", "3", "--search"]).status.code(), Some(10));
}

#[test]
fn identity_sigma_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let sigma = write(dir.path(), "id.toml", "[sigma]\ne2 = \"e2\"\ne3 = \"e3\"\n");
    let o = bin(&["analyze", "sphere2.cdga", "--sigma", &sigma]);
    assert_eq!(o.status.code(), Some(20));
    let v = json(&o);
    assert_eq!(v["verdict"], "INCONCLUSIVE");
    assert_eq!(v["sigma_source"], "sigma_file");
    let stages = v["certificate"]["stages"].as_array().unwrap();
    assert!(stages.iter().any(|s| s["error"] == "NOT_GRADING_LIFT"));
}

#[test]
fn operad_identity_sigma_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let sigma = write(dir.path(), "id.toml", "[sigma]\nm = \"m(1,2)\"\nb = \"b(1,2)\"\n");
    assert_eq!(bin(&["analyze", "gerstenhaber.operad", "--sigma", &sigma]).status.code(), Some(20));
}

#[test]
fn reports_are_deterministic_and_hash_the_input() {
    let a = bin(&["analyze", "sphere2_padded.cdga"]);
    let b = bin(&["analyze", "sphere2_padded.cdga"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(bin(&["corpus", "sphere2_padded.cdga"]).stdout).unwrap();
    assert_eq!(json(&a)["input"]["sha256"], sha256_hex(&text));
    assert!(json(&a).get("elapsed_ms").is_none());
    assert!(json(&bin(&["analyze", "sphere2.cdga", "--timing"])).get("elapsed_ms").is_some());
}

#[test]
fn verify_accepts_reports_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["sphere2.cdga", "heisenberg.cdga", "gerstenhaber_padded.operad"] {
        let out = bin(&["analyze", name]);
        let path = write(dir.path(), "r.json", std::str::from_utf8(&out.stdout).unwrap());
        let o = bin(&["verify", name, &path]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(json(&o)["verified"], true);
    }

    let mut v = json(&bin(&["analyze", "sphere2.cdga"]));
    v["certificate"]["formal"]["weights"][2]["parts"][0]["weight"] = Value::from(7);
    let path = write(dir.path(), "bad.json", &v.to_string());
    assert_eq!(bin(&["verify", "sphere2.cdga", &path]).status.code(), Some(1));

    let v = json(&bin(&["analyze", "sphere2.cdga"]));
    let path = write(dir.path(), "other.json", &v.to_string());
    assert_eq!(bin(&["verify", "cp2.cdga", &path]).status.code(), Some(1));
}

#[test]
fn minimal_model_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["sphere2_padded.cdga", "cp2.cdga", "gerstenhaber_padded.operad"] {
        let listing = bin(&["minimal-model", name]);
        assert_eq!(listing.status.code(), Some(0));
        let text = String::from_utf8(listing.stdout).unwrap();
        let path = write(dir.path(), "model.toml", &text);
        assert_eq!(bin(&["analyze", &path, "--search"]).status.code(), Some(0), "{name}");
        let again = bin(&["minimal-model", &path]);
        assert_eq!(again.status.code(), Some(0));
    }
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cdga", "version = 1\nkind = \"cdga\"\n[parameters\ntruncation = 4\n");
    let o = bin(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["error"]["code"], "PARSE_ERROR");
    assert!(v["error"]["message"].as_str().unwrap().contains("line 3"));

    let expr = write(
        dir.path(),
        "expr.cdga",
        "version = 1\nkind = \"cdga\"\n[parameters]\ntruncation = 4\n[[generators]]\nname = \"x\"\ndegree = 2\nd = \"x*+\"\n",
    );
    let o = bin(&["analyze", &expr]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["error"]["message"].as_str().unwrap().contains("line 8"));

    let float = write(dir.path(), "q.cdga", "version = 1\nkind = \"cdga\"\n[parameters]\nq = 2.0\ntruncation = 4\n");
    assert_eq!(bin(&["analyze", &float]).status.code(), Some(1));
}

#[test]
fn precondition_errors() {
    assert_eq!(bin(&["analyze", "sphere2.cdga", "--q", "1"]).status.code(), Some(1));
    assert_eq!(bin(&["analyze", "sphere2.cdga", "--q", "-1"]).status.code(), Some(1));
    assert_eq!(bin(&["analyze", "no_such_file.cdga"]).status.code(), Some(1));
    let o = bin(&["massey", "torus2.cdga", "a", "b", "a"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["code"], "PRECONDITION_NOT_EXACT");
}

#[test]
fn massey_subcommand() {
    let o = bin(&["massey", "heisenberg.cdga", "x", "y", "y"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "NONZERO");
    assert_eq!(v["massey"]["degree"], 2);
    let o = bin(&["massey", "sphere2.cdga", "e2", "e2", "e2"]);
    assert_eq!(json(&o)["verdict"], "CONTAINS_ZERO");
}

#[test]
fn demos() {
    let v = json(&bin(&["demo", "gerstenhaber", "--lambda", "3"]));
    let a2 = v["arities"].as_array().unwrap().iter().find(|a| a["arity"] == 2).unwrap();
    assert_eq!(a2["matrix"], serde_json::json!([["1", "0"], ["0", "3"]]));
    assert!(v["components"].as_array().unwrap().iter().all(|c| c["scalar"] == true));

    let v = json(&bin(&["demo", "twist", "--lambda", "3,1/2"]));
    assert_eq!(v["twist"][0]["h1"], "3");
    assert_eq!(v["twist"][1]["h1"], "1/2");
    assert_eq!(v["composition"]["h1_of_composite"], "3/2");
    assert_eq!(v["composition"]["multiplicative"], true);

    let text = String::from_utf8(bin(&["demo", "twist", "--lambda", "2", "--pretty"]).stdout).unwrap();
    assert!(text.contains("h1: 2"));
}

#[test]
fn basis_cap() {
    let o = bin_env(&["analyze", "sphere2.cdga"], "FORMALITY_MAX_BASIS", "3");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["code"], "TRUNCATION_EXCEEDED");
    assert_eq!(bin_env(&["analyze", "sphere2.cdga"], "FORMALITY_MAX_BASIS", "100000").status.code(), Some(0));
}
