use std::path::{Path, PathBuf};
use std::process::Command;

use limitop::fredholm::{fredholm_report, FredholmConfig, FredholmReport};
use limitop::io::{element_from_doc, parse_band, parse_groupoid, ElementDoc};
use serde_json::Value;
use tempfile::TempDir;

const Z2: &str = r#"{"group":{"elements":["e","g"],"identity":"e","table":[["e","g"],["g","e"]]}}"#;
const SHIFT: &str = r#"{"width":1,"diagonals":[{"m":1,"kind":"periodic","values":[[1,0]]}]}"#;
const TAILS: &str = r#"{"width":1,"diagonals":[
    {"m":0,"kind":"eventual","window":0,"values":[[3,0]],"left":[-3,0],"right":[3,0]},
    {"m":1,"kind":"periodic","values":[[1,0]]}]}"#;
const VANISHING: &str = r#"{"width":1,"diagonals":[
    {"m":0,"kind":"periodic","values":[[1,0]]},{"m":1,"kind":"periodic","values":[[1,0]]}]}"#;
const OSCILLATING: &str = r#"{"width":0,"diagonals":[{"m":0,"kind":"periodic","values":[[0,0],[1,0]]}]}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn limitop(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_limitop")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let d = TempDir::new().unwrap();
    let pair = file(&d, "pair.json", r#"{"pair": 3}"#);
    let r = limitop(&["validate", s(&pair)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["arrows"], 9);

    // g·g = g breaks the inverse law.
    let broken = file(
        &d,
        "broken.json",
        r#"{"units":["e"],"arrows":[{"id":"e","s":"e","r":"e"},{"id":"g","s":"e","r":"e"}],
            "compose":[["e","e","e"],["e","g","g"],["g","e","g"],["g","g","g"]],
            "invert":[["e","e"],["g","g"]]}"#,
    );
    let r = limitop(&["validate", s(&broken)]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["valid"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());

    let bad = file(&d, "bad.json", "{ not json");
    assert_eq!(limitop(&["validate", s(&bad)]).code, 2);
    assert_eq!(limitop(&["validate", "/nonexistent/file.json"]).code, 2);
    assert_eq!(limitop(&["validate", s(&pair), "--no-such-flag"]).code, 2);
}

#[test]
fn rep_of_a_z2_element() {
    let d = TempDir::new().unwrap();
    file(&d, "z2.json", Z2);
    let f = file(&d, "f.json", r#"{"groupoid":"z2.json","coeffs":[["e",2,0],["g",0,1]]}"#);
    let r = limitop(&["rep", s(&f), "--unit", "e"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = &r.json()["matrix"];
    assert_eq!(m[0][0], serde_json::json!([2.0, 0.0]));
    assert_eq!(m[0][1], serde_json::json!([0.0, 1.0]));
    assert_eq!(m[1][0], serde_json::json!([0.0, 1.0]));
    assert_eq!(m[1][1], serde_json::json!([2.0, 0.0]));

    let one = file(&d, "one.json", r#"{"coeffs":[["e",1,0]]}"#);
    let g = d.path().join("z2.json");
    let r = limitop(&["rep", s(&one), "-g", s(&g), "-u", "e", "--format", "csv"]);
    assert_eq!(r.stdout, "row,col,re,im\n0,0,1,0\n0,1,0,0\n1,0,0,0\n1,1,1,0\n");

    assert_eq!(limitop(&["rep", s(&f), "--unit", "nope"]).code, 1);
    // Without any groupoid the element cannot be read.
    assert_eq!(limitop(&["rep", s(&one), "--unit", "e"]).code, 2);
}

#[test]
fn norm_and_convolve_round_trip() {
    let d = TempDir::new().unwrap();
    file(&d, "z2.json", Z2);
    let f = file(&d, "f.json", r#"{"groupoid":"z2.json","coeffs":[["e",1,0],["g",1,0]]}"#);
    let r = limitop(&["norm", s(&f)]);
    assert_eq!(r.code, 0);
    assert!((r.json()["reduced"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let out = d.path().join("sq.json");
    let r = limitop(&["convolve", s(&f), s(&f), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    let doc: ElementDoc = serde_json::from_str(&text).unwrap();
    let g = std::sync::Arc::new(parse_groupoid(&doc.groupoid.clone().unwrap().to_string()).unwrap());
    let sq = element_from_doc(&doc, &g).unwrap();
    // (1 + g)² = 2 + 2g
    assert_eq!(sq.coeffs(), &[2.0.into(), 2.0.into()]);
    // The emitted element is self-contained and re-parses to the same document.
    let again = limitop(&["convolve", s(&out), s(&f)]);
    assert_eq!(again.code, 0, "{}", again.stderr);
    let emitted: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_value(&doc).unwrap(), emitted);
}

#[test]
fn fredholm_examples() {
    let d = TempDir::new().unwrap();
    let v = file(&d, "v.json", SHIFT);
    let r = limitop(&["fredholm", s(&v)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report: FredholmReport = serde_json::from_str(&r.stdout).unwrap();
    assert!(report.fredholm);
    assert_eq!(report.index, Some(0));
    // The emitted report re-parses to exactly the library's report.
    assert_eq!(
        report,
        fredholm_report(&parse_band(SHIFT).unwrap(), &FredholmConfig::default()).unwrap()
    );

    let t = file(&d, "tails.json", TAILS);
    let r = limitop(&["fredholm", s(&t), "--sections", "20,40"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["index"], 0);
    assert_eq!(v["windings"]["plus"], 0);
    assert_eq!(v["evidence"].as_array().unwrap().len(), 2);

    let z = file(&d, "vanish.json", VANISHING);
    let r = limitop(&["fredholm", s(&z)]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["fredholm"], false);
    assert_eq!(v["certification"]["plus"], "refuted");
    assert!(v["min_modulus"]["plus"]["min"].as_f64().unwrap() <= 1e-6);
    let csv = limitop(&["fredholm", s(&z), "--format", "csv", "--samples", "64"]);
    assert!(csv.stdout.starts_with("# symbol plus\ntheta,re,im\n"));
    assert!(csv.stdout.contains("# sections\nn,sigma_min\n"));

    let o = file(&d, "osc.json", OSCILLATING);
    let r = limitop(&["fredholm", s(&o)]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["refusal"], "not_convergent");
    assert_eq!(v["diagonal"], 0);

    let pretty = limitop(&["fredholm", s(&t), "--format", "pretty"]);
    assert!(pretty.stdout.contains("Fredholm, index 0"));
}

#[test]
fn limit_op_directions() {
    let d = TempDir::new().unwrap();
    let o = file(&d, "osc.json", OSCILLATING);
    assert_eq!(limitop(&["limit-op", s(&o)]).code, 1);
    let r = limitop(&["limit-op", s(&o), "--direction", "arith:1:2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["coeffs"], serde_json::json!([[0, 1.0, 0.0]]));
    let t = file(&d, "tails.json", TAILS);
    let r = limitop(&["limit-op", s(&t), "-d", "minus"]);
    assert_eq!(r.json()["coeffs"], serde_json::json!([[0, -3.0, 0.0], [1, 1.0, 0.0]]));
    assert_eq!(limitop(&["limit-op", s(&t), "-d", "sideways"]).code, 2);
    assert_eq!(limitop(&["limit-op", s(&t), "-d", "arith:0:0"]).code, 2);
}

#[test]
fn index_of_symbols() {
    let d = TempDir::new().unwrap();
    let e2 = file(&d, "e2.json", r#"{"coeffs":[[2,1,0]]}"#);
    let r = limitop(&["index", s(&e2), "--oracle", "50"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["winding"], 2);
    assert_eq!(v["toeplitz_index"], -2);
    assert_eq!(v["oracle"]["kernel"], 0);
    assert_eq!(v["oracle"]["cokernel"], 2);

    let z = file(&d, "z.json", r#"{"coeffs":[[0,1,0],[1,1,0]]}"#);
    let r = limitop(&["index", s(&z)]);
    assert_eq!(r.code, 1);
    assert!(r.json()["refusal"].as_str().unwrap().contains("within"));
}

#[test]
fn exel_examples() {
    let d = TempDir::new().unwrap();
    file(&d, "z2.json", Z2);
    let one = file(&d, "one.json", r#"{"groupoid":"z2.json","coeffs":[["e",1,0]]}"#);
    assert_eq!(limitop(&["exel", s(&one)]).code, 0);

    // 1 + g has eigenvalue 0 on the sign representation.
    let sing = file(
        &d,
        "sing.json",
        r#"{"groupoid":"z2.json","coeffs":[["e",1,0],["g",1,0]]}"#,
    );
    let r = limitop(&["exel", s(&sing)]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert!(v["per_unit"][0]["sigma_min"].as_f64().unwrap() < 1e-12);

    // N = δ_(1,2) squares to zero, so (1 + N)⁻¹ = 1 − N.
    let nil = file(&d, "nil.json", r#"{"groupoid":{"pair":2},"coeffs":[["(1,2)",1,0]]}"#);
    let r = limitop(&["exel", s(&nil), "--unitized"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let inv = &r.json()["inverse"]["coeffs"];
    let mut got: Vec<(String, f64)> = inv
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c[0].as_str().unwrap().to_string(), c[1].as_f64().unwrap()))
        .collect();
    got.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(got, vec![("(1,2)".into(), -1.0), ("1".into(), 1.0), ("2".into(), 1.0)]);
}

#[test]
fn maintheorem_examples() {
    let d = TempDir::new().unwrap();
    // pair(2) ⊔ Z/2 as one raw groupoid: units p1, p2, u.
    let g = file(
        &d,
        "g.json",
        r#"{"units":["p1","p2","u"],
            "arrows":[{"id":"p1","s":"p1","r":"p1"},{"id":"p2","s":"p2","r":"p2"},
                      {"id":"a","s":"p1","r":"p2"},{"id":"b","s":"p2","r":"p1"},
                      {"id":"u","s":"u","r":"u"},{"id":"t","s":"u","r":"u"}],
            "compose":[["p1","p1","p1"],["p2","p2","p2"],["a","p1","a"],["p2","a","a"],
                       ["b","p2","b"],["p1","b","b"],["a","b","p2"],["b","a","p1"],
                       ["u","u","u"],["u","t","t"],["t","u","t"],["t","t","u"]],
            "invert":[["p1","p1"],["p2","p2"],["a","b"],["b","a"],["u","u"],["t","t"]]}"#,
    );
    let gp = s(&g).to_string();
    let one = file(&d, "one.json", r#"{"coeffs":[["p1",1,0],["p2",1,0],["u",1,0]]}"#);
    let r = limitop(&["maintheorem", s(&one), "-g", &gp, "--boundary", "u"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(
        v["conditions"],
        serde_json::json!({"c1": true, "c2": true, "c3": true, "c4": true})
    );
    assert!((v["sup_inverse_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["quotient_inverse"].is_object());

    // Singular on the boundary block (1 + t), invertible on the open block.
    let f = file(
        &d,
        "f.json",
        r#"{"coeffs":[["p1",1,0],["p2",1,0],["u",1,0],["t",1,0]]}"#,
    );
    let r = limitop(&["maintheorem", s(&f), "-g", &gp, "--boundary", "u"]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.json()["conditions"],
        serde_json::json!({"c1": false, "c2": false, "c3": false, "c4": false})
    );

    let r = limitop(&["maintheorem", s(&f), "-g", &gp]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["degenerate"], true);

    // {p1} alone is not invariant.
    assert_eq!(limitop(&["maintheorem", s(&f), "-g", &gp, "--boundary", "p1"]).code, 1);
}

#[test]
fn mean_defects() {
    let d = TempDir::new().unwrap();
    let m = file(
        &d,
        "m.json",
        r#"{"groupoid":{"pair":2},"sequence":[
            {"1":[["1",1]],"2":[["2",1]]},
            {"1":[["1",0.5],["(2,1)",0.5]],"2":[["2",0.5],["(1,2)",0.5]]}]}"#,
    );
    let r = limitop(&["mean-defect", s(&m)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v[0]["invariance"], 2.0);
    assert_eq!(v[1]["invariance"], 0.0);
    assert_eq!(v[1]["mass"], 0.0);
    let csv = limitop(&["mean-defect", s(&m), "--format", "csv"]);
    assert_eq!(csv.stdout, "k,mass,invariance\n0,0,2\n1,0,0\n");

    let outside = file(
        &d,
        "o.json",
        r#"{"groupoid":{"pair":2},"sequence":[{"1":[["(1,2)",1]]}]}"#,
    );
    assert_eq!(limitop(&["mean-defect", s(&outside)]).code, 2);
}

#[test]
fn csv_is_refused_where_it_has_no_meaning() {
    let d = TempDir::new().unwrap();
    let pair = file(&d, "pair.json", r#"{"pair": 2}"#);
    assert_eq!(limitop(&["validate", s(&pair), "--format", "csv"]).code, 2);
}
