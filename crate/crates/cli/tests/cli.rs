use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn polaris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polaris"))
        .args(args)
        .env_remove("POLARIS_GUARD_GENERATORS")
        .output()
        .expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn all_verdicts(r: &Value) -> Vec<bool> {
    r["verdicts"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_bool().unwrap())
        .collect()
}

#[test]
fn check_standard_family_cross_checked() {
    let f = fixture("std_3_3.json");
    let o = polaris(&["check", "--family", f.to_str().unwrap(), "--cross-check"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["command"], "check");
    assert_eq!(all_verdicts(&r), vec![true, true, true]);
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn infer_lcomplex_graph_names_a_condition() {
    let g = fixture("lcomplex_4_2.json");
    let o = polaris(&["infer", "--graph", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["verdicts"]["isotone_conditions"], false);
    let diags = r["witnesses"]["diagnostics"].as_array().unwrap();
    assert!(!diags.is_empty());
    assert!(diags.iter().any(|d| d["condition"] == "G1"));
    assert!(diags[0]["humanReadable"].as_str().unwrap().contains("components"));
}

#[test]
fn infer_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.json");
    let g = fixture("isotone_chains_3_3.json");
    let o = polaris(&["infer", "--graph", g.to_str().unwrap(), "--out", fam.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["verdicts"]["ls_graph_recovered"], true);

    let o = polaris(&["export", "--family", fam.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let exported: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(exported["removed"].as_array().unwrap().len(), 3);

    let o = polaris(&["check", "--family", fam.to_str().unwrap(), "--cross-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn morse_three_three_matches_l_complex() {
    let o = polaris(&["morse", "--n", "3", "--d", "3", "--check-iso"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["data"]["critical_counts"], serde_json::json!([10, 15, 6]));
    assert_eq!(r["verdicts"]["isomorphic_to_l_complex"], true);
    assert_eq!(r["verdicts"]["acyclic"], true);
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"n\": 3, \"d\":").unwrap();
    let o = polaris(&["check", "--family", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&o)["error"]["kind"], "parse");
    let o = polaris(&["infer", "--graph", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn guards_exit_three() {
    let f = fixture("std_3_3.json");
    let o = Command::new(env!("CARGO_BIN_EXE_polaris"))
        .args(["check", "--family", f.to_str().unwrap(), "--cross-check"])
        .env("POLARIS_GUARD_GENERATORS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = polaris(&["enumerate", "--n", "3", "--d", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(report(&o)["error"]["kind"], "guard");
}

#[test]
fn non_polarization_exits_one() {
    // seed chosen so the sampled family is not a polarization
    let o = polaris(&["check", "--random", "--n", "4", "--d", "2", "--seed", "7", "--cross-check"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(all_verdicts(&r), vec![false, false, false]);
    assert!(r["witnesses"]["non_spanning_apex"].is_array());
}

#[test]
fn reports_are_reproducible() {
    for args in [
        &["check", "--random", "--n", "3", "--d", "3", "--seed", "11"][..],
        &["restricted", "--n", "4", "--d", "2", "--u", "1,1,1,1"][..],
    ] {
        let a = polaris(args);
        let b = polaris(args);
        assert_eq!(a.stdout, b.stdout);
        // round trip
        let v = report(&a);
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(again.as_bytes(), a.stdout.as_slice());
    }
    let a = report(&polaris(&["check", "--random", "--n", "3", "--d", "3", "--seed", "1"]));
    let b = report(&polaris(&["check", "--random", "--n", "3", "--d", "3", "--seed", "2"]));
    assert_ne!(a["inputs_digest"], b["inputs_digest"]);
}

#[test]
fn enumerate_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("enum");
    let o = polaris(&["--jobs", "2", "enumerate", "--n", "3", "--d", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["distinct_graphs"], 4);
    let results = manifest["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    for r in results {
        let body = std::fs::read_to_string(out.join(r["file"].as_str().unwrap())).unwrap();
        let entry: Value = serde_json::from_str(&body).unwrap();
        assert!(entry["family"]["X"].is_array());
        assert_eq!(r["betti"], serde_json::json!([6, 8, 3]));
        let fam = dir.path().join("f.json");
        std::fs::write(&fam, serde_json::to_string(&entry["family"]).unwrap()).unwrap();
        let o = polaris(&["check", "--family", fam.to_str().unwrap(), "--cross-check"]);
        assert_eq!(o.status.code(), Some(0));
    }
}

#[test]
fn construction_commands_pass() {
    for args in [
        &["lcomplex", "--n", "3", "--d", "2"][..],
        &["hypersimplex", "--n", "3", "--d", "3", "--check-resolution"][..],
        &["hypersimplex", "--n", "4", "--d", "2", "--u", "1,1,1,1"][..],
        &["restricted", "--n", "4", "--d", "2", "--u", "1,1,1,1"][..],
    ] {
        let o = polaris(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let r = report(&o);
        assert!(all_verdicts(&r).into_iter().all(|v| v), "{args:?}");
    }
    let r = report(&polaris(&["lcomplex", "--n", "3", "--d", "2"]));
    assert_eq!(r["data"]["ranks"], serde_json::json!([1, 6, 8, 3]));
}

#[test]
fn betti_of_an_ideal() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("ideal.json");
    std::fs::write(&p, "[[1,1,0,0],[0,0,1,1]]").unwrap();
    let o = polaris(&["betti", "--ideal", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["data"]["totals"], serde_json::json!([2, 1]));
    let graded = r["data"]["graded"].as_array().unwrap();
    assert!(graded
        .iter()
        .any(|g| g["degree"] == 1 && g["multidegree"] == serde_json::json!([1, 1, 1, 1])));
}

#[test]
fn dot_export_marks_removed_edges() {
    let g = fixture("isotone_chains_3_3.json");
    let o = polaris(&["export", "--graph", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("graph sk1 {"));
    assert_eq!(dot.matches("style=dashed").count(), 3);
    assert_eq!(dot.matches("style=solid").count(), 15);
    assert!(dot.contains("(1,2,1);2,3"));
}
