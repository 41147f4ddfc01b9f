use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn agstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agstar")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = agstar(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_valid(&v);
    v
}

fn ndjson(args: &[&str]) -> Vec<Value> {
    let o = agstar(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            assert_valid(&v);
            v
        })
        .collect()
}

fn assert_valid(v: &Value) {
    let text = std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

const FIXTURES: &[&str] = &[
    "sigma.txt",
    "two_spheres.txt",
    "delta_prime.txt",
    "delta.txt",
    "link_7.txt",
    "rp2.txt",
    "boundary_tetrahedron.txt",
    "figure_eight.txt",
    "cycle_chain.txt",
    "two_points.txt",
    "odd_delta.txt",
];

#[test]
fn every_fixture_validates_against_the_schema() {
    for name in FIXTURES {
        let f = fixture(name);
        for field in ["q", "f2", "f3"] {
            let a = json(&["analyze", &f, "--field", field, "--json", "--slow-verify"]);
            assert_eq!(a["command"], "analyze");
            assert_eq!(a["report"]["slow_verified"], true);
            let ag = a["report"]["almost_gorenstein_star"].as_bool().unwrap();
            let dim = a["report"]["dim"].as_i64().unwrap();
            let d = agstar(&["decompose", &f, "--field", field, "--json"]);
            if ag && dim >= 1 {
                assert_eq!(code(&d), 0);
                assert_valid(&serde_json::from_slice(&d.stdout).unwrap());
            } else {
                assert_eq!(code(&d), 2, "{name} over {field}");
            }
        }
        json(&["betti", &f, "--type-only", "--json"]);
        json(&["betti", &f, "--full", "--json"]);
    }
}

#[test]
fn sigma_report() {
    let v = json(&["analyze", &fixture("sigma.txt"), "--json"]);
    let r = &v["report"];
    assert_eq!(v["field"], "q");
    assert_eq!(r["uniformly_cm"], true);
    assert_eq!(r["almost_gorenstein_star"], true);
    assert_eq!(r["indecomposable"], true);
    assert_eq!(r["h_vector"], serde_json::json!([1, 3, 5, 1]));
    assert_eq!(r["eta_text"], "2t");
    assert_eq!(r["type"], 3);
}

#[test]
fn subdivision_report_notes_missing_split() {
    let v = json(&["analyze", &fixture("delta_prime.txt"), "--json"]);
    let r = &v["report"];
    assert_eq!(r["almost_gorenstein_star"], false);
    assert_eq!(r["top_homology"], 2);
    let notes: Vec<&str> = r["notes"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert!(notes.iter().any(|n| n.starts_with("no ridge split")), "{notes:?}");
}

#[test]
fn projective_plane_depends_on_field() {
    let q = json(&["analyze", &fixture("rp2.txt"), "--json"]);
    let f2 = json(&["analyze", &fixture("rp2.txt"), "--field", "f2", "--json"]);
    assert_eq!(q["report"]["cm"], true);
    assert_eq!(f2["report"]["cm"], false);
    assert_eq!(f2["report"]["characteristic"], 2);
    let fp = json(&["analyze", &fixture("rp2.txt"), "--field", "fp:2", "--json"]);
    assert_eq!(fp["report"], f2["report"]);
}

#[test]
fn decompositions() {
    let v = json(&["decompose", &fixture("two_spheres.txt"), "--json"]);
    assert_eq!(v["leaves"], 2);
    let t = &v["tree"];
    assert_eq!(t["kind"], "split");
    assert_eq!(t["ridge"], serde_json::json!([3, 4]));
    for side in ["left", "right"] {
        assert_eq!(t[side]["kind"], "leaf");
        assert_eq!(t[side]["report"]["gorenstein_star"], true);
    }

    let s = json(&["decompose", &fixture("sigma.txt"), "--json"]);
    assert_eq!(s["leaves"], 1);
    assert_eq!(s["tree"]["kind"], "leaf");

    let c = json(&["decompose", &fixture("cycle_chain.txt"), "--json"]);
    assert_eq!(c["leaves"], 3);

    let text = stdout(&agstar(&["decompose", &fixture("two_spheres.txt")]));
    assert!(text.contains("split W={3,4}"), "{text}");
}

#[test]
fn betti_tables() {
    let t = json(&["betti", &fixture("boundary_tetrahedron.txt"), "--json"]);
    assert_eq!(t["mode"], "full");
    assert_eq!(t["type"], 1);
    assert_eq!(t["hilbert_check"], true);
    assert_eq!(t["projective_dimension"], 1);

    let s = json(&["betti", &fixture("sigma.txt"), "--type-only", "--json"]);
    assert_eq!(s["type"], 3);
    assert_eq!(
        s["type_column"],
        serde_json::json!([{"degree": 5, "value": 2}, {"degree": 6, "value": 1}])
    );
}

#[test]
fn exit_codes() {
    let sigma = fixture("sigma.txt");
    assert_eq!(code(&agstar(&["--help"])), 0);
    assert_eq!(code(&agstar(&["analyze", &sigma])), 0);
    assert_eq!(code(&agstar(&["frobnicate"])), 1);
    assert_eq!(code(&agstar(&["analyze", "/nonexistent/file.txt"])), 1);
    assert_eq!(code(&agstar(&["analyze", &sigma, "--field", "fp:4"])), 1);
    assert_eq!(code(&agstar(&["search", "--n", "3", "--d", "1", "--delta-parity"])), 1);
    assert_eq!(code(&agstar(&["decompose", &fixture("delta_prime.txt")])), 2);
    assert_eq!(code(&agstar(&["decompose", &fixture("link_7.txt")])), 2);
    assert_eq!(code(&agstar(&["betti", &sigma, "--full", "--max-n", "4"])), 3);
    assert_eq!(code(&agstar(&["search", "--n", "8", "--d", "4"])), 3);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2 3\n# fine\n2 x 4\n").unwrap();
    let o = agstar(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["analyze", "FIX:delta.txt", "--json"],
        vec!["analyze", "FIX:sigma.txt"],
        vec!["decompose", "FIX:cycle_chain.txt", "--json"],
        vec!["betti", "FIX:sigma.txt", "--json"],
        vec!["search", "--n", "5", "--d", "2", "--delta-parity"],
        vec!["search", "--n", "5", "--d", "3", "--iso"],
    ];
    for args in runs {
        let owned: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix("FIX:").map(fixture).unwrap_or_else(|| a.to_string()))
            .collect();
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        let first = agstar(&refs);
        assert_eq!(code(&first), 0);
        let second = Command::new(env!("CARGO_BIN_EXE_agstar"))
            .args(&refs)
            .env("AGSTAR_THREADS", "3")
            .output()
            .unwrap();
        assert_eq!(first.stdout, second.stdout, "{refs:?}");
    }
}

#[test]
fn four_cycles_by_search() {
    let records = ndjson(&["search", "--n", "4", "--d", "2", "--predicate", "gorenstein_star"]);
    let (hits, summary) = records.split_at(records.len() - 1);
    assert_eq!(hits.len(), 3);
    assert!(hits.iter().all(|h| h["record"] == "hit" && h["facets"].as_array().unwrap().len() == 4));
    assert_eq!(summary[0]["record"], "summary");
    assert_eq!(summary[0]["hits"], 3);
    assert_eq!(summary[0]["outcome"], "completed");
}

#[test]
fn eta_filtered_search_finds_sigma() {
    let records = ndjson(&[
        "search", "--n", "6", "--d", "3", "--predicate", "ag_star_indecomposable", "--eta", "2t", "--iso",
    ]);
    let hits = &records[..records.len() - 1];
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|h| h["report"]["eta_text"] == "2t" && h["report"]["type"] == 3));
}

#[test]
fn checkpoint_and_resume_reproduce_full_run() {
    let full = ndjson(&["search", "--n", "5", "--d", "2"]);
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("state.ckpt");
    let ck = ck.to_str().unwrap();

    let first = ndjson(&["search", "--n", "5", "--d", "2", "--limit", "5", "--checkpoint", ck]);
    assert_eq!(first.last().unwrap()["outcome"], "limit_reached");
    let text = std::fs::read_to_string(ck).unwrap();
    assert!(text.starts_with("agstar-checkpoint 1\nspec n=5 d=2 "), "{text}");

    let rest = ndjson(&["search", "--n", "5", "--d", "2", "--resume", ck]);
    let summary = rest.last().unwrap();
    assert_eq!(summary["outcome"], "completed");
    assert_eq!(summary, full.last().unwrap());

    let hits = |v: &[Value]| -> Vec<Value> { v.iter().filter(|r| r["record"] == "hit").cloned().collect() };
    let mut joined = hits(&first);
    joined.extend(hits(&rest));
    assert_eq!(joined, hits(&full));

    let o = agstar(&["search", "--n", "5", "--d", "3", "--resume", ck]);
    assert_eq!(code(&o), 1);
}

#[test]
fn parity_scan_reports_odd_delta() {
    let records = ndjson(&["search", "--n", "5", "--d", "2", "--delta-parity", "--iso"]);
    let s = records.last().unwrap();
    assert_eq!(s["odd_delta"], serde_json::json!([]));
    assert_eq!(s["delta_histogram"], serde_json::json!([[0, 1], [2, 1]]));
}

#[test]
fn schema_rejects_malformed_records() {
    let text = std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let good = json(&["analyze", &fixture("sigma.txt"), "--json"]);
    assert!(validator.is_valid(&good));
    let mut float = good.clone();
    float["report"]["type"] = serde_json::json!(3.0);
    float["report"]["delta"] = serde_json::json!(2.5);
    assert!(!validator.is_valid(&float));
    let mut extra = good.clone();
    extra["report"]["surprise"] = serde_json::json!(1);
    assert!(!validator.is_valid(&extra));
    let mut missing = good;
    missing.as_object_mut().unwrap().remove("input_sha256");
    assert!(!validator.is_valid(&missing));
}
