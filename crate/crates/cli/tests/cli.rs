use std::path::{Path, PathBuf};
use std::process::Command;

use caplim::io::parse_capacity;
use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: Value,
    stderr: String,
}

fn caplim(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_caplim"));
    cmd.args(args).env_remove("CAPLIM_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: serde_json::from_str(&text).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {text}")),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, doc: Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `X → T ← Y` with `X ≅ T`, `y1, y2 ↦ t1`, `y3 ↦ t2`, and `Z` its pullback.
fn pullback_square() -> Value {
    json!({
        "vertices": [
            {"id": "Z", "points": ["z11", "z12", "z23"]},
            {"id": "X", "points": ["x1", "x2"]},
            {"id": "Y", "points": ["y1", "y2", "y3"]},
            {"id": "T", "points": ["t1", "t2"]}
        ],
        "edges": [
            {"lesser": "X", "greater": "Z", "map": {"z11": "x1", "z12": "x1", "z23": "x2"}},
            {"lesser": "Y", "greater": "Z", "map": {"z11": "y1", "z12": "y2", "z23": "y3"}},
            {"lesser": "T", "greater": "X", "map": {"x1": "t1", "x2": "t2"}},
            {"lesser": "T", "greater": "Y", "map": {"y1": "t1", "y2": "t1", "y3": "t2"}}
        ]
    })
}

#[test]
fn choquet_prints_exact_and_decimal() {
    let dir = TempDir::new().unwrap();
    let cap = write(&dir, "cap.json", json!({"space": ["a", "b"], "values": ["0", "0.3", "0.5", "1"]}));
    let f = write(&dir, "f.json", json!({"space": ["a", "b"], "values": {"a": "2", "b": "1"}}));
    let run = caplim(&["choquet", s(&cap), s(&f)], &[]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, json!({"value": "13/10", "decimal": "1.3"}));
    assert!(run.stderr.is_empty());
}

#[test]
fn openness_on_a_single_vertex_passes() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", json!({"vertices": [{"id": "X", "points": ["a", "b", "c"]}]}));
    let run = caplim(&["certify", "openness", s(&d), "--trials", "200"], &[]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout["pass"], json!(true));
    assert_eq!(run.stdout["attempted"], json!(200));
}

#[test]
fn path_dependent_square_is_invalid() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "pd.json",
        json!({
            "vertices": [
                {"id": "Z", "points": ["z1", "z2"]},
                {"id": "X", "points": ["x1", "x2"]},
                {"id": "Y", "points": ["y1", "y2"]},
                {"id": "T", "points": ["t1", "t2"]}
            ],
            "edges": [
                {"lesser": "X", "greater": "Z", "map": {"z1": "x1", "z2": "x2"}},
                {"lesser": "Y", "greater": "Z", "map": {"z1": "y1", "z2": "y2"}},
                {"lesser": "T", "greater": "X", "map": {"x1": "t1", "x2": "t2"}},
                {"lesser": "T", "greater": "Y", "map": {"y1": "t2", "y2": "t1"}}
            ]
        }),
    );
    let run = caplim(&["validate", s(&d)], &[]);
    assert_eq!(run.code, 2);
    let err = &run.stdout["error"];
    assert_eq!(err["rule"], json!("path-independence"));
    assert_eq!(err["file"], json!(s(&d)));
    assert!(err["location"].as_str().unwrap().contains("z1"));
    assert!(!run.stderr.is_empty());
}

#[test]
fn malformed_and_invalid_capacities_name_file_and_rule() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", json!({"space": ["a", "b"], "values": {"a": "2", "b": "1"}}));
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"space\": [\"a\"").unwrap();
    let run = caplim(&["choquet", s(&broken), s(&f)], &[]);
    assert_eq!(run.code, 2);
    assert_eq!(run.stdout["error"]["rule"], json!("schema"));
    assert!(run.stdout["error"]["location"].as_str().unwrap().starts_with("line 1"));

    let bad = write(&dir, "bad.json", json!({"space": ["a", "b"], "values": ["0", "0.6", "0.5", "0.4"]}));
    let run = caplim(&["choquet", s(&bad), s(&f)], &[]);
    assert_eq!(run.code, 2);
    assert_eq!(run.stdout["error"]["rule"], json!("monotonicity"));
    assert_eq!(run.stdout["error"]["file"], json!(s(&bad)));
}

#[test]
fn validate_reports_projection_surjectivity() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "chain.json",
        json!({
            "vertices": [{"id": "A", "points": ["a1", "a2"]}, {"id": "B", "points": ["b1", "b2"]}],
            "edges": [{"lesser": "A", "greater": "B", "map": {"b1": "a1", "b2": "a1"}}]
        }),
    );
    let run = caplim(&["validate", s(&d)], &[]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout["threads"], json!(2));
    assert_eq!(run.stdout["surjective_projections"], json!({"A": false, "B": true}));
}

#[test]
fn limit_lists_threads_in_order() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "d.json",
        json!({"vertices": [{"id": "X", "points": ["a", "b"]}, {"id": "Y", "points": ["c", "d"]}]}),
    );
    let run = caplim(&["limit", s(&d)], &[]);
    assert_eq!(run.code, 0);
    let labels: Vec<&str> = run.stdout["threads"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["(a,c)", "(a,d)", "(b,c)", "(b,d)"]);
    assert_eq!(run.stdout["projections"]["Y"]["map"]["(b,c)"], json!("c"));
}

#[test]
fn max_limit_size_guards_large_limits() {
    let dir = TempDir::new().unwrap();
    let five = json!(["p1", "p2", "p3", "p4", "p5"]);
    let d = write(
        &dir,
        "big.json",
        json!({"vertices": [{"id": "X", "points": five}, {"id": "Y", "points": ["q1", "q2", "q3", "q4"]}]}),
    );
    let run = caplim(&["certify", "surjectivity", s(&d), "--trials", "1"], &[]);
    assert_eq!(run.code, 2);
    assert_eq!(run.stdout["error"]["rule"], json!("max-limit-size"));
    let run = caplim(&["--max-limit-size", "20", "limit", s(&d)], &[]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout["threads"].as_array().unwrap().len(), 20);
}

#[test]
fn pushforward_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let cap = write(&dir, "cap.json", json!({"space": ["a", "b", "c"], "values": ["0", "1/4", "0", "1/2", "0", "1/2", "1/3", "1"]}));
    let map = write(&dir, "m.json", json!({"domain": ["a", "b", "c"], "codomain": ["u", "v"], "map": {"a": "u", "b": "u", "c": "v"}}));
    let run = caplim(&["pushforward", s(&cap), s(&map)], &[]);
    assert_eq!(run.code, 0);
    // Frozen by hand: {u} ← {a,b}, {v} ← {c}.
    assert_eq!(run.stdout, json!({"space": ["u", "v"], "values": ["0", "1/2", "0", "1"]}));
    let again = parse_capacity(&run.stdout.to_string()).unwrap();
    assert_eq!(caplim::io::capacity_json(&again), run.stdout);
}

#[test]
fn join_recovers_both_marginals() {
    let dir = TempDir::new().unwrap();
    let sq = write(&dir, "sq.json", pullback_square());
    // ν({y1,y2}) = μ({x1}) and ν({y3}) = μ({x2}), so the pair is compatible.
    let mu = write(&dir, "mu.json", json!({"space": ["x1", "x2"], "values": ["0", "1/2", "1/3", "1"]}));
    let nu = write(
        &dir,
        "nu.json",
        json!({"space": ["y1", "y2", "y3"], "values": ["0", "1/4", "1/5", "1/2", "1/3", "1/2", "2/5", "1"]}),
    );
    let run = caplim(&["join", s(&sq), s(&mu), s(&nu)], &[]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let lambda = parse_capacity(&run.stdout.to_string()).unwrap();
    assert_eq!(lambda.space().points(), ["z11", "z12", "z23"]);
    let square = pullback_square();
    let leg = |edge: usize, codomain: Value| {
        let doc = json!({"domain": ["z11", "z12", "z23"], "codomain": codomain, "map": square["edges"][edge]["map"]});
        caplim::io::parse_map(&doc.to_string()).unwrap()
    };
    let load = |p: &Path| parse_capacity(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(lambda.pushforward(&leg(0, json!(["x1", "x2"]))).unwrap(), load(&mu));
    assert_eq!(lambda.pushforward(&leg(1, json!(["y1", "y2", "y3"]))).unwrap(), load(&nu));

    let mismatched = write(&dir, "mu2.json", json!({"space": ["x1", "x2"], "values": ["0", "1/2", "1/2", "1"]}));
    let run = caplim(&["join", s(&sq), s(&mismatched), s(&nu)], &[]);
    assert_eq!(run.code, 2);
    assert_eq!(run.stdout["error"]["rule"], json!("marginals-agree"));
    assert_eq!(run.stdout["error"]["file"], json!(s(&mismatched)));
}

#[test]
fn extend_matches_marginals_and_emits_envelopes() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "d.json",
        json!({"vertices": [{"id": "X", "points": ["a", "b"]}, {"id": "Y", "points": ["c", "d"]}]}),
    );
    let lam0 = write(
        &dir,
        "lam0.json",
        json!({
            "space": ["(a,c)", "(a,d)", "(b,c)", "(b,d)"],
            "values": ["0", "1/4", "1/4", "1/2", "1/4", "1/2", "1/2", "3/4",
                       "1/4", "1/2", "1/2", "3/4", "1/2", "3/4", "3/4", "1"]
        }),
    );
    let mx = write(&dir, "mx.json", json!({"space": ["a", "b"], "values": ["0", "3/5", "1/5", "1"]}));
    let my = write(&dir, "my.json", json!({"space": ["c", "d"], "values": ["0", "1/2", "1/2", "1"]}));
    let run = caplim(
        &["extend", s(&d), s(&lam0), "--marginal", &format!("X={}", s(&mx)), "--marginal", &format!("Y={}", s(&my)), "--emit-envelopes"],
        &[],
    );
    assert_eq!(run.code, 0, "{}", run.stdout);
    let lambda = parse_capacity(&run.stdout["lambda"].to_string()).unwrap();
    let lower = parse_capacity(&run.stdout["lower"].to_string()).unwrap();
    let upper = parse_capacity(&run.stdout["upper"].to_string()).unwrap();
    for a in lambda.space().subsets() {
        assert!(lower.value(a) <= lambda.value(a) && lambda.value(a) <= upper.value(a));
    }
    // {(a,c), (a,d)} is the cylinder over {a}.
    assert_eq!(run.stdout["lambda"]["values"][3], json!("3/5"));

    let run = caplim(&["extend", s(&d), s(&lam0), "--marginal", &format!("X={}", s(&mx))], &[]);
    assert_eq!(run.code, 2);
}

#[test]
fn bicommutativity_grid_passes_on_a_pullback() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "sq.json",
        json!({
            "vertices": [
                {"id": "Z", "points": ["z11", "z22"]},
                {"id": "X", "points": ["x1", "x2"]},
                {"id": "Y", "points": ["y1", "y2"]},
                {"id": "T", "points": ["t1", "t2"]}
            ],
            "edges": [
                {"lesser": "X", "greater": "Z", "map": {"z11": "x1", "z22": "x2"}},
                {"lesser": "Y", "greater": "Z", "map": {"z11": "y1", "z22": "y2"}},
                {"lesser": "T", "greater": "X", "map": {"x1": "t1", "x2": "t2"}},
                {"lesser": "T", "greater": "Y", "map": {"y1": "t1", "y2": "t2"}}
            ]
        }),
    );
    let run = caplim(&["certify", "bicommutativity", s(&d), "--grid", "2"], &[]);
    assert_eq!(run.code, 0);
    // Frozen: X ≅ Y ≅ T, so compatible pairs are the 9 grid capacities on T.
    assert_eq!(run.stdout["attempted"], json!(9));
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", json!({"vertices": [{"id": "X", "points": ["a", "b"]}]}));
    let run = caplim(&["certify", "pinning", s(&d), "--trials", "20"], &[("CAPLIM_SEED", "77")]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout["seed"], json!(77));
    let flag = caplim(&["certify", "pinning", s(&d), "--trials", "20", "--seed", "5"], &[("CAPLIM_SEED", "77")]);
    assert_eq!(flag.stdout["seed"], json!(5));
}

#[test]
fn singleton_only_openness_can_fail_with_a_replayable_counterexample() {
    let dir = TempDir::new().unwrap();
    let d = write(
        &dir,
        "d.json",
        json!({"vertices": [{"id": "X", "points": ["a", "b"]}, {"id": "Y", "points": ["c", "d", "e"]}]}),
    );
    let run = caplim(&["certify", "openness", s(&d), "--singleton-only", "--trials", "500", "--seed", "0"], &[]);
    // Singleton constraints alone do not bound the movement of λ.
    assert_eq!(run.code, 1);
    assert_eq!(run.stdout["pass"], json!(false));
    let cx = &run.stdout["counterexamples"][0];
    let lam0 = write(&dir, "lam0.json", cx["inputs"]["lambda0"].clone());
    let replay = caplim(&["certify", "openness", s(&d), "--lambda0", s(&lam0), "--trials", "20"], &[]);
    assert_eq!(replay.code, 0, "{}", replay.stdout);
}
