//! End-to-end runs of the `logflat` binary: exit codes, report shape, determinism.

use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logflat"))
}

fn temp_file(contents: &str) -> PathBuf {
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let n = COUNTER.fetch_add(1, Ordering::SeqCst);
    let p = std::env::temp_dir().join(format!("logflat-cli-test-{}-{n}.json", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

fn check(contents: &str, extra: &[&str]) -> Output {
    let p = temp_file(contents);
    let out = bin().arg("check").arg(&p).args(extra).output().unwrap();
    std::fs::remove_file(&p).ok();
    out
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not a report: {e}"))
}

fn nodal_file() -> String {
    json!({
        "version": 1,
        "objects": [
            {"name": "B", "kind": "ring", "vars": ["x", "y"], "relations": ["x*y"]},
            {"name": "M", "kind": "module", "ring": "B", "ideal": ["x + y"]}
        ],
        "tasks": [{"name": "panel", "kind": "nodal_panel", "module": "M"}]
    })
    .to_string()
}

#[test]
fn nodal_panel_of_the_antidiagonal_is_all_false() {
    let out = check(&nodal_file(), &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let t = &r["tasks"][0];
    assert_eq!(t["status"], "ok");
    assert_eq!(t["verdict"], false);
    let res = t["result"].as_object().unwrap();
    let entries: Vec<&Value> = res.iter().filter(|(k, _)| *k != "all_agree").map(|(_, v)| v).collect();
    assert_eq!(entries.len(), 10);
    assert!(entries.iter().all(|v| **v == false));
    assert_eq!(res["all_agree"], true);
}

#[test]
fn unknown_kind_is_a_validation_error() {
    let file = r#"{"version": 1, "objects": [{"name": "a", "kind": "sheaf"}], "tasks": []}"#;
    let out = check(file, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn unknown_task_kind_is_a_validation_error() {
    let file = r#"{"version": 1, "objects": [], "tasks": [{"kind": "integrate"}]}"#;
    assert_eq!(check(file, &[]).status.code(), Some(2));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let out = check("{\n  \"version\": 1,\n  \"objects\": [,]\n}", &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");
}

#[test]
fn empty_task_list_gives_an_empty_report() {
    let out = check(r#"{"version": 1, "objects": [], "tasks": []}"#, &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["tasks"], json!([]));
    assert_eq!(r["summary"]["tasks"], 0);
    assert_eq!(r["format"], "logflat-report");
}

#[test]
fn structural_errors_exit_with_two() {
    let cases = [
        // wrong version
        r#"{"version": 2, "objects": [], "tasks": []}"#,
        // duplicate names
        r#"{"version": 1, "objects": [{"name": "R", "kind": "ring", "vars": ["x"]}, {"name": "R", "kind": "ring", "vars": ["y"]}]}"#,
        // unresolved reference
        r#"{"version": 1, "objects": [], "tasks": [{"kind": "primes", "monoid": "N"}]}"#,
        // reference to an object of the wrong kind
        r#"{"version": 1, "objects": [{"name": "R", "kind": "ring", "vars": ["x"]}], "tasks": [{"kind": "primes", "monoid": "R"}]}"#,
        // forward reference
        r#"{"version": 1, "objects": [{"name": "M", "kind": "module", "ring": "R"}, {"name": "R", "kind": "ring", "vars": ["x"]}]}"#,
        // missing required field
        r#"{"version": 1, "objects": [{"name": "N", "kind": "monoid", "rank": 1}]}"#,
        // a construction that fails: the image is not in the target monoid
        r#"{"version": 1, "objects": [{"name": "N", "kind": "monoid", "rank": 1, "gens": [[1]]}, {"name": "h", "kind": "monoid_hom", "source": "N", "target": "N", "images": [[-1]]}]}"#,
        // unparsable polynomial
        r#"{"version": 1, "objects": [{"name": "R", "kind": "ring", "vars": ["x"], "relations": ["x +* 1"]}]}"#,
        // roundtrip with neither a module nor a datum
        r#"{"version": 1, "objects": [{"name": "g", "kind": "gluing", "preset": "nodal"}], "tasks": [{"kind": "roundtrip", "gluing": "g"}]}"#,
    ];
    for c in cases {
        let out = check(c, &[]);
        assert_eq!(out.status.code(), Some(2), "{c}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn task_errors_are_reported_and_exit_with_one() {
    let file = json!({
        "version": 1,
        "objects": [
            {"name": "N2", "kind": "monoid", "rank": 2, "gens": [[1, 0], [0, 1]]},
            {"name": "L", "kind": "module_over_monoid", "monoid": "N2", "class": "localized", "inverted": [[1, 0]], "gens": [[0, 0]]},
            {"name": "g", "kind": "gluing", "preset": "nodal"},
            {"name": "C", "kind": "ring", "vars": ["x", "y"], "relations": ["x*y"]},
            {"name": "line", "kind": "module", "ring": "C", "ideal": ["x + y"]},
            {"name": "point", "kind": "module", "ring": "C", "ideal": ["x - 1"]}
        ],
        "tasks": [
            {"name": "flat", "kind": "flat", "module": "L"},
            {"name": "basis", "kind": "basis", "module": "L"},
            {"name": "hom_ext", "kind": "hom_ext", "gluing": "g", "module": "line", "other": "point"},
            {"name": "after", "kind": "flat", "module": "L"}
        ]
    });
    let out = check(&file.to_string(), &[]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let status: Vec<&str> = r["tasks"].as_array().unwrap().iter().map(|t| t["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["ok", "error", "error", "ok"]);
    assert!(r["tasks"][1]["error"].as_str().unwrap().contains("not finitely generated"));
    assert!(r["tasks"][2]["error"].as_str().unwrap().contains("Tor gate"));
    assert_eq!(r["summary"]["errors"], 2);
}

#[test]
fn a_false_verdict_is_not_an_error() {
    let file = json!({
        "version": 1,
        "objects": [
            {"name": "N2", "kind": "monoid", "rank": 2, "gens": [[1, 0], [0, 1]]},
            {"name": "m", "kind": "module_over_monoid", "monoid": "N2", "class": "ideal", "gens": [[1, 0], [0, 1]]}
        ],
        "tasks": [{"kind": "flat", "module": "m"}]
    });
    let out = check(&file.to_string(), &[]);
    assert_eq!(out.status.code(), Some(0));
    let t = &report(&out)["tasks"][0];
    assert_eq!(t["name"], "task1");
    assert_eq!(t["verdict"], false);
    assert_eq!(t["result"]["witness"], json!([{"elem": [1, 0], "component": 0}, {"elem": [0, 1], "component": 0}]));
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let a = check(&nodal_file(), &["--no-timing"]);
    let b = check(&nodal_file(), &["--no-timing"]);
    assert_eq!(a.stdout, b.stdout);
    let (x, y) = (report(&check(&nodal_file(), &[])), report(&check(&nodal_file(), &[])));
    assert!(x.get("timing").is_some());
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(x), strip(y));
}

#[test]
fn embedded_input_reproduces_the_verdicts() {
    let src = include_str!("../galleries/toric-point.json");
    let first = report(&check(src, &["--no-timing"]));
    let again = report(&check(&first["input"].to_string(), &["--no-timing"]));
    assert_eq!(first, again);
}

#[test]
fn engine_settings_are_recorded() {
    let out = check(&nodal_file(), &["--field", "fp:5", "--window", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["engine"]["field"], "fp:5");
    assert_eq!(r["engine"]["characteristic"], 5);
    assert_eq!(r["engine"]["order"], "degrevlex");
    assert_eq!(r["engine"]["window"], 6);
    assert_eq!(r["tasks"][0]["verdict"], false);
}

#[test]
fn bad_flags_exit_with_two() {
    for flags in [&["--field", "fp:4"][..], &["--field", "r"], &["--order", "lex"], &["--json", "--pretty"]] {
        assert_eq!(check(&nodal_file(), flags).status.code(), Some(2), "{flags:?}");
    }
}

#[test]
fn big_integers_round_trip_as_strings() {
    let big = "100000000000000000000";
    let file = json!({
        "version": 1,
        "objects": [{"name": "N", "kind": "monoid", "rank": 1, "gens": [[big]]}],
        "tasks": [{"kind": "primes", "monoid": "N"}]
    });
    let out = check(&file.to_string(), &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["input"]["objects"][0]["gens"], json!([[big]]));
    assert_eq!(r["tasks"][0]["result"]["count"], 2);
    assert_eq!(r["tasks"][0]["result"]["primes"][1]["gens"], json!([[big]]));
}

#[test]
fn pretty_output_and_out_path() {
    let out = check(&nodal_file(), &["--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("panel [nodal_panel]: no"), "{text}");
    assert!(text.contains("summary: 1 tasks, 0 errors"), "{text}");
    let dest = std::env::temp_dir().join(format!("logflat-cli-out-{}.json", std::process::id()));
    let out = check(&nodal_file(), &["--out", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    std::fs::remove_file(&dest).ok();
    assert_eq!(written["tasks"][0]["kind"], "nodal_panel");
}

#[test]
fn standard_input_is_accepted() {
    let mut child = bin().args(["check", "-", "--no-timing"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(nodal_file().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, check(&nodal_file(), &["--no-timing"]).stdout);
}

#[test]
fn validate_builds_objects_without_running_tasks() {
    let p = temp_file(&nodal_file());
    let out = bin().arg("validate").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "valid: 2 objects, 1 tasks");
    std::fs::write(&p, r#"{"version": 1, "objects": [{"name": "N", "kind": "monoid"}]}"#).unwrap();
    assert_eq!(bin().arg("validate").arg(&p).output().unwrap().status.code(), Some(2));
    std::fs::remove_file(&p).ok();
    let missing = bin().args(["validate", "/nonexistent/problem.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn galleries_match_their_goldens() {
    let list = bin().arg("list-galleries").output().unwrap();
    let names: Vec<String> =
        String::from_utf8(list.stdout).unwrap().lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(names, ["smooth-divisor", "toric-point", "nodal-descent", "nodal-degeneration", "expansions"]);
    for name in &names {
        let out = bin().args(["gallery", name]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).contains("matches the expected report"));
    }
}

#[test]
fn unknown_gallery_is_an_error() {
    let out = bin().args(["gallery", "does-not-exist"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown gallery"));
}

#[test]
fn clutching_matrices_are_row_major() {
    // phi sends e1 to e1 and e2 to 2*e1 + e2 (column j is the image of generator j).
    let file = |phi: Value, inv: Value| {
        json!({
            "version": 1,
            "objects": [
                {"name": "g", "kind": "gluing", "preset": "nodal"},
                {"name": "X", "kind": "ring", "vars": ["x"]},
                {"name": "Y", "kind": "ring", "vars": ["y"]},
                {"name": "A", "kind": "module", "ring": "X", "rank": 2},
                {"name": "B", "kind": "module", "ring": "Y", "rank": 2},
                {"name": "d", "kind": "descent_datum", "gluing": "g", "m1": "A", "m2": "B", "phi": phi, "phi_inv": inv}
            ],
            "tasks": [{"kind": "roundtrip", "datum": "d"}, {"kind": "descend", "datum": "d"}]
        })
        .to_string()
    };
    let good = check(&file(json!([["1", "2"], ["0", "1"]]), json!([["1", "-2"], ["0", "1"]])), &[]);
    assert_eq!(good.status.code(), Some(0), "{}", String::from_utf8_lossy(&good.stderr));
    let r = report(&good);
    assert_eq!(r["tasks"][0]["verdict"], true);
    assert_eq!(r["tasks"][1]["result"]["branch_gates"], json!([true, true]));
    // The transpose is not inverse to the given phi_inv, so reading columns as rows is caught.
    let transposed = check(&file(json!([["1", "0"], ["2", "1"]]), json!([["1", "-2"], ["0", "1"]])), &[]);
    assert_eq!(transposed.status.code(), Some(2));
    let ragged = check(&file(json!([["1", "2"]]), Value::Null), &[]);
    assert_eq!(ragged.status.code(), Some(2));
}
