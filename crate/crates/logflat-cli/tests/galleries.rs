//! The bundled galleries run through the library API, checked against their goldens and against
//! verdicts derived by hand.

use logflat_cli::gallery::{find, GALLERIES};
use logflat_cli::report::{self, RunOptions};
use serde_json::Value;

fn run(name: &str) -> Value {
    let g = find(name).unwrap();
    let opts = RunOptions { timing: false, ..RunOptions::default() };
    let (file, ws) = report::prepare(g.input, opts.field).unwrap();
    let r = report::run(&file, &ws, opts).unwrap();
    assert_eq!(r.task_errors, 0, "{name}");
    r.value
}

fn verdict(report: &Value, task: &str) -> Value {
    let t = report["tasks"].as_array().unwrap().iter().find(|t| t["name"] == task).unwrap_or_else(|| panic!("no task {task}"));
    t["verdict"].clone()
}

#[test]
fn every_gallery_matches_its_golden() {
    for g in GALLERIES {
        assert_eq!(run(g.name), g.golden_value(), "{}", g.name);
    }
}

#[test]
fn goldens_are_pretty_printed_reports() {
    for g in GALLERIES {
        assert_eq!(report::render_json(&g.golden_value()), g.golden, "{}", g.name);
    }
}

#[test]
fn toric_point_verdicts() {
    let r = run("toric-point");
    let got: Vec<Value> = ["plane", "origin", "antidiagonal", "shifted_line"].iter().map(|t| verdict(&r, t)).collect();
    assert_eq!(got, [true, false, false, true]);
    assert_eq!(r["tasks"][0]["result"]["count"], 4);
}

#[test]
fn nodal_descent_verdicts() {
    let r = run("nodal-descent");
    for t in ["glue_node", "glue_fat_points", "roundtrip_structure", "roundtrip_branch_point", "roundtrip_twisted"] {
        assert_eq!(verdict(&r, t), true, "{t}");
    }
    let node = &r["tasks"][0]["result"]["ring"];
    assert_eq!(node["vars"], serde_json::json!(["x", "y"]));
    assert_eq!(node["relations"], serde_json::json!(["x*y"]));
    assert_eq!(r["tasks"][1]["result"]["ring"]["dimension"], 4);
    let anti = &r["tasks"].as_array().unwrap().iter().find(|t| t["name"] == "roundtrip_antidiagonal").unwrap()["result"];
    assert_eq!(anti["dims"], serde_json::json!([2, 1]));
    assert_eq!(anti["refuted"], true);
    let hom = &r["tasks"].as_array().unwrap().iter().find(|t| t["name"] == "hom_ext_branch_point").unwrap()["result"];
    assert_eq!((hom["hom"].as_u64(), hom["ext1"].as_u64()), (Some(1), Some(1)));
}

#[test]
fn nodal_degeneration_verdicts() {
    let r = run("nodal-degeneration");
    for (t, v) in [
        ("panel_structure", true),
        ("panel_branch_point", true),
        ("panel_antidiagonal", false),
        ("panel_residue_field", false),
        ("unit_extension", true),
        ("family_section", true),
        ("family_antidiagonal", false),
    ] {
        assert_eq!(verdict(&r, t), v, "{t}");
    }
}

#[test]
fn smooth_divisor_and_expansions_verdicts() {
    let r = run("smooth-divisor");
    for (t, v) in [("line", true), ("origin", false), ("unit_point", true), ("fat_origin", false)] {
        assert_eq!(verdict(&r, t), v, "{t}");
    }
    let e = run("expansions");
    for (t, v) in [("flat_beyond_two", true), ("flat_maximal", false), ("classify_folding", false), ("lift_doubling", true)] {
        assert_eq!(verdict(&e, t), v, "{t}");
    }
    let basis = &e["tasks"].as_array().unwrap().iter().find(|t| t["name"] == "basis_beyond_two").unwrap()["result"]["basis"];
    assert_eq!(basis, &serde_json::json!([{"elem": [2], "component": 0}]));
}
