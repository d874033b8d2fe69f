//! Parsing problem files, running them, and rendering reports.

use crate::problem::ProblemFile;
use crate::tasks::{self, Settings};
use crate::workspace::{task_label, Workspace};
use anyhow::{Context, Result};
use logflat::polyalg::Field;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::time::Instant;

pub const FORMAT: &str = "logflat-report";
pub const DEFAULT_WINDOW: usize = 4;

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub field: Field,
    pub window: usize,
    /// Include the wall-clock timing block, the only nondeterministic part of a report.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { field: Field::Q, window: DEFAULT_WINDOW, timing: true }
    }
}

pub struct Report {
    pub value: Value,
    pub task_errors: usize,
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Q => "q".to_string(),
        Field::Fp(p) => format!("fp:{p}"),
    }
}

/// Parses a problem file. Syntax and schema errors carry the line and column.
pub fn parse(text: &str) -> Result<ProblemFile> {
    serde_json::from_str(text).context("invalid problem file")
}

/// Parses, validates and builds every object; the error case means invalid input.
pub fn prepare(text: &str, field: Field) -> Result<(ProblemFile, Workspace)> {
    let file = parse(text)?;
    let ws = Workspace::build(&file, field)?;
    Ok((file, ws))
}

/// Runs the tasks in order. Task failures are recorded in the report, not returned.
pub fn run(file: &ProblemFile, ws: &Workspace, opts: RunOptions) -> Result<Report> {
    let settings = Settings { window: opts.window };
    let start = Instant::now();
    let mut entries = vec![];
    let mut times = vec![];
    let (mut errors, mut yes, mut no) = (0, 0, 0);
    for (i, task) in file.tasks.iter().enumerate() {
        let t0 = Instant::now();
        let name = task_label(task.name.as_deref(), i);
        let mut entry = json!({"name": name, "kind": task.spec.kind()});
        match tasks::run(ws, &task.spec, settings) {
            Ok(out) => {
                match out.verdict {
                    Some(true) => yes += 1,
                    Some(false) => no += 1,
                    None => {}
                }
                entry["status"] = json!("ok");
                entry["verdict"] = json!(out.verdict);
                entry["result"] = out.result;
            }
            Err(e) => {
                errors += 1;
                entry["status"] = json!("error");
                entry["error"] = json!(format!("{e:#}"));
            }
        }
        times.push(json!({"name": name, "ms": millis(t0)}));
        entries.push(entry);
    }
    let mut value = json!({
        "format": FORMAT,
        "version": 1,
        "engine": {
            "name": "logflat",
            "version": env!("CARGO_PKG_VERSION"),
            "field": field_name(opts.field),
            "characteristic": opts.field.characteristic(),
            "order": "degrevlex",
            "window": opts.window,
            "execution": "sequential",
        },
        "input": serde_json::to_value(file)?,
        "summary": {
            "tasks": file.tasks.len(),
            "errors": errors,
            "verdicts_true": yes,
            "verdicts_false": no,
        },
        "tasks": entries,
    });
    if opts.timing {
        value["timing"] = json!({"total_ms": millis(start), "tasks": times});
    }
    Ok(Report { value, task_errors: errors })
}

fn millis(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// The report without its timing block.
pub fn strip_timing(v: &Value) -> Value {
    let mut v = v.clone();
    if let Some(o) = v.as_object_mut() {
        o.remove("timing");
    }
    v
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// A short human-readable summary: one line per task plus its scalar results.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let e = &v["engine"];
    let _ = writeln!(out, "logflat report: field {}, order {}, window {}", e["field"].as_str().unwrap_or("?"), e["order"].as_str().unwrap_or("?"), e["window"]);
    for t in v["tasks"].as_array().into_iter().flatten() {
        let (name, kind) = (t["name"].as_str().unwrap_or(""), t["kind"].as_str().unwrap_or(""));
        if t["status"] == "error" {
            let _ = writeln!(out, "  {name} [{kind}]: ERROR {}", t["error"].as_str().unwrap_or(""));
            continue;
        }
        let verdict = match t["verdict"].as_bool() {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        let _ = writeln!(out, "  {name} [{kind}]: {verdict}");
        if let Some(obj) = t["result"].as_object() {
            let scalars: Vec<String> = obj
                .iter()
                .filter(|(_, x)| x.is_boolean() || x.is_number() || x.is_string())
                .map(|(k, x)| format!("{k}={}", x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())))
                .collect();
            if !scalars.is_empty() {
                let _ = writeln!(out, "      {}", scalars.join(" "));
            }
        }
    }
    let s = &v["summary"];
    let _ = writeln!(out, "summary: {} tasks, {} errors, {} yes, {} no", s["tasks"], s["errors"], s["verdicts_true"], s["verdicts_false"]);
    if let Some(ms) = v["timing"]["total_ms"].as_f64() {
        let _ = writeln!(out, "time: {ms} ms");
    }
    out
}
