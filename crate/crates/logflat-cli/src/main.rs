use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use logflat::polyalg::Field;
use logflat_cli::gallery::{self, GALLERIES};
use logflat_cli::report::{self, RunOptions, DEFAULT_WINDOW};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

/// Decides flatness questions for monoids, graded rings, charts and gluings from a JSON problem file.
#[derive(Parser)]
#[command(name = "logflat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a problem file ("-" reads standard input).
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Parse, validate and build the objects of a problem file without running tasks.
    Validate {
        file: PathBuf,
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Run a bundled example and compare it with its expected report.
    Gallery {
        name: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// List the bundled examples.
    ListGalleries,
}

#[derive(Args)]
struct Opts {
    /// Coefficient field: q or fp:<prime>.
    #[arg(long, default_value = "q")]
    field: String,
    /// Monomial order; only degrevlex is available.
    #[arg(long, default_value = "degrevlex")]
    order: String,
    /// Default window for bounded checks.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the JSON report (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Emit a human-readable summary instead of JSON.
    #[arg(long)]
    pretty: bool,
    /// Leave out the timing block so the report is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

/// Exit status for invalid input or usage, as opposed to a failed task.
const INVALID: u8 = 2;

impl Opts {
    fn run_options(&self) -> Result<RunOptions> {
        if self.order != "degrevlex" {
            bail!("unsupported monomial order '{}' (only degrevlex)", self.order);
        }
        Ok(RunOptions { field: Field::parse(&self.field)?, window: self.window, timing: !self.no_timing })
    }

    fn emit(&self, v: &serde_json::Value) -> Result<()> {
        let text = if self.pretty { report::render_text(v) } else { report::render_json(v) };
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn invalid(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(INVALID)
}

fn check(text: &str, opts: &Opts) -> Result<(serde_json::Value, usize), anyhow::Error> {
    let run = opts.run_options()?;
    let (file, ws) = report::prepare(text, run.field)?;
    let r = report::run(&file, &ws, run)?;
    Ok((r.value, r.task_errors))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, opts } => {
            let text = match read_input(&file) {
                Ok(t) => t,
                Err(e) => return invalid(e),
            };
            let (value, errors) = match check(&text, &opts) {
                Ok(r) => r,
                Err(e) => return invalid(e),
            };
            if let Err(e) = opts.emit(&value) {
                return invalid(e);
            }
            if errors > 0 {
                eprintln!("{errors} task(s) failed");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Command::Validate { file, field } => {
            let result = read_input(&file).and_then(|text| {
                let (f, _) = report::prepare(&text, Field::parse(&field)?)?;
                Ok(f)
            });
            match result {
                Ok(f) => {
                    println!("valid: {} objects, {} tasks", f.objects.len(), f.tasks.len());
                    ExitCode::SUCCESS
                }
                Err(e) => invalid(e),
            }
        }
        Command::Gallery { name, opts } => {
            let Some(g) = gallery::find(&name) else {
                let names: Vec<&str> = GALLERIES.iter().map(|g| g.name).collect();
                return invalid(anyhow::anyhow!("unknown gallery '{name}' (available: {})", names.join(", ")));
            };
            let (value, errors) = match check(g.input, &opts) {
                Ok(r) => r,
                Err(e) => return invalid(e),
            };
            if let Err(e) = opts.emit(&value) {
                return invalid(e);
            }
            let defaults = opts.field == "q" && opts.window == DEFAULT_WINDOW;
            if !defaults {
                eprintln!("gallery {name}: golden comparison skipped for non-default settings");
            } else if report::strip_timing(&value) != g.golden_value() {
                eprintln!("gallery {name}: report differs from the expected report");
                return ExitCode::from(1);
            } else {
                eprintln!("gallery {name}: matches the expected report");
            }
            if errors > 0 {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Command::ListGalleries => {
            for g in GALLERIES {
                println!("{:<20} {}", g.name, g.description);
            }
            ExitCode::SUCCESS
        }
    }
}
