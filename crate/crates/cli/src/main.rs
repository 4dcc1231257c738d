use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rotplan::report;
use rotplan::commands::{self, Output, EXIT_ERROR, EXIT_NO, EXIT_OK};
use rotplan_core::pipeline::{Limits, DEFAULT_MAX_STEPS};

/// Planar rotation systems of 2-complexes.
#[derive(Parser)]
#[command(name = "rotplan", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the stretch trace to this file, as JSON under `--json`.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a planar rotation system exists. Exit 0 embeddable, 2 obstructed.
    Check {
        /// Input documents; `-` reads stdin. Several files are checked in parallel.
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Exhaustive search. Exit 0 found, 2 none.
    Oracle {
        file: String,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Apply one stretching operation: branch, sep2, edge, reversible, unstretch, split or subdivide.
    Stretch {
        file: String,
        #[arg(long)]
        op: String,
        args: Vec<String>,
    },
    /// Show the link graph at a vertex.
    Link { file: String, vertex: String },
    /// Generate a complex from a named family, or `random` with a seed.
    Gen {
        name: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the rotation system or certificate in a document. Exit 0 valid, 2 rejected.
    Verify { file: String },
}

fn read_input(name: &str) -> Result<String> {
    if name == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(name).with_context(|| format!("reading {name}"))
    }
}

fn write_trace(path: Option<&Path>, out: &Output, json: bool) -> Result<()> {
    if let (Some(p), Some(t)) = (path, &out.trace) {
        let text = if json { serde_json::to_string_pretty(t)? + "\n" } else { report::trace_text(t) };
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn check_many(files: &[String], limits: &Limits, json: bool) -> i32 {
    let results: Vec<(String, Result<Output>)> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| s.spawn(move || (f.clone(), read_input(f).and_then(|t| commands::check(&t, limits, json)))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut code = EXIT_OK;
    for (f, r) in results {
        match r {
            Ok(o) => {
                println!("{f}: {}", if o.code == EXIT_OK { "embeddable" } else { "obstructed" });
                if o.code == EXIT_NO && code == EXIT_OK {
                    code = EXIT_NO;
                }
            }
            Err(e) => {
                println!("{f}: error: {e:#}");
                code = EXIT_ERROR;
            }
        }
    }
    code
}

fn run(cli: Cli) -> Result<i32> {
    let out = match cli.command {
        Command::Check { files, max_steps } => {
            let limits = Limits { max_steps };
            if files.len() > 1 {
                return Ok(check_many(&files, &limits, cli.json));
            }
            commands::check(&read_input(&files[0])?, &limits, cli.json)?
        }
        Command::Oracle { file, cap } => commands::oracle(&read_input(&file)?, cap, cli.json)?,
        Command::Stretch { file, op, args } => commands::stretch(&read_input(&file)?, &op, &args)?,
        Command::Link { file, vertex } => commands::link(&read_input(&file)?, &vertex, cli.json)?,
        Command::Gen { name, params, seed } => commands::gen(&name, &params, seed)?,
        Command::Verify { file } => commands::verify(&read_input(&file)?)?,
    };
    write_trace(cli.trace.as_deref(), &out, cli.json)?;
    print!("{}", out.stdout);
    Ok(out.code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
