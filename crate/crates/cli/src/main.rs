// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! `ictz`: run the verification pipelines and inspect their building blocks.
//!
//! Exit codes: 0 verified, 2 verified conditionally on listed facts,
//! 1 contradiction, stopped run or any other error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ictz_core::io::{parse_json, read_json};
use ictz_core::kodaira::KodairaFiber;
use ictz_core::lattice::{
    enumerate_even_overlattices, enumerate_even_posdef_binary, enumerate_integral_overlattices,
    BinaryEvenForm, GramLattice,
};
use ictz_core::pipeline::{self, Report};
use ictz_core::surfaces::{invariants, quadratic_base_change, BranchSpec, SurfaceConfig};

#[derive(Parser)]
#[command(
    name = "ictz",
    version,
    about = "Exact verification of integral invariant cycle counterexamples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification pipeline.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Kodaira fiber data.
    Fiber {
        #[command(subcommand)]
        command: FiberCommand,
    },
    /// Binary lattice utilities.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Quadratic base change of a configuration.
    Basechange {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        branch: PathBuf,
    },
}

#[derive(clap::Args)]
struct ReportArgs {
    /// Write the JSON report to PATH, or to stdout when PATH is `-` or omitted.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,
    /// Treat a conditional verification as failure.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Target {
    /// A bundled example (1 or 2).
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// User-supplied seed, branch spec and assumptions.
    Custom {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        branch: PathBuf,
        #[arg(long)]
        assumptions: PathBuf,
        #[command(flatten)]
        out: ReportArgs,
    },
}

#[derive(Subcommand)]
enum FiberCommand {
    /// Euler number, components, root lattice and base change of a fiber type.
    Info { token: String },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Gauss-reduce an even positive definite binary form.
    Reduce {
        #[arg(long)]
        gram: String,
    },
    /// All reduced even positive definite binary forms of discriminant `disc`.
    Enumerate {
        #[arg(long)]
        disc: u64,
    },
    /// Overlattices of a given index.
    Overlattices {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        index: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Verify { target } => {
            let (report, out) = match target {
                Target::Example { id, out } => (pipeline::run_example(id)?, out),
                Target::Custom {
                    config,
                    branch,
                    assumptions,
                    out,
                } => (pipeline::run_custom(&config, &branch, &assumptions)?, out),
            };
            emit_report(&report, &out)
        }
        Command::Fiber {
            command: FiberCommand::Info { token },
        } => {
            let f: KodairaFiber = token.parse()?;
            print_json(&fiber_info(f))
        }
        Command::Lattice { command } => print_json(&lattice(command)?),
        Command::Basechange { config, branch } => {
            let c: SurfaceConfig = read_json(&config)?;
            let b: BranchSpec = read_json(&branch)?;
            let (cover, defect) = quadratic_base_change(&c, &b)?;
            let inv = invariants(&cover)?;
            print_json(&json!({ "config": cover, "invariants": inv, "defect": defect }))
        }
    }
}

fn emit_report(report: &Report, out: &ReportArgs) -> Result<u8> {
    match out.json.as_deref() {
        Some("-") => emit(&report.to_json()),
        Some(path) => {
            std::fs::write(path, report.to_json())
                .with_context(|| format!("cannot write {path}"))?;
            emit(&report.render_text());
        }
        None => emit(&report.render_text()),
    }
    Ok(report.exit_code(out.strict) as u8)
}

fn print_json(v: &Value) -> Result<u8> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?));
    Ok(0)
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            std::process::exit(1);
        }
    }
}

fn fiber_info(f: KodairaFiber) -> Value {
    let p = f.profile();
    let image = f.quadratic_base_change();
    json!({
        "type": f,
        "euler": p.euler,
        "components": p.components,
        "star": f.is_star(),
        "root_system": p.root_system.map(|r| r.to_string()),
        "root_lattice": p.root_lattice,
        "root_disc": p.root_disc.to_string(),
        "odd_mult_components": p.odd_mult_components,
        "contribution_denominators": p.contribution_denominators,
        "delta": f.delta().ok(),
        "base_change": {
            "type": image,
            "row": f.base_change_source(),
        },
    })
}

fn gram_arg(text: &str) -> Result<GramLattice> {
    Ok(parse_json(text, "--gram")?)
}

fn lattice(command: LatticeCommand) -> Result<Value> {
    Ok(match command {
        LatticeCommand::Reduce { gram } => {
            let l = gram_arg(&gram)?;
            let reduced = BinaryEvenForm::from_lattice(&l)?.reduced()?;
            json!({ "input": l, "reduced": reduced, "disc": reduced.discriminant().to_string() })
        }
        LatticeCommand::Enumerate { disc } => {
            let forms = enumerate_even_posdef_binary(disc);
            json!({ "disc": disc.to_string(), "count": forms.len(), "forms": forms })
        }
        LatticeCommand::Overlattices { gram, index } => {
            let l = gram_arg(&gram)?;
            let integral = enumerate_integral_overlattices(&l, index)?;
            let even = enumerate_even_overlattices(&l, index)?;
            let list = |v: &[ictz_core::lattice::Overlattice]| -> Vec<Value> {
                v.iter()
                    .map(|o| {
                        let gens: Vec<Vec<String>> = o
                            .generators
                            .iter()
                            .map(|r| r.iter().map(|x| x.to_string()).collect())
                            .collect();
                        json!({ "gram": o.lattice, "generators": gens, "even": o.is_even() })
                    })
                    .collect()
            };
            json!({
                "lattice": l,
                "index": index,
                "integral": list(&integral),
                "even_count": even.len(),
            })
        }
    })
}
