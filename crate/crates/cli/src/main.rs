//! `pwl`: compute Witt vectors, prism maps, tilts and de Rham-Witt objects, and run the
//! verification suites, emitting versioned JSON or CSV reports.

mod args;
mod compute;
mod suites;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pwl_core::{merge_reports, Entry, Error, Report, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use args::*;

#[derive(Debug, Parser)]
#[command(name = "pwl", version, about = "Witt vectors, prisms and de Rham-Witt complexes at desk scale")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every sampled check
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(subcommand)]
    Witt(WittCmd),
    #[command(subcommand)]
    Prism(PrismCmd),
    #[command(subcommand)]
    Tilt(TiltCmd),
    #[command(subcommand)]
    Drw(DrwCmd),
    #[command(subcommand)]
    Compare(CompareCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Report(ReportCmd),
}

fn config<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("arguments serialize")
}

/// Runs one command and returns (command name, config echo, entries).
fn run(cmd: &Command, seed: u64) -> Result<(String, Value, Vec<Entry>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = match cmd {
        Command::Witt(w) => {
            let (name, cfg) = match w {
                WittCmd::Add(a) => ("witt add", config(a)),
                WittCmd::Mul(a) => ("witt mul", config(a)),
                WittCmd::Ghost(a) => ("witt ghost", config(a)),
                WittCmd::Fvr(a) => ("witt fvr", config(a)),
            };
            (name, cfg, compute::witt(w)?)
        }
        Command::Prism(c) => {
            let (name, cfg) = match c {
                PrismCmd::Rn(a) => ("prism rn", config(a)),
                PrismCmd::Embed(a) => ("prism embed", config(a)),
                PrismCmd::CheckSquare(a) => ("prism check-square", config(a)),
                PrismCmd::Validate(a) => ("prism validate", config(a)),
            };
            (name, cfg, compute::prism(c, &mut rng)?)
        }
        Command::Tilt(TiltCmd::CheckCommut(a)) => ("tilt check-commut", config(a), suites::commut(a, seed)?),
        Command::Tilt(TiltCmd::Xi(a)) => ("tilt xi", config(a), suites::xi(a)?),
        Command::Tilt(TiltCmd::Perfectoid(a)) => ("tilt perfectoid", config(a), suites::perfectoid(a, seed)?),
        Command::Drw(DrwCmd::Basis(a)) => ("drw basis", config(a), compute::drw_basis(a)?),
        Command::Drw(DrwCmd::Normalize(a)) => ("drw normalize", config(a), compute::drw_normalize_cmd(a)?),
        Command::Drw(DrwCmd::Verify { suite }) => match suite {
            DrwSuite::Axioms(a) => ("drw verify axioms", config(a), suites::axioms(a, seed)?),
            DrwSuite::Cartier(a) => ("drw verify cartier", config(a), suites::cartier(a)?),
            DrwSuite::Filtration(a) => ("drw verify filtration", config(a), suites::filtration(a)?),
            DrwSuite::Poly(a) => ("drw verify poly", config(a), suites::poly(a)?),
        },
        Command::Compare(CompareCmd::Crystalline(a)) => ("compare crystalline", config(a), suites::crystalline(a)?),
        Command::Compare(CompareCmd::Target(a)) => ("compare target", config(a), suites::target(a, &mut rng)?),
        Command::Compare(CompareCmd::BaseChange(a)) => ("compare base-change", config(a), suites::base_change(a, seed)?),
        Command::Verify(v) => match v {
            VerifyCmd::Commut(a) => ("verify commut", config(a), suites::commut(a, seed)?),
            VerifyCmd::Rn(a) => ("verify rn", config(a), suites::rn(a, &mut rng)?),
            VerifyCmd::Square(a) => ("verify square", config(a), suites::square(a, &mut rng)?),
            VerifyCmd::Xi(a) => ("verify xi", config(a), suites::xi(a)?),
            VerifyCmd::Axioms(a) => ("verify axioms", config(a), suites::axioms(a, seed)?),
            VerifyCmd::Cartier(a) => ("verify cartier", config(a), suites::cartier(a)?),
            VerifyCmd::Filtration(a) => ("verify filtration", config(a), suites::filtration(a)?),
            VerifyCmd::Poly(a) => ("verify poly", config(a), suites::poly(a)?),
            VerifyCmd::Comparison(a) => ("verify comparison", config(a), suites::comparison(a, seed, &mut rng)?),
            VerifyCmd::All(a) => ("verify all", config(a), suites::all(a, seed, &mut rng)?),
        },
        Command::Report(_) => unreachable!("report merge is handled before dispatch"),
    };
    Ok((out.0.to_string(), out.1, out.2))
}

/// 3 for resource and precision caps, 2 for everything a user can fix in the invocation.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap(_) | Error::StepCap(_) | Error::DenominatorCap(_) | Error::Depth(_) => 3,
        _ => 2,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("pwl: {e}");
    ExitCode::from(error_code(e))
}

fn merge(paths: &[std::path::PathBuf], format: Format) -> ExitCode {
    let mut reports = Vec::new();
    for path in paths {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(&Error::Invalid(format!("{}: {e}", path.display()))),
        };
        match Report::from_json(&text) {
            Ok(r) => reports.push(r),
            Err(e) => return fail(&e),
        }
    }
    let table = merge_reports(&reports);
    match format {
        Format::Json => println!("{}", table.to_json()),
        Format::Csv => print!("{}", table.to_csv()),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Report(ReportCmd::Merge { paths }) = &cli.command {
        return merge(paths, cli.format);
    }
    let (name, cfg, entries) = match run(&cli.command, cli.seed) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let report = Report::new(&name, cfg, cli.seed, entries);
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
    }
    ExitCode::from(report.exit_code() as u8)
}
