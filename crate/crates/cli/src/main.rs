//! `k3auto`: tables, lattice invariants, fiber configurations and the
//! acceptance checks from the command line.
//!
//! Exit status: 0 on success, 1 when a reference or golden comparison fails,
//! 2 on usage, parse or input errors.

mod commands;
mod render;

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use k3auto::fibers::catalog::DEFAULT_SEED;
use k3auto::fibers::parse_binding;
use num_rational::BigRational;

use commands::Report;
use render::{golden, Format, Golden};

#[derive(Parser)]
#[command(name = "k3auto", version, about = "Non-symplectic automorphisms of prime order on K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "md")]
    format: Format,

    /// Compare the output with `<DIR>/<name>.<format>`.
    #[arg(long, global = true, value_name = "DIR")]
    golden_dir: Option<PathBuf>,

    /// Rewrite the golden file instead of comparing.
    #[arg(long, global = true, requires = "golden_dir")]
    update_golden: bool,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Isolated fixed point counts solved from the holomorphic Lefschetz formula.
    Table1 {
        /// Only this prime; all supported primes otherwise.
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Fixed-locus classification for one prime.
    Classify {
        #[arg(long)]
        prime: u32,
    },
    /// Irreducible components of the moduli space and their dimensions.
    Moduli {
        #[arg(long)]
        prime: u32,
    },
    /// Singular fibers of a Weierstrass model y^2 = x^3 + f(t) x + g(t).
    Fibers(FibersArgs),
    #[command(subcommand)]
    Appendix(AppendixCommand),
    /// Runs every acceptance criterion.
    VerifyAll,
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Rank, signature, determinant and discriminant group, e.g. "U(7)+K7".
    Info { expr: String },
}

#[derive(Subcommand)]
enum AppendixCommand {
    /// Checks the explicit order 7 isometry.
    Verify,
}

#[derive(Args)]
#[command(group(ArgGroup::new("model").required(true).args(["f", "example"])))]
struct FibersArgs {
    #[arg(long, requires = "g", allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, requires = "f", allow_hyphen_values = true)]
    g: Option<String>,
    /// Catalog entry, by key or name.
    #[arg(long, conflicts_with_all = ["f", "g"])]
    example: Option<String>,
    /// Parameter value, `name=rational`; repeatable.
    #[arg(long = "bind", value_name = "NAME=VALUE", value_parser = binding)]
    bindings: Vec<(String, BigRational)>,
    /// Seed for sampling the generic parameters of an example.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

fn binding(s: &str) -> std::result::Result<(String, BigRational), String> {
    parse_binding(s).map_err(|e| e.to_string())
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Lattice(LatticeCommand::Info { expr }) => commands::lattice_info(expr),
        Command::Table1 { prime } => commands::table1(*prime),
        Command::Classify { prime } => commands::classify(*prime),
        Command::Moduli { prime } => commands::moduli(*prime),
        Command::Fibers(args) => {
            let mut bindings = BTreeMap::new();
            for (k, v) in &args.bindings {
                if bindings.insert(k.clone(), v.clone()).is_some() {
                    bail!("parameter `{k}` bound twice");
                }
            }
            match (&args.example, &args.f, &args.g) {
                (Some(key), _, _) => commands::fibers_example(key, args.seed, &bindings),
                (None, Some(f), Some(g)) => commands::fibers_model(f, g, &bindings),
                _ => bail!("give --example or both --f and --g"),
            }
        }
        Command::Appendix(AppendixCommand::Verify) => commands::appendix_verify(),
        Command::VerifyAll => commands::verify_all(),
    }
}

// Output errors (a closed pipe, say) are deliberately ignored.
fn emit(out: &mut impl Write, text: &str) {
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn run(cli: &Cli) -> ExitCode {
    let mut stderr = io::stderr();
    let report = match dispatch(cli) {
        Ok(r) => r,
        Err(e) => {
            emit(&mut stderr, &format!("error: {e:#}\n"));
            return ExitCode::from(2);
        }
    };
    let text = match report.doc.render(cli.format) {
        Ok(t) => t,
        Err(e) => {
            emit(&mut stderr, &format!("error: {e:#}\n"));
            return ExitCode::from(2);
        }
    };
    emit(&mut io::stdout().lock(), &text);
    let mut failed = false;
    for f in &report.failures {
        emit(&mut stderr, &format!("mismatch: {f}\n"));
        failed = true;
    }
    if let Some(dir) = &cli.golden_dir {
        match golden(dir, &report.stem, cli.format, &text, cli.update_golden) {
            Ok(Golden::Match) => {}
            Ok(Golden::Updated) => emit(&mut stderr, &format!("updated golden file {}\n", report.stem)),
            Ok(Golden::Missing) => {
                emit(&mut stderr, &format!("mismatch: no golden file {}.{}\n", report.stem, cli.format.extension()));
                failed = true;
            }
            Ok(Golden::Differs { line, expected, actual }) => {
                emit(
                    &mut stderr,
                    &format!("mismatch: golden file {} line {line}\n  expected: {expected}\n  actual:   {actual}\n", report.stem),
                );
                failed = true;
            }
            Err(e) => {
                emit(&mut stderr, &format!("error: {e:#}\n"));
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::from(u8::from(failed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    run(&cli)
}
