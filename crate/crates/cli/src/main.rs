//! `latcert`: run certification stages for the E8 or Leech lattice, or
//! re-check a certificate written by an earlier run.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latcert::cert::verify_certificate;
use latcert::pipeline::{run_pipeline, PipelineConfig, Stage, Target};
use latcert::Error;

#[derive(Parser)]
#[command(name = "latcert", version, about = "Exact certificates for E8 and Leech lattice packings")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Re-check a certificate file without rerunning the heavy stages.
    Verify { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Args)]
struct RunArgs {
    /// leech or e8.
    #[arg(long, value_parser = parse_target)]
    target: Option<Target>,
    /// Comma-separated stages: kissing, counting, scheme, sigma, basis,
    /// localopt, magicfn, or full. Dependencies are added automatically.
    #[arg(long, default_value = "full")]
    stages: String,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    /// Node cap for lattice enumeration.
    #[arg(long)]
    node_cap: Option<u64>,
    /// Coefficient file of an auxiliary function for the magicfn stage.
    #[arg(long)]
    fcoeffs: Option<PathBuf>,
    /// Root file for --fcoeffs; its smallest entry is used as r².
    #[arg(long)]
    roots: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also run the expensive checks (Leech exact LP, larger searches).
    #[arg(long)]
    allow_heavy: bool,
    /// Write the local optimality certificate here.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

const INPUT_ERROR: u8 = 2;

fn run(args: RunArgs) -> ExitCode {
    let Some(target) = args.target else {
        eprintln!("error: --target is required");
        return ExitCode::from(INPUT_ERROR);
    };
    let stages = match Stage::parse_list(&args.stages) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let mut cfg = PipelineConfig::new(target, stages);
    cfg.node_cap = args.node_cap;
    cfg.threads = args.threads as usize;
    cfg.fcoeffs = args.fcoeffs;
    cfg.roots = args.roots;
    cfg.allow_heavy = args.allow_heavy;
    let report = run_pipeline(&cfg);
    let text = match args.format {
        Format::Text => report.to_text(),
        Format::JsonLines => report.to_json_lines(),
    };
    match &args.report {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(INPUT_ERROR);
            }
        }
        None => print!("{text}"),
    }
    if let Some(path) = &args.certificate {
        match &report.certificate {
            Some(c) => {
                if let Err(e) = fs::write(path, c.to_text()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(INPUT_ERROR);
                }
            }
            None => eprintln!("warning: no certificate was produced (the localopt stage did not complete)"),
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn verify(path: &PathBuf) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(INPUT_ERROR);
        }
    };
    match verify_certificate(&text) {
        Ok(v) => {
            println!("certificate {} for {}", v.kind, v.target);
            for c in &v.checks {
                println!("  {} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.witness);
            }
            let ok = v.passed();
            println!("{}", if ok { "verified" } else { "rejected" });
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e @ Error::Format(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
        Err(e) => {
            println!("rejected: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Some(Command::Verify { path }) => verify(&path),
        None => run(cli.run),
    }
}
