//! `magicrep run` and `magicrep verify`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use magicrep::error::{Error, Result};
use magicrep::report::{exit_code, run, to_json, verify_certificate, RunOptions};
use magicrep::spec::RunSpec;

#[derive(Parser)]
#[command(name = "magicrep", version, about = "Magic representations and character correspondences")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a spec end to end and write the JSON report.
    Run {
        #[arg(long)]
        spec: PathBuf,
        /// Report file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        precision: Option<u32>,
        /// Property ids to skip, comma separated.
        #[arg(long, value_delimiter = ',')]
        skip: Vec<String>,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// Re-check a certificate written by `run`.
    Verify {
        certificate: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, s: &str) -> Result<()> {
    std::fs::write(path, s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn main_inner(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Run { spec, out, precision, skip, emit_certificate } => {
            let spec = RunSpec::from_json(&read(&spec)?)?;
            let (report, cert) = run(&spec, &RunOptions { precision, skip })?;
            let json = to_json(&report);
            match out {
                Some(p) => write(&p, &json)?,
                None => println!("{json}"),
            }
            if let Some(p) = emit_certificate {
                write(&p, &to_json(&cert))?;
            }
            for v in report.verdicts.iter().filter(|v| !v.passed()) {
                eprintln!("FAIL {}: {}", v.id, v.detail);
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        Cmd::Verify { certificate } => {
            verify_certificate(&read(&certificate)?)?;
            println!("certificate verified");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
