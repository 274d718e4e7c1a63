use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use polyrecip::Method;
use polyrecip_cli::{check_document, exit_code, load, read_document, Session, SolveRequest};

/// Reciprocal polyhedral diagrams for 3D graphic statics.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex document and print a JSON report.
    Check { file: PathBuf },
    /// Print counts, rank and degrees of freedom of the equilibrium system.
    Analyze { file: PathBuf },
    /// Solve for a density vector and write the dual document.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        /// Seed for `mpi`, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["zeta", "lambda"])]
        xi: Option<Vec<f64>>,
        /// Independent coordinates for `rref`, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "lambda")]
        zeta: Option<Vec<f64>>,
        /// Positive weights for `lp`, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda: Option<Vec<f64>>,
        /// Primal cell whose dual vertex sits at the origin.
        #[arg(long)]
        anchor: Option<usize>,
        /// Output path; `-` writes to stdout.
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Serve the complex and the viewer over HTTP.
    Serve {
        file: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: polyrecip::Error| e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            let code = err.downcast_ref::<polyrecip::Error>().map_or(1, exit_code);
            match err.downcast_ref::<polyrecip::Error>() {
                Some(e) => eprintln!("error[{}]: {err:#}", e.code()),
                None => eprintln!("error: {err:#}"),
            }
            ExitCode::from(code)
        }
    }
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Check { file } => {
            let report = check_document(read_document(&file)?);
            print_json(&report)?;
            Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Analyze { file } => {
            let session = Session::new(&load(&file)?)?;
            let view = session.analysis();
            for w in &view.warnings {
                eprintln!("warning: {w}");
            }
            print_json(&view)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { file, method, xi, zeta, lambda, anchor, output } => {
            let session = Session::new(&load(&file)?)?;
            let request = SolveRequest { xi, zeta, lambda, anchor_cell: anchor, ..SolveRequest::new(method) };
            let doc = session.solve(&request)?;
            write_output(&output, &serde_json::to_string_pretty(&doc)?)?;
            eprintln!(
                "dof {}, residual {:.1e}, reciprocity {}",
                doc.dof,
                doc.residuals.equilibrium,
                if doc.degraded { "FAILED" } else { "ok" }
            );
            Ok(if doc.degraded { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Serve { file, port, host } => {
            let session = Arc::new(Session::new(&load(&file)?)?);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(polyrecip_cli::http::serve(session, SocketAddr::new(host, port)))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    if path == Path::new("-") {
        writeln!(std::io::stdout().lock(), "{text}")?;
        Ok(())
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}
