use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hamcomm::commutator::eigentable;
use hamcomm_cli::{parse_range, run, OutputFormat, RunConfig, Suite, DEFAULT_D, DEFAULT_R, DEFAULT_SIZE_CAP};
use num_bigint::BigUint;

#[derive(Parser)]
#[command(version, about = "Exact verification of commutator spectra on Hamming graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a (D, r) grid
    Verify {
        /// Diameter range, e.g. 1..4
        #[arg(long = "d", value_parser = parse_range)]
        d_range: Option<std::ops::RangeInclusive<u32>>,
        /// Alphabet size range, e.g. 3..5
        #[arg(long = "r", value_parser = parse_range)]
        r_range: Option<std::ops::RangeInclusive<u32>>,
        /// Comma separated suites (default: all)
        #[arg(long, value_enum, value_delimiter = ',')]
        suites: Vec<Suite>,
        /// Largest r^D allowed
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: u128,
        /// Ignore the size cap
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the predicted commutator eigenvalues and multiplicities
    Eigentable {
        #[arg(long = "d")]
        d: u32,
        #[arg(long = "r")]
        r: u32,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn print_eigentable(d: u32, r: u32) -> io::Result<()> {
    let rows = eigentable(d, r);
    let mut out = io::stdout().lock();
    writeln!(out, "{:>4}  {:>24}  dimension", "s", "eigenvalue")?;
    for row in &rows {
        writeln!(out, "{:>4}  {:>24}  {}", row.s, row.eigenvalue.to_string(), row.predicted_dim)?;
    }
    let total: BigUint = rows.iter().map(|row| &row.predicted_dim).sum();
    writeln!(out, "{:>4}  {:>24}  {}", "sum", "", total)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eigentable { d, r } => {
            if d < 1 || r < 3 {
                return usage("eigentable needs D >= 1 and r >= 3");
            }
            match print_eigentable(d, r) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Verify {
            d_range,
            r_range,
            suites,
            size_cap,
            force,
            format,
            out,
            jobs,
        } => {
            let config = RunConfig {
                explicit_grid: d_range.is_some() || r_range.is_some(),
                d_range: d_range.unwrap_or(DEFAULT_D),
                r_range: r_range.unwrap_or(DEFAULT_R),
                size_cap,
                force,
                suites: if suites.is_empty() { Suite::ALL.to_vec() } else { suites },
            };
            let report = match run(&config, jobs) {
                Ok(report) => report,
                Err(e) => return usage(e),
            };
            let sink: Box<dyn Write> = match &out {
                Some(path) => match File::create(path) {
                    Ok(f) => Box::new(BufWriter::new(f)),
                    Err(e) => return usage(format!("cannot write {}: {e}", path.display())),
                },
                None => Box::new(io::stdout().lock()),
            };
            let written = match format {
                OutputFormat::Json => report.write_json(sink).map_err(|e| e.to_string()),
                OutputFormat::Csv => report.write_csv(sink).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if out.is_none() && format == OutputFormat::Json {
                println!();
            }
            for failure in report.failures() {
                eprintln!("FAIL {failure}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
    }
}
