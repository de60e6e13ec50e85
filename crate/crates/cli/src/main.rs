mod defs;
mod expr;
#[cfg(test)]
mod roundtrip;
mod session;

use clap::{Parser, ValueEnum};
use session::{ReportFormat, Session, SessionConfig};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

/// Command interpreter for series arithmetic over finite coefficient rings,
/// radical computations, and verification runs. Reads commands from a script
/// file or standard input, one per line; `#` starts a comment.
#[derive(Parser, Debug)]
#[command(name = "pdo", version, disable_help_subcommand = true)]
struct Args {
    /// Script file to run (defaults to standard input).
    script: Option<PathBuf>,
    /// Alternative way to pass the script file.
    #[arg(long = "script", value_name = "PATH", conflicts_with = "script")]
    script_flag: Option<PathBuf>,
    /// Seed for randomized verification suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Series floor drop: how far below the lowest input floor products track.
    #[arg(long, default_value_t = 24, value_name = "FLOOR-DROP")]
    precision: u32,
    /// Default path for `report` output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Default report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Largest coefficient ring order a ring definition may request.
    #[arg(long, default_value_t = 4096, value_name = "ORDER")]
    max_order: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.precision == 0 {
        eprintln!("error: --precision must be positive");
        return ExitCode::FAILURE;
    }
    let cfg = SessionConfig {
        seed: args.seed,
        floor_drop: args.precision,
        max_order: args.max_order,
        out: args.out,
        format: match args.format {
            FormatArg::Text => ReportFormat::Text,
            FormatArg::Structured => ReportFormat::Structured,
        },
    };
    let script = args.script.or(args.script_flag);
    let reader: Box<dyn BufRead> = match &script {
        Some(path) => match std::fs::File::open(path) {
            Ok(f) => Box::new(std::io::BufReader::new(f)),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        },
        None => Box::new(std::io::stdin().lock()),
    };

    let mut session = Session::new(cfg);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (idx, line) in reader.lines().enumerate() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                eprintln!("line {}: read error: {e}", idx + 1);
                return ExitCode::FAILURE;
            }
        };
        if let Err(e) = session.run_line(&line, &mut out) {
            let _ = out.flush();
            eprintln!("line {}: error: {e}", idx + 1);
            return ExitCode::FAILURE;
        }
    }
    let _ = out.flush();
    ExitCode::SUCCESS
}
