use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use expmap::cli::{self, Command, CommandOutput};

#[derive(Parser)]
#[command(name = "expmap", version, about = "Exponential maps on polynomial rings over Q and F_p")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check (E1) and (E2) on every generator
    Validate { instance: PathBuf },
    /// Basis of the invariants of total degree <= D
    Invariants {
        instance: PathBuf,
        #[arg(long)]
        maxdeg: Option<u32>,
    },
    /// Window-minimal local slices, plinth sample and minimal slice
    Slices {
        instance: PathBuf,
        #[arg(long)]
        maxdeg: Option<u32>,
    },
    /// Write an element as a polynomial in the instance slice
    Decompose {
        instance: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// Check the hypotheses and decompose every window monomial
    Verify {
        instance: PathBuf,
        #[arg(long)]
        maxdeg: Option<u32>,
    },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { cli::EXIT_INPUT } else { cli::EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    let (command, path, maxdeg) = match args.command {
        Cmd::Validate { instance } => (Command::Validate, instance, None),
        Cmd::Invariants { instance, maxdeg } => (Command::Invariants, instance, maxdeg),
        Cmd::Slices { instance, maxdeg } => (Command::Slices, instance, maxdeg),
        Cmd::Decompose { instance, element } => (Command::Decompose { element }, instance, None),
        Cmd::Verify { instance, maxdeg } => (Command::Verify, instance, maxdeg),
    };
    let out = match std::fs::read_to_string(&path) {
        Ok(text) => cli::run(&command, &text, maxdeg),
        Err(e) => CommandOutput::input_error(format!("cannot read {}: {e}", path.display())),
    };
    if out.code == cli::EXIT_INPUT {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    ExitCode::from(out.code as u8)
}
