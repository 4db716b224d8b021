//! `cespan`: command-line decoding, evaluation, and augmentation for
//! cause-effect-signal span extraction. All file I/O is JSON Lines; outputs
//! are a pure function of inputs and flags, so reruns are byte-identical.

mod augment;
mod decode;
mod eval;
mod fixtures;
mod records;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cespan",
    version,
    about = "Cause-effect-signal span decoding, evaluation, and augmentation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode per-token probability records into valid relation predictions.
    Decode(decode::DecodeArgs),
    /// Score tagged predictions against tagged gold annotations.
    Eval(eval::EvalArgs),
    /// Emit n² paraphrase-spliced samples per tagged record.
    Augment(augment::AugmentArgs),
    /// Generate seeded random records plus a golden decoded sibling file.
    Fixtures(fixtures::FixturesArgs),
}

/// Failure classes mapped to exit codes: input problems exit with 1,
/// paraphrase provider/network problems with 2.
pub enum CommandError {
    Input(anyhow::Error),
    Provider(anyhow::Error),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decode(args) => decode::run(args),
        Command::Eval(args) => eval::run(args),
        Command::Augment(args) => augment::run(args),
        Command::Fixtures(args) => fixtures::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CommandError::Input(error)) => {
            eprintln!("error: {error:#}");
            ExitCode::from(1)
        }
        Err(CommandError::Provider(error)) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
