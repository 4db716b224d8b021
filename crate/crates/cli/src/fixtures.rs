//! The `fixtures` subcommand: seeded random records plus a golden sibling
//! file holding the exhaustive decoder's output for each record.

use std::path::{Path, PathBuf};

use anyhow::anyhow;
use cespan::{oracle_decode, synth};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::records::{decoded_record, write_jsonl, ProbabilityRecord};
use crate::CommandError;

#[derive(Args)]
pub struct FixturesArgs {
    /// Destination for the probability records (JSON Lines). The golden
    /// file lands next to it with `.oracle` inserted before the extension.
    pub output: PathBuf,
    /// Number of records to generate.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Shortest sentence length (at least 2).
    #[arg(long, default_value_t = 2)]
    pub min_n: usize,
    /// Longest sentence length.
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    /// RNG seed; the same seed reproduces byte-identical files.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Relations per record in the golden file.
    #[arg(long, default_value_t = 5)]
    pub m: usize,
}

/// `fixtures.jsonl` → `fixtures.oracle.jsonl`; extensionless paths get
/// `.oracle` appended.
pub fn oracle_sibling(path: &Path) -> PathBuf {
    match (path.file_stem(), path.extension()) {
        (Some(stem), Some(ext)) => path.with_file_name(format!(
            "{}.oracle.{}",
            stem.to_string_lossy(),
            ext.to_string_lossy()
        )),
        _ => {
            let mut name = path.as_os_str().to_owned();
            name.push(".oracle");
            PathBuf::from(name)
        }
    }
}

pub fn run(args: FixturesArgs) -> Result<(), CommandError> {
    if args.min_n < 2 {
        return Err(CommandError::Input(anyhow!(
            "--min-n must be at least 2 (single-token sentences are undecodable)"
        )));
    }
    if args.min_n > args.max_n {
        return Err(CommandError::Input(anyhow!(
            "--min-n must not exceed --max-n"
        )));
    }
    if args.m == 0 {
        return Err(CommandError::Input(anyhow!("--m must be at least 1")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut records = Vec::with_capacity(args.count);
    let mut golden = Vec::with_capacity(args.count);
    for i in 0..args.count {
        let n = rng.random_range(args.min_n..=args.max_n);
        let field = synth::random_field(&mut rng, format!("r{i:05}"), n);
        records.push(ProbabilityRecord::from_field(&field));
        let hypotheses =
            oracle_decode(&field, args.m).map_err(|e| CommandError::Input(e.into()))?;
        golden.push(decoded_record(&field, &hypotheses, false).map_err(CommandError::Input)?);
    }

    let sibling = oracle_sibling(&args.output);
    write_jsonl(&args.output, &records).map_err(CommandError::Input)?;
    write_jsonl(&sibling, &golden).map_err(CommandError::Input)?;
    println!(
        "wrote {} records to {} and {}",
        args.count,
        args.output.display(),
        sibling.display()
    );
    Ok(())
}
