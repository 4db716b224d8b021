//! The `augment` subcommand.

use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, Result};
use cespan::{
    augment, parse_tagged, serialize_tagged, AnnotatedRelation, HttpParaphraseProvider,
    HttpProviderConfig, IdentityProvider, ParaphraseProvider,
};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use crate::records::{read_jsonl, write_jsonl, SingleTaggedRecord};
use crate::CommandError;

/// Environment variable consulted for the paraphrase endpoint when
/// `--endpoint` is not given.
pub const ENDPOINT_ENV: &str = "CESPAN_PARAPHRASE_ENDPOINT";

#[derive(Args)]
pub struct AugmentArgs {
    /// Input records: JSON Lines with "id" and a single "tagged" string.
    pub input: PathBuf,
    /// Output file; receives n² records per input record.
    pub output: PathBuf,
    /// Paraphrases requested per span.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Paraphrase source.
    #[arg(long, value_enum, default_value_t = ProviderKind::Identity)]
    pub provider: ProviderKind,
    /// Paraphrase service base URL (overrides CESPAN_PARAPHRASE_ENDPOINT).
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Records augmented concurrently (http provider).
    #[arg(long, default_value_t = 4)]
    pub concurrency: usize,
    /// Per-request timeout in seconds (http provider).
    #[arg(long, default_value_t = 30)]
    pub timeout: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProviderKind {
    /// Echo the original span text (no network).
    Identity,
    /// POST to an external paraphrase service.
    Http,
}

pub fn run(args: AugmentArgs) -> Result<(), CommandError> {
    if args.n == 0 {
        return Err(CommandError::Input(anyhow!("--n must be at least 1")));
    }
    let rows: Vec<SingleTaggedRecord> = read_jsonl(&args.input).map_err(CommandError::Input)?;

    let mut parsed: Vec<(String, AnnotatedRelation)> = Vec::with_capacity(rows.len());
    let mut parse_failures = Vec::new();
    for row in rows {
        match parse_tagged(&row.tagged) {
            Ok(relation) => parsed.push((row.id, relation)),
            Err(error) => parse_failures.push(format!("record {:?}: {error}", row.id)),
        }
    }
    if !parse_failures.is_empty() {
        for failure in &parse_failures {
            eprintln!("{failure}");
        }
        return Err(CommandError::Input(anyhow!(
            "{} records failed to parse; no output written",
            parse_failures.len()
        )));
    }

    let provider: Box<dyn ParaphraseProvider + Send + Sync> = match args.provider {
        ProviderKind::Identity => Box::new(IdentityProvider),
        ProviderKind::Http => {
            let endpoint = args
                .endpoint
                .clone()
                .or_else(|| std::env::var(ENDPOINT_ENV).ok())
                .ok_or_else(|| {
                    CommandError::Input(anyhow!(
                        "the http provider needs --endpoint or {ENDPOINT_ENV}"
                    ))
                })?;
            let config =
                HttpProviderConfig::new(endpoint).with_timeout(Duration::from_secs(args.timeout));
            Box::new(
                HttpParaphraseProvider::new(config)
                    .map_err(|e| CommandError::Provider(e.into()))?,
            )
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.concurrency.max(1))
        .build()
        .map_err(|e| CommandError::Input(e.into()))?;
    let n = args.n;
    let results: Vec<Result<Vec<SingleTaggedRecord>, String>> = pool.install(|| {
        parsed
            .par_iter()
            .map(|(id, relation)| {
                let samples = augment(relation, provider.as_ref(), n)
                    .map_err(|e| format!("record {id:?}: {e}"))?;
                Ok(samples
                    .iter()
                    .enumerate()
                    .map(|(index, sample)| SingleTaggedRecord {
                        id: format!("{id}-aug-{}-{}", index / n, index % n),
                        tagged: serialize_tagged(sample),
                    })
                    .collect())
            })
            .collect()
    });

    let mut out = Vec::with_capacity(parsed.len() * n * n);
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(mut records) => out.append(&mut records),
            Err(message) => failures.push(message),
        }
    }
    if !failures.is_empty() {
        for failure in &failures {
            eprintln!("{failure}");
        }
        return Err(CommandError::Provider(anyhow!(
            "{} records failed to augment; no output written",
            failures.len()
        )));
    }
    write_jsonl(&args.output, &out).map_err(CommandError::Input)
}
