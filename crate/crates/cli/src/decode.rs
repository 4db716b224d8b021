//! The `decode` subcommand.

use std::path::PathBuf;

use anyhow::{anyhow, Result};
use cespan::{decode, softmax, DecodeConfig, SignalOverlapPolicy, SpanProbabilityField};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use crate::records::{decoded_record, read_jsonl, write_jsonl, DecodedRecord, ProbabilityRecord};
use crate::CommandError;

#[derive(Args)]
pub struct DecodeArgs {
    /// Input probability records (JSON Lines).
    pub input: PathBuf,
    /// Output predictions (JSON Lines).
    pub output: PathBuf,
    /// Beam width: outer boundary pairs kept per orientation.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Relations returned per record (the top-m by score).
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Signal presence probabilities below this are gated out.
    #[arg(long, default_value_t = 0.5)]
    pub signal_threshold: f64,
    /// Whether a decoded signal span may overlap cause/effect.
    #[arg(long, value_enum, default_value_t = OverlapPolicyArg::ForbidOverlap)]
    pub overlap_policy: OverlapPolicyArg,
    /// Longest allowed signal span, in tokens.
    #[arg(long)]
    pub max_signal_length: Option<usize>,
    /// Softmax-normalize every probability array before decoding.
    #[arg(long)]
    pub apply_softmax: bool,
    /// Also render each relation as an inline-tagged sentence.
    #[arg(long)]
    pub emit_tagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum OverlapPolicyArg {
    ForbidOverlap,
    AllowOverlap,
}

impl From<OverlapPolicyArg> for SignalOverlapPolicy {
    fn from(value: OverlapPolicyArg) -> Self {
        match value {
            OverlapPolicyArg::ForbidOverlap => SignalOverlapPolicy::ForbidOverlap,
            OverlapPolicyArg::AllowOverlap => SignalOverlapPolicy::AllowOverlap,
        }
    }
}

fn build_config(args: &DecodeArgs) -> Result<DecodeConfig> {
    let mut config = DecodeConfig::new(args.k, args.m)?
        .with_signal_threshold(args.signal_threshold)?
        .with_overlap_policy(args.overlap_policy.into());
    if let Some(limit) = args.max_signal_length {
        config = config.with_max_signal_length(limit)?;
    }
    Ok(config)
}

pub fn run(args: DecodeArgs) -> Result<(), CommandError> {
    let config = build_config(&args).map_err(CommandError::Input)?;
    let records: Vec<ProbabilityRecord> = read_jsonl(&args.input).map_err(CommandError::Input)?;
    let total = records.len();

    // Records decode in parallel; collect() preserves input order.
    let results: Vec<Result<DecodedRecord, String>> = records
        .into_par_iter()
        .map(|record| {
            let id = record.id.clone();
            process_record(record, &config, args.apply_softmax, args.emit_tagged)
                .map_err(|e| format!("record {id:?}: {e:#}"))
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(row) => rows.push(row),
            Err(message) => failures.push(message),
        }
    }
    if !failures.is_empty() {
        for failure in &failures {
            eprintln!("{failure}");
        }
        return Err(CommandError::Input(anyhow!(
            "{} of {total} records failed to decode; no output written",
            failures.len()
        )));
    }
    write_jsonl(&args.output, &rows).map_err(CommandError::Input)
}

fn process_record(
    record: ProbabilityRecord,
    config: &DecodeConfig,
    apply_softmax: bool,
    emit_tagged: bool,
) -> Result<DecodedRecord> {
    let mut field = record.into_field()?;
    if apply_softmax {
        normalize_in_place(&mut field)?;
    }
    let hypotheses = decode(&field, config)?;
    decoded_record(&field, &hypotheses, emit_tagged)
}

fn normalize_in_place(field: &mut SpanProbabilityField) -> Result<()> {
    for vector in [
        &mut field.cause_start,
        &mut field.cause_end,
        &mut field.effect_start,
        &mut field.effect_end,
    ] {
        *vector = softmax(vector)?;
    }
    if let Some(signal) = &mut field.signal {
        signal.start = softmax(&signal.start)?;
        signal.end = softmax(&signal.end)?;
    }
    field.normalized = true;
    Ok(())
}
