//! The `eval` subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Result};
use cespan::{parse_tagged, score_corpus, AnnotatedRelation, EvalReport};
use clap::Args;

use crate::records::{read_jsonl, TaggedRecord};
use crate::CommandError;

#[derive(Args)]
pub struct EvalArgs {
    /// Predictions file: JSON Lines with "id" and a "tagged" string array.
    pub pred: PathBuf,
    /// Gold file in the same format, with matching ids.
    pub gold: PathBuf,
}

pub fn run(args: EvalArgs) -> Result<(), CommandError> {
    let mut predictions = load_corpus(&args.pred).map_err(CommandError::Input)?;
    let gold = load_corpus(&args.gold).map_err(CommandError::Input)?;
    // A gold sentence without a prediction row counts as a plain miss; a
    // prediction for an unknown id is an input error.
    for id in gold.keys() {
        predictions.entry(id.clone()).or_default();
    }
    let report = score_corpus(&predictions, &gold).map_err(|e| CommandError::Input(e.into()))?;
    let json = serde_json::to_string(&report).map_err(|e| CommandError::Input(e.into()))?;
    println!("{json}");
    print_table(&report);
    Ok(())
}

fn load_corpus(path: &Path) -> Result<BTreeMap<String, Vec<AnnotatedRelation>>> {
    let rows: Vec<TaggedRecord> = read_jsonl(path)?;
    let mut corpus = BTreeMap::new();
    for row in rows {
        if corpus.contains_key(&row.id) {
            bail!("{}: duplicate id {:?}", path.display(), row.id);
        }
        let relations = row
            .tagged
            .iter()
            .map(|tagged| {
                parse_tagged(tagged)
                    .map_err(|e| anyhow!("{}: id {:?}: {e}", path.display(), row.id))
            })
            .collect::<Result<Vec<_>>>()?;
        corpus.insert(row.id, relations);
    }
    Ok(corpus)
}

fn print_table(report: &EvalReport) {
    println!();
    println!(
        "{:<8} {:>10} {:>10} {:>10}",
        "type", "precision", "recall", "f1"
    );
    let rows = [
        ("cause", report.per_type.cause),
        ("effect", report.per_type.effect),
        ("signal", report.per_type.signal),
    ];
    for (name, scores) in rows {
        println!(
            "{:<8} {:>10.6} {:>10.6} {:>10.6}",
            name, scores.precision, scores.recall, scores.f1
        );
    }
    println!(
        "{:<8} {:>10} {:>10} {:>10.6}",
        "overall", "", "", report.overall_f1
    );
    println!(
        "relations: matched {} | predicted {} | gold {}",
        report.counts.matched, report.counts.predicted, report.counts.gold
    );
}
