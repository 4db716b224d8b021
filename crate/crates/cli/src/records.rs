//! File-format types and JSON Lines helpers shared by the subcommands.

use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use cespan::{
    hypothesis_to_relation, serialize_tagged, RelationHypothesis, SignalVectors, Span,
    SpanProbabilityField,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// One input row for `decode`: per-token arrays for one sentence.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbabilityRecord {
    pub id: String,
    pub tokens: Vec<String>,
    pub cause_start: Vec<f64>,
    pub cause_end: Vec<f64>,
    pub effect_start: Vec<f64>,
    pub effect_end: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal_start: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal_end: Option<Vec<f64>>,
    pub normalized: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal_presence: Option<f64>,
}

impl ProbabilityRecord {
    pub fn into_field(self) -> Result<SpanProbabilityField> {
        let signal = match (self.signal_start, self.signal_end) {
            (Some(start), Some(end)) => Some(SignalVectors { start, end }),
            (None, None) => None,
            _ => {
                return Err(anyhow!(
                    "signal_start and signal_end must be present together"
                ))
            }
        };
        Ok(SpanProbabilityField {
            id: self.id,
            tokens: self.tokens,
            cause_start: self.cause_start,
            cause_end: self.cause_end,
            effect_start: self.effect_start,
            effect_end: self.effect_end,
            signal,
            signal_presence: self.signal_presence,
            normalized: self.normalized,
        })
    }

    pub fn from_field(field: &SpanProbabilityField) -> Self {
        Self {
            id: field.id.clone(),
            tokens: field.tokens.clone(),
            cause_start: field.cause_start.clone(),
            cause_end: field.cause_end.clone(),
            effect_start: field.effect_start.clone(),
            effect_end: field.effect_end.clone(),
            signal_start: field.signal.as_ref().map(|s| s.start.clone()),
            signal_end: field.signal.as_ref().map(|s| s.end.clone()),
            normalized: field.normalized,
            signal_presence: field.signal_presence,
        }
    }
}

/// One output row for `decode` and the fixtures' golden sibling file.
#[derive(Debug, Serialize)]
pub struct DecodedRecord {
    pub id: String,
    pub relations: Vec<RelationOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tagged: Option<Vec<String>>,
}

/// One decoded relation in wire form.
#[derive(Debug, Serialize)]
pub struct RelationOut {
    pub cause: (usize, usize),
    pub effect: (usize, usize),
    pub signal: Option<(usize, usize)>,
    pub orientation: String,
    pub score: serde_json::Number,
}

impl RelationOut {
    pub fn from_hypothesis(hypothesis: &RelationHypothesis) -> Result<Self> {
        let as_pair = |span: Span| (span.start(), span.end());
        Ok(Self {
            cause: as_pair(hypothesis.cause()),
            effect: as_pair(hypothesis.effect()),
            signal: hypothesis.signal().map(as_pair),
            orientation: hypothesis.orientation().tag().to_string(),
            score: format_score(hypothesis.score())?,
        })
    }
}

/// Builds a decode output row, optionally with tagged renderings.
pub fn decoded_record(
    field: &SpanProbabilityField,
    hypotheses: &[RelationHypothesis],
    emit_tagged: bool,
) -> Result<DecodedRecord> {
    let relations = hypotheses
        .iter()
        .map(RelationOut::from_hypothesis)
        .collect::<Result<Vec<_>>>()?;
    let tagged = if emit_tagged {
        Some(
            hypotheses
                .iter()
                .map(|h| Ok(serialize_tagged(&hypothesis_to_relation(field, h)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(DecodedRecord {
        id: field.id.clone(),
        relations,
        tagged,
    })
}

/// Scores are printed with 10 significant digits.
pub fn format_score(score: f64) -> Result<serde_json::Number> {
    let rounded: f64 = format!("{score:.9e}")
        .parse()
        .expect("formatted float re-parses");
    serde_json::Number::from_f64(rounded)
        .ok_or_else(|| anyhow!("score {score} is not representable in JSON"))
}

/// One row of an annotated corpus file (eval input): a sentence id and the
/// tagged strings of its relations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaggedRecord {
    pub id: String,
    pub tagged: Vec<String>,
}

/// One row of an augmentation input/output file: a single tagged relation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingleTaggedRecord {
    pub id: String,
    pub tagged: String,
}

/// Reads a JSON Lines file; blank lines are skipped. Each row error carries
/// the row's `id` when one can be extracted, otherwise its line number.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let raw =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows = Vec::new();
    for (line_idx, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: T = serde_json::from_str(line).map_err(|e| {
            anyhow!(
                "{}: malformed row ({}): {e}",
                path.display(),
                describe_row(line, line_idx)
            )
        })?;
        rows.push(row);
    }
    Ok(rows)
}

fn describe_row(line: &str, line_idx: usize) -> RowLabel {
    let id = serde_json::from_str::<serde_json::Value>(line)
        .ok()
        .and_then(|v| v.get("id").and_then(|id| id.as_str().map(str::to_owned)));
    RowLabel {
        id,
        line: line_idx + 1,
    }
}

struct RowLabel {
    id: Option<String>,
    line: usize,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.id {
            Some(id) => write!(f, "id {id:?}, line {}", self.line),
            None => write!(f, "line {}", self.line),
        }
    }
}

/// Writes rows as JSON Lines, one compact object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row)?);
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}
