//! Span-level scoring: per-type precision/recall/F1 over token overlap.
//!
//! The metric is artifact-defined, not a shared-task official scorer:
//! token counts (intersection, predicted, gold) are accumulated corpus-wide
//! per span type (micro-averaging), predictions are aligned to gold
//! relations within a sentence by greedy best-overlap matching, and the
//! overall score is the unweighted mean of the per-type F1 values over the
//! types that occur in the gold data. Numbers produced here are not
//! comparable to any leaderboard.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::annotation::AnnotatedRelation;
use crate::types::Span;

/// Error from corpus scoring.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("sentence ids do not match: {missing_in_predictions} gold-only, {missing_in_gold} prediction-only (first offender: {example:?})")]
    IdMismatch {
        missing_in_predictions: usize,
        missing_in_gold: usize,
        example: String,
    },
    #[error("relations for id {id:?} disagree on the underlying tokens")]
    TokenMismatch { id: String },
}

/// Precision, recall, and F1 for one span type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TypeScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl TypeScores {
    fn from_counts(intersection: usize, predicted: usize, gold: usize) -> Self {
        let precision = if predicted == 0 {
            0.0
        } else {
            intersection as f64 / predicted as f64
        };
        let recall = if gold == 0 {
            0.0
        } else {
            intersection as f64 / gold as f64
        };
        Self {
            precision,
            recall,
            f1: f1_of(precision, recall),
        }
    }
}

fn f1_of(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Scores per span type, keyed `cause` / `effect` / `signal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerTypeScores {
    pub cause: TypeScores,
    pub effect: TypeScores,
    pub signal: TypeScores,
}

/// Relation-level counts for context alongside the token metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EvalCounts {
    /// Prediction-to-gold pairs formed by greedy matching.
    pub matched: usize,
    pub predicted: usize,
    pub gold: usize,
}

/// Corpus-level report: per-type precision/recall/F1 plus the overall score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub per_type: PerTypeScores,
    /// Unweighted mean of the per-type F1 values over types occurring in gold.
    pub overall_f1: f64,
    pub counts: EvalCounts,
}

fn span_tokens(spans: &[Span]) -> BTreeSet<usize> {
    spans.iter().flat_map(|span| span.token_indices()).collect()
}

/// Token-overlap precision/recall/F1 of one prediction span set against one
/// gold span set. Both empty scores (1, 1, 1); an empty side against a
/// non-empty one scores (0, 0, 0).
pub fn token_f1(pred: &[Span], gold: &[Span]) -> TypeScores {
    let pred_tokens = span_tokens(pred);
    let gold_tokens = span_tokens(gold);
    if pred_tokens.is_empty() && gold_tokens.is_empty() {
        return TypeScores {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        };
    }
    let intersection = pred_tokens.intersection(&gold_tokens).count();
    TypeScores::from_counts(intersection, pred_tokens.len(), gold_tokens.len())
}

/// Greedy alignment of predicted to gold relations within one sentence.
///
/// Repeatedly pairs the (prediction, gold) combination with the highest mean
/// of cause and effect token-F1 (ties broken by lower prediction index,
/// then lower gold index) until one side runs out. Returns
/// `(prediction index, gold index)` pairs.
pub fn match_relations(
    preds: &[AnnotatedRelation],
    golds: &[AnnotatedRelation],
) -> Vec<(usize, usize)> {
    let mut scored: Vec<(f64, usize, usize)> = Vec::with_capacity(preds.len() * golds.len());
    for (pi, pred) in preds.iter().enumerate() {
        for (gi, gold) in golds.iter().enumerate() {
            let cause = token_f1(&[pred.cause()], &[gold.cause()]).f1;
            let effect = token_f1(&[pred.effect()], &[gold.effect()]).f1;
            scored.push(((cause + effect) / 2.0, pi, gi));
        }
    }
    scored.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.2.cmp(&b.2))
    });

    let mut used_pred = vec![false; preds.len()];
    let mut used_gold = vec![false; golds.len()];
    let mut pairs = Vec::with_capacity(preds.len().min(golds.len()));
    for (_, pi, gi) in scored {
        if used_pred[pi] || used_gold[gi] {
            continue;
        }
        used_pred[pi] = true;
        used_gold[gi] = true;
        pairs.push((pi, gi));
    }
    pairs
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    intersection: usize,
    predicted: usize,
    gold: usize,
}

impl Tally {
    fn add_pair(&mut self, pred: &BTreeSet<usize>, gold: &BTreeSet<usize>) {
        self.intersection += pred.intersection(gold).count();
        self.predicted += pred.len();
        self.gold += gold.len();
    }

    fn scores(&self) -> TypeScores {
        TypeScores::from_counts(self.intersection, self.predicted, self.gold)
    }
}

fn optional_tokens(span: Option<Span>) -> BTreeSet<usize> {
    span.map(|s| span_tokens(&[s])).unwrap_or_default()
}

/// Scores a whole corpus: predictions and gold keyed by sentence id, each a
/// list of relations over that sentence. The id sets must match exactly.
/// Sentences are processed in id order so the accumulation is deterministic.
pub fn score_corpus(
    predictions: &BTreeMap<String, Vec<AnnotatedRelation>>,
    gold: &BTreeMap<String, Vec<AnnotatedRelation>>,
) -> Result<EvalReport, EvalError> {
    let pred_only: Vec<&String> = predictions
        .keys()
        .filter(|id| !gold.contains_key(*id))
        .collect();
    let gold_only: Vec<&String> = gold
        .keys()
        .filter(|id| !predictions.contains_key(*id))
        .collect();
    if !pred_only.is_empty() || !gold_only.is_empty() {
        let example = gold_only
            .first()
            .or(pred_only.first())
            .map(|s| s.to_string())
            .unwrap_or_default();
        return Err(EvalError::IdMismatch {
            missing_in_predictions: gold_only.len(),
            missing_in_gold: pred_only.len(),
            example,
        });
    }

    let mut cause = Tally::default();
    let mut effect = Tally::default();
    let mut signal = Tally::default();
    let mut counts = EvalCounts {
        matched: 0,
        predicted: 0,
        gold: 0,
    };
    let mut gold_has_signal = false;
    let empty: BTreeSet<usize> = BTreeSet::new();

    for (id, gold_relations) in gold {
        let pred_relations = &predictions[id];
        let mut reference: Option<&[String]> = None;
        for rel in gold_relations.iter().chain(pred_relations.iter()) {
            match reference {
                None => reference = Some(rel.tokens()),
                Some(tokens) if tokens != rel.tokens() => {
                    return Err(EvalError::TokenMismatch { id: id.clone() })
                }
                Some(_) => {}
            }
        }
        counts.predicted += pred_relations.len();
        counts.gold += gold_relations.len();
        gold_has_signal |= gold_relations.iter().any(|r| r.signal().is_some());

        let pairs = match_relations(pred_relations, gold_relations);
        counts.matched += pairs.len();
        let mut pred_used = vec![false; pred_relations.len()];
        let mut gold_used = vec![false; gold_relations.len()];
        for (pi, gi) in pairs {
            pred_used[pi] = true;
            gold_used[gi] = true;
            let pred = &pred_relations[pi];
            let matched_gold = &gold_relations[gi];
            cause.add_pair(
                &span_tokens(&[pred.cause()]),
                &span_tokens(&[matched_gold.cause()]),
            );
            effect.add_pair(
                &span_tokens(&[pred.effect()]),
                &span_tokens(&[matched_gold.effect()]),
            );
            signal.add_pair(
                &optional_tokens(pred.signal()),
                &optional_tokens(matched_gold.signal()),
            );
        }
        for (pi, pred) in pred_relations.iter().enumerate() {
            if !pred_used[pi] {
                cause.add_pair(&span_tokens(&[pred.cause()]), &empty);
                effect.add_pair(&span_tokens(&[pred.effect()]), &empty);
                signal.add_pair(&optional_tokens(pred.signal()), &empty);
            }
        }
        for (gi, missed) in gold_relations.iter().enumerate() {
            if !gold_used[gi] {
                cause.add_pair(&empty, &span_tokens(&[missed.cause()]));
                effect.add_pair(&empty, &span_tokens(&[missed.effect()]));
                signal.add_pair(&empty, &optional_tokens(missed.signal()));
            }
        }
    }

    let per_type = PerTypeScores {
        cause: cause.scores(),
        effect: effect.scores(),
        signal: signal.scores(),
    };
    // Cause and effect occur in every gold relation; signal only sometimes.
    let mut occurring = Vec::new();
    if counts.gold > 0 {
        occurring.push(per_type.cause.f1);
        occurring.push(per_type.effect.f1);
    }
    if gold_has_signal {
        occurring.push(per_type.signal.f1);
    }
    let overall_f1 = if occurring.is_empty() {
        0.0
    } else {
        occurring.iter().sum::<f64>() / occurring.len() as f64
    };

    Ok(EvalReport {
        per_type,
        overall_f1,
        counts,
    })
}
