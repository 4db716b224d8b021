//! Paraphrase-based data augmentation by tag-preserving span splicing.
//!
//! [`augment`] asks a [`ParaphraseProvider`] for n rewrites of the cause
//! text and n of the effect text, then emits every cause × effect
//! combination as a new relation: n² samples per input, originals not
//! included. Only cause and effect are rewritten; signal spans are
//! closed-class markers and pass through untouched.
//!
//! Two providers ship with the crate: [`IdentityProvider`] (echoes the span
//! text; no network) and [`http::HttpParaphraseProvider`] (an external
//! paraphrase service).

pub mod http;

use thiserror::Error;

use crate::annotation::{AnnotatedRelation, AnnotationError, SpanRole};
use crate::types::Span;

/// A single paraphrase request: rewrite `span_text` `count` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaphraseRequest {
    pub span_text: String,
    /// Number of rewrites to produce; at least 1.
    pub count: usize,
}

/// Error from a paraphrase provider or the splicing around it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AugmentError {
    #[error("paraphrase provider failed for {span_text:?} (count {count}): {message}")]
    Provider {
        span_text: String,
        count: usize,
        message: String,
    },
    #[error("paraphrase provider configuration error: {message}")]
    ProviderSetup { message: String },
    #[error("provider returned {got} paraphrases for {span_text:?}, expected {expected}")]
    CountMismatch {
        span_text: String,
        expected: usize,
        got: usize,
    },
    #[error("provider returned an empty paraphrase for {span_text:?}")]
    EmptyParaphrase { span_text: String },
    #[error("replacement text is empty")]
    EmptyReplacement,
    #[error("replacement text contains the tag literal {tag:?}")]
    TagLiteralInReplacement { tag: String },
    #[error("splice produced an invalid relation: {0}")]
    InvalidRelation(#[from] AnnotationError),
}

/// Source of paraphrases for span texts. Implementations must return exactly
/// `request.count` non-empty strings; duplicates are acceptable.
pub trait ParaphraseProvider {
    fn paraphrase(&self, request: &ParaphraseRequest) -> Result<Vec<String>, AugmentError>;
}

/// Returns the original span text `count` times. Useful for tests and for
/// exercising pipelines without a paraphrase service.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityProvider;

impl ParaphraseProvider for IdentityProvider {
    fn paraphrase(&self, request: &ParaphraseRequest) -> Result<Vec<String>, AugmentError> {
        Ok(vec![request.span_text.clone(); request.count])
    }
}

/// Which of the two rewritable spans a splice targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpliceTarget {
    Cause,
    Effect,
}

/// Replaces the chosen span's tokens with the whitespace tokenization of
/// `replacement`, shifting every span after it by the token-count delta.
/// The other spans' texts are unchanged.
pub fn splice_span(
    relation: &AnnotatedRelation,
    target: SpliceTarget,
    replacement: &str,
) -> Result<AnnotatedRelation, AugmentError> {
    for role in [SpanRole::Cause, SpanRole::Effect, SpanRole::Signal] {
        for literal in [role.open_tag(), role.close_tag()] {
            if replacement.contains(literal) {
                return Err(AugmentError::TagLiteralInReplacement {
                    tag: literal.to_string(),
                });
            }
        }
    }
    let new_tokens: Vec<String> = replacement.split_whitespace().map(str::to_owned).collect();
    if new_tokens.is_empty() {
        return Err(AugmentError::EmptyReplacement);
    }

    let old = match target {
        SpliceTarget::Cause => relation.cause(),
        SpliceTarget::Effect => relation.effect(),
    };
    let delta = new_tokens.len() as isize - old.len() as isize;

    let mut tokens: Vec<String> =
        Vec::with_capacity((relation.tokens().len() as isize + delta) as usize);
    tokens.extend_from_slice(&relation.tokens()[..old.start()]);
    tokens.extend(new_tokens.iter().cloned());
    tokens.extend_from_slice(&relation.tokens()[old.end() + 1..]);

    let respan = |span: Span| -> Span {
        if span == old {
            Span::new(old.start(), old.start() + new_tokens.len() - 1)
                .expect("replacement is non-empty")
        } else if span.start() > old.end() {
            Span::new(
                (span.start() as isize + delta) as usize,
                (span.end() as isize + delta) as usize,
            )
            .expect("shift preserves ordering")
        } else {
            span
        }
    };

    Ok(AnnotatedRelation::new(
        tokens,
        respan(relation.cause()),
        respan(relation.effect()),
        relation.signal().map(respan),
    )?)
}

/// Produces the n × n cross-product of cause and effect paraphrases as new
/// relations, ordered cause-major: the relation at index `i * n + j` carries
/// cause paraphrase `i` and effect paraphrase `j`. The original relation is
/// not included in the output.
pub fn augment(
    relation: &AnnotatedRelation,
    provider: &dyn ParaphraseProvider,
    n: usize,
) -> Result<Vec<AnnotatedRelation>, AugmentError> {
    let cause_paraphrases = fetch(provider, relation.cause_text(), n)?;
    let effect_paraphrases = fetch(provider, relation.effect_text(), n)?;

    let mut out = Vec::with_capacity(n * n);
    for cause_text in &cause_paraphrases {
        let with_cause = splice_span(relation, SpliceTarget::Cause, cause_text)?;
        for effect_text in &effect_paraphrases {
            out.push(splice_span(&with_cause, SpliceTarget::Effect, effect_text)?);
        }
    }
    Ok(out)
}

/// Runs one provider call and enforces its contract: exactly `count`
/// non-empty strings.
fn fetch(
    provider: &dyn ParaphraseProvider,
    span_text: String,
    count: usize,
) -> Result<Vec<String>, AugmentError> {
    let request = ParaphraseRequest {
        span_text: span_text.clone(),
        count,
    };
    let paraphrases = provider.paraphrase(&request)?;
    if paraphrases.len() != count {
        return Err(AugmentError::CountMismatch {
            span_text,
            expected: count,
            got: paraphrases.len(),
        });
    }
    if paraphrases.iter().any(|p| p.trim().is_empty()) {
        return Err(AugmentError::EmptyParaphrase { span_text });
    }
    Ok(paraphrases)
}
