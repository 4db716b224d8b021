//! Cause-effect-signal span extraction toolkit.
//!
//! Given per-token start/end probability vectors for cause, effect, and
//! (optionally) signal spans over one sentence, this crate decodes valid,
//! non-overlapping span triples. It also parses and serializes the inline
//! `<ARG0>/<ARG1>/<SIG>` annotation format, generates paraphrase-spliced
//! training samples, and scores predictions against gold annotations.
//!
//! # Components
//!
//! - [`types`]: spans, probability fields, relation hypotheses, decode config
//! - [`decoder`]: softmax, argmax baseline, and the beam-search span selector
//! - [`oracle`]: exhaustive reference decoder for testing and golden fixtures
//! - [`annotation`]: inline tag parsing/serialization over whitespace tokens
//! - [`augment`]: paraphrase-based span splicing (n² combinations)
//! - [`eval`]: token-overlap precision/recall/F1 reports
//! - [`synth`]: seeded random field generation for fixtures and benchmarks
//!
//! All token indices throughout the crate are 0-based and inclusive on both
//! span ends.

pub mod annotation;
pub mod augment;
pub mod decoder;
pub mod eval;
pub mod oracle;
pub mod synth;
pub mod types;

pub use annotation::{
    hypothesis_to_relation, parse_tagged, serialize_tagged, tokenize, AnnotatedRelation,
    AnnotationError, SpanRole,
};
pub use augment::http::{HttpParaphraseProvider, HttpProviderConfig};
pub use augment::{
    augment, splice_span, AugmentError, IdentityProvider, ParaphraseProvider, ParaphraseRequest,
    SpliceTarget,
};
pub use decoder::{
    baseline_decode, best_inner_pair, bss_decode, decode, decode_signal, softmax,
    top_k_outer_pairs, DecodeError, InnerPair, OuterPair, ScoredSpan,
};
pub use eval::{
    match_relations, score_corpus, token_f1, EvalCounts, EvalError, EvalReport, PerTypeScores,
    TypeScores,
};
pub use oracle::{oracle_decode, oracle_signal};
pub use types::{
    BaselineDecodeResult, ConfigError, DecodeConfig, HypothesisError, Orientation, RawSpan,
    RelationHypothesis, SignalOverlapPolicy, SignalVectors, Span, SpanError, SpanProbabilityField,
    VectorName, Violation,
};
