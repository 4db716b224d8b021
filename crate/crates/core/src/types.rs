//! Shared domain types used by every other module.
//!
//! Token indices are 0-based; spans are inclusive on both ends. All types are
//! immutable after construction and safe to share across threads.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Sum tolerance for probability vectors declared `normalized`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// An inclusive range of token positions within one sentence.
///
/// `start <= end` always holds, so every span covers at least one token.
/// Bounds against a concrete sentence length are checked wherever a length is
/// known (see [`Span::fits_within`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    start: usize,
    end: usize,
}

/// Error constructing a [`Span`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("span end {end} precedes start {start}")]
    EndBeforeStart { start: usize, end: usize },
    #[error("span [{start}, {end}] out of bounds for sentence of length {len}")]
    OutOfBounds {
        start: usize,
        end: usize,
        len: usize,
    },
}

impl Span {
    /// Creates a span covering tokens `start..=end`.
    pub fn new(start: usize, end: usize) -> Result<Self, SpanError> {
        if end < start {
            return Err(SpanError::EndBeforeStart { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    /// Number of tokens covered (at least 1).
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    /// Spans are never empty; provided for clippy symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when both spans share at least one token index.
    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    /// True when the span stays inside a sentence of `len` tokens.
    pub fn fits_within(&self, len: usize) -> bool {
        self.end < len
    }

    /// Iterator over the covered token indices.
    pub fn token_indices(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Relative order of the cause and effect spans within the sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// The cause span ends before the effect span starts.
    CauseBeforeEffect,
    /// The effect span ends before the cause span starts.
    CauseAfterEffect,
}

impl Orientation {
    /// Wire/tag name used in serialized output.
    pub fn tag(&self) -> &'static str {
        match self {
            Orientation::CauseBeforeEffect => "CBeforeE",
            Orientation::CauseAfterEffect => "CAfterE",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Whether a decoded signal span may share tokens with the cause/effect spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignalOverlapPolicy {
    /// Signal must be disjoint from both cause and effect (default; gold
    /// annotations never overlap).
    #[default]
    ForbidOverlap,
    /// Signal may overlap cause or effect.
    AllowOverlap,
}

/// Error constructing a [`DecodeConfig`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("beam width must be at least 1")]
    ZeroBeamWidth,
    #[error("answer count must be at least 1")]
    ZeroAnswerCount,
    #[error("signal threshold {0} outside [0, 1]")]
    ThresholdOutOfRange(f64),
    #[error("max signal length must be at least 1")]
    ZeroMaxSignalLength,
}

/// Decoding hyper-parameters: beam width `k`, answer count `m`, and the
/// signal gating/overlap knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeConfig {
    beam_width: usize,
    num_answers: usize,
    signal_threshold: f64,
    overlap_policy: SignalOverlapPolicy,
    max_signal_length: Option<usize>,
}

impl DecodeConfig {
    /// Creates a config with beam width `k` and answer count `m`.
    ///
    /// Signal threshold defaults to 0.5, overlap policy to
    /// [`SignalOverlapPolicy::ForbidOverlap`], and the signal length is
    /// unbounded.
    pub fn new(beam_width: usize, num_answers: usize) -> Result<Self, ConfigError> {
        if beam_width == 0 {
            return Err(ConfigError::ZeroBeamWidth);
        }
        if num_answers == 0 {
            return Err(ConfigError::ZeroAnswerCount);
        }
        Ok(Self {
            beam_width,
            num_answers,
            signal_threshold: 0.5,
            overlap_policy: SignalOverlapPolicy::default(),
            max_signal_length: None,
        })
    }

    pub fn with_signal_threshold(mut self, threshold: f64) -> Result<Self, ConfigError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(ConfigError::ThresholdOutOfRange(threshold));
        }
        self.signal_threshold = threshold;
        Ok(self)
    }

    pub fn with_overlap_policy(mut self, policy: SignalOverlapPolicy) -> Self {
        self.overlap_policy = policy;
        self
    }

    pub fn with_max_signal_length(mut self, max_len: usize) -> Result<Self, ConfigError> {
        if max_len == 0 {
            return Err(ConfigError::ZeroMaxSignalLength);
        }
        self.max_signal_length = Some(max_len);
        Ok(self)
    }

    /// Beam width `k`: outer pairs kept per orientation.
    pub fn beam_width(&self) -> usize {
        self.beam_width
    }

    /// Answer count `m`: maximum hypotheses returned.
    pub fn num_answers(&self) -> usize {
        self.num_answers
    }

    pub fn signal_threshold(&self) -> f64 {
        self.signal_threshold
    }

    pub fn overlap_policy(&self) -> SignalOverlapPolicy {
        self.overlap_policy
    }

    pub fn max_signal_length(&self) -> Option<usize> {
        self.max_signal_length
    }
}

/// The start/end probability vectors for the signal span. Both vectors are
/// always present together; a lone start or end vector is undecodable.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalVectors {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
}

/// Per-token start/end probability vectors for one sentence.
///
/// The six vectors (four for cause/effect, two optional for signal) must all
/// have the sentence's token count as their length. Entries are arbitrary
/// finite reals: callers may supply raw logits and decode on those directly,
/// or softmax-normalized probabilities with `normalized` set.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanProbabilityField {
    /// Record identifier, carried through to outputs and error messages.
    pub id: String,
    /// The sentence tokens; their count defines every vector's length.
    pub tokens: Vec<String>,
    pub cause_start: Vec<f64>,
    pub cause_end: Vec<f64>,
    pub effect_start: Vec<f64>,
    pub effect_end: Vec<f64>,
    /// Signal start/end vectors, jointly present or jointly absent.
    pub signal: Option<SignalVectors>,
    /// Externally supplied probability that the sentence contains a signal.
    pub signal_presence: Option<f64>,
    /// Declares that every present vector is a probability distribution
    /// (each sums to 1 within [`NORMALIZATION_TOLERANCE`]).
    pub normalized: bool,
}

/// Names a probability vector in validation messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorName {
    CauseStart,
    CauseEnd,
    EffectStart,
    EffectEnd,
    SignalStart,
    SignalEnd,
}

impl VectorName {
    pub fn as_str(&self) -> &'static str {
        match self {
            VectorName::CauseStart => "cause_start",
            VectorName::CauseEnd => "cause_end",
            VectorName::EffectStart => "effect_start",
            VectorName::EffectEnd => "effect_end",
            VectorName::SignalStart => "signal_start",
            VectorName::SignalEnd => "signal_end",
        }
    }
}

impl fmt::Display for VectorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One field invariant violation. Violations are data, not failures:
/// [`SpanProbabilityField::validate`] reports all of them.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// The token sequence is empty (n must be >= 1).
    EmptyTokens,
    /// A vector's length differs from the token count.
    LengthMismatch {
        vector: VectorName,
        len: usize,
        expected: usize,
    },
    /// A vector entry is NaN or infinite.
    NonFinite { vector: VectorName, index: usize },
    /// `normalized` is set but the vector does not sum to 1.
    NotNormalized { vector: VectorName, sum: f64 },
    /// `signal_presence` lies outside [0, 1].
    PresenceOutOfRange { value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyTokens => write!(f, "empty token sequence"),
            Violation::LengthMismatch {
                vector,
                len,
                expected,
            } => write!(
                f,
                "length mismatch: {vector} (len {len}, expected {expected})"
            ),
            Violation::NonFinite { vector, index } => {
                write!(f, "non-finite entry: {vector}[{index}]")
            }
            Violation::NotNormalized { vector, sum } => {
                write!(f, "not normalized: {vector} (sums to {sum})")
            }
            Violation::PresenceOutOfRange { value } => {
                write!(f, "signal presence {value} outside [0, 1]")
            }
        }
    }
}

impl SpanProbabilityField {
    /// Sentence length n.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Checks every field invariant and returns all violations found.
    /// An empty result means the field is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let n = self.tokens.len();
        if n == 0 {
            violations.push(Violation::EmptyTokens);
        }

        let vectors: Vec<(VectorName, &[f64])> = {
            let mut v: Vec<(VectorName, &[f64])> = vec![
                (VectorName::CauseStart, &self.cause_start),
                (VectorName::CauseEnd, &self.cause_end),
                (VectorName::EffectStart, &self.effect_start),
                (VectorName::EffectEnd, &self.effect_end),
            ];
            if let Some(signal) = &self.signal {
                v.push((VectorName::SignalStart, &signal.start));
                v.push((VectorName::SignalEnd, &signal.end));
            }
            v
        };

        for (name, values) in vectors {
            let length_ok = values.len() == n;
            if !length_ok {
                violations.push(Violation::LengthMismatch {
                    vector: name,
                    len: values.len(),
                    expected: n,
                });
            }
            let mut finite = true;
            for (index, value) in values.iter().enumerate() {
                if !value.is_finite() {
                    violations.push(Violation::NonFinite {
                        vector: name,
                        index,
                    });
                    finite = false;
                }
            }
            // The sum check only makes sense for complete, finite vectors.
            if self.normalized && length_ok && finite && !values.is_empty() {
                let sum: f64 = values.iter().sum();
                if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                    violations.push(Violation::NotNormalized { vector: name, sum });
                }
            }
        }

        if let Some(presence) = self.signal_presence {
            if !presence.is_finite() || !(0.0..=1.0).contains(&presence) {
                violations.push(Violation::PresenceOutOfRange { value: presence });
            }
        }

        violations
    }
}

/// Error constructing a [`RelationHypothesis`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypothesisError {
    #[error("cause {cause} and effect {effect} overlap")]
    OverlappingSpans { cause: Span, effect: Span },
    #[error("signal {signal} overlaps cause or effect under forbid-overlap policy")]
    SignalOverlap { signal: Span },
}

/// One decoded (cause, effect, optional signal) triple with its orientation
/// and additive score.
///
/// Constructed values always satisfy: cause and effect are disjoint, the
/// orientation matches their relative position, and (under
/// [`SignalOverlapPolicy::ForbidOverlap`]) any signal is disjoint from both.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationHypothesis {
    cause: Span,
    effect: Span,
    signal: Option<Span>,
    orientation: Orientation,
    score: f64,
}

impl RelationHypothesis {
    /// Builds a hypothesis from disjoint cause/effect spans; the orientation
    /// is derived from their relative position. The score is the sum of the
    /// four boundary-position probabilities (for normalized inputs it lies in
    /// [0, 4]).
    pub fn new(cause: Span, effect: Span, score: f64) -> Result<Self, HypothesisError> {
        if cause.overlaps(&effect) {
            return Err(HypothesisError::OverlappingSpans { cause, effect });
        }
        let orientation = if cause.end() < effect.start() {
            Orientation::CauseBeforeEffect
        } else {
            Orientation::CauseAfterEffect
        };
        Ok(Self {
            cause,
            effect,
            signal: None,
            orientation,
            score,
        })
    }

    /// Attaches a signal span. Under `ForbidOverlap` the signal must be
    /// disjoint from both cause and effect.
    pub fn with_signal(
        mut self,
        signal: Span,
        policy: SignalOverlapPolicy,
    ) -> Result<Self, HypothesisError> {
        if policy == SignalOverlapPolicy::ForbidOverlap
            && (signal.overlaps(&self.cause) || signal.overlaps(&self.effect))
        {
            return Err(HypothesisError::SignalOverlap { signal });
        }
        self.signal = Some(signal);
        Ok(self)
    }

    pub fn cause(&self) -> Span {
        self.cause
    }

    pub fn effect(&self) -> Span {
        self.effect
    }

    pub fn signal(&self) -> Option<Span> {
        self.signal
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    /// Ranking order shared by the beam decoder and the exhaustive oracle:
    /// higher score first, then `CBeforeE` before `CAfterE`, then smaller
    /// cause start, effect start, cause end, effect end.
    ///
    /// `Ordering::Less` means `self` ranks ahead of `other`.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .score
            .total_cmp(&self.score)
            .then_with(|| {
                orientation_rank(self.orientation).cmp(&orientation_rank(other.orientation))
            })
            .then_with(|| self.cause.start().cmp(&other.cause.start()))
            .then_with(|| self.effect.start().cmp(&other.effect.start()))
            .then_with(|| self.cause.end().cmp(&other.cause.end()))
            .then_with(|| self.effect.end().cmp(&other.effect.end()))
    }
}

fn orientation_rank(orientation: Orientation) -> u8 {
    match orientation {
        Orientation::CauseBeforeEffect => 0,
        Orientation::CauseAfterEffect => 1,
    }
}

/// A raw (start, end) index pair from argmax decoding. Unlike [`Span`], the
/// end may precede the start: the baseline decoder deliberately exposes that
/// failure mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawSpan {
    pub start: usize,
    pub end: usize,
}

impl RawSpan {
    /// True when the indices form a usable span (start <= end).
    pub fn is_ordered(&self) -> bool {
        self.start <= self.end
    }

    /// Token indices covered, empty when the pair is inverted.
    fn token_range(&self) -> std::ops::RangeInclusive<usize> {
        if self.is_ordered() {
            self.start..=self.end
        } else {
            #[allow(clippy::reversed_empty_ranges)]
            {
                1..=0
            }
        }
    }

    /// True when the two raw ranges share no token index.
    pub fn disjoint_from(&self, other: &RawSpan) -> bool {
        !self.token_range().any(|t| other.token_range().contains(&t))
    }
}

/// Output of the unconstrained argmax baseline, including its known failure
/// modes (inverted spans, overlapping pairs) as explicit flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineDecodeResult {
    pub raw_cause: RawSpan,
    pub raw_effect: RawSpan,
    /// Present iff the field carries signal vectors.
    pub raw_signal: Option<RawSpan>,
    /// True exactly when `raw_cause.start <= raw_cause.end`.
    pub cause_valid: bool,
    /// True exactly when `raw_effect.start <= raw_effect.end`.
    pub effect_valid: bool,
    /// Mirrors `cause_valid` for the signal pair when present.
    pub signal_valid: Option<bool>,
    /// True exactly when the raw cause and effect ranges share no token.
    pub pair_disjoint: bool,
}
