//! Inline `<ARG0>/<ARG1>/<SIG>` annotation parsing and serialization.
//!
//! The tagged-string grammar: the literal byte sequences `<ARG0>…</ARG0>`,
//! `<ARG1>…</ARG1>`, and `<SIG>…</SIG>`, case-sensitive, non-nesting, with
//! ARG0 (cause) and ARG1 (effect) exactly once and SIG (signal) at most
//! once. Tokens are whitespace-delimited and never cross a tag boundary: a
//! tag acts as a token separator, so trailing punctuation glued to a closing
//! tag (`met</ARG0>.`) becomes its own token. A tag that cuts through a word
//! (the adjacent outside fragment contains letters or digits, as in
//! `pre<ARG0>fix</ARG0>`) is rejected rather than silently splitting it.
//!
//! Serialization always emits the canonical form: tokens joined by single
//! spaces with tags flush against their span's first and last token.
//! `parse(serialize(r)) == r` holds exactly for every valid relation;
//! serialized strings are fixpoints of normalization.

use std::fmt;

use thiserror::Error;

use crate::types::{RelationHypothesis, Span, SpanProbabilityField};

/// Which annotated span a tag or error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanRole {
    Cause,
    Effect,
    Signal,
}

impl SpanRole {
    const ALL: [SpanRole; 3] = [SpanRole::Cause, SpanRole::Effect, SpanRole::Signal];

    /// The tag name used in the inline format.
    pub fn tag_name(&self) -> &'static str {
        match self {
            SpanRole::Cause => "ARG0",
            SpanRole::Effect => "ARG1",
            SpanRole::Signal => "SIG",
        }
    }

    pub fn open_tag(&self) -> &'static str {
        match self {
            SpanRole::Cause => "<ARG0>",
            SpanRole::Effect => "<ARG1>",
            SpanRole::Signal => "<SIG>",
        }
    }

    pub fn close_tag(&self) -> &'static str {
        match self {
            SpanRole::Cause => "</ARG0>",
            SpanRole::Effect => "</ARG1>",
            SpanRole::Signal => "</SIG>",
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }
}

impl fmt::Display for SpanRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag_name())
    }
}

/// Error from parsing a tagged string or constructing a relation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnotationError {
    #[error("missing tag: {tag} must appear exactly once")]
    MissingTag { tag: SpanRole },
    #[error("duplicate tag: {tag} appears more than once")]
    DuplicateTag { tag: SpanRole },
    #[error("unclosed tag: {tag}")]
    UnclosedTag { tag: SpanRole },
    #[error("closing tag {tag} without a matching open tag")]
    UnexpectedClose { tag: SpanRole },
    #[error("nested tags: {inner} opened inside {outer}")]
    NestedTags { outer: SpanRole, inner: SpanRole },
    #[error("interleaved tags: {close} closed while {open} was open")]
    MismatchedClose { open: SpanRole, close: SpanRole },
    #[error("tag boundary inside a token: {tag} cuts through {fragment:?}")]
    BoundaryInsideToken { tag: SpanRole, fragment: String },
    #[error("empty span: {tag} contains no tokens")]
    EmptyTagSpan { tag: SpanRole },
    #[error("token {index} is empty")]
    EmptyToken { index: usize },
    #[error("token {index} ({token:?}) contains whitespace")]
    TokenHasWhitespace { index: usize, token: String },
    #[error("token {index} ({token:?}) contains a tag literal")]
    TokenHasTagLiteral { index: usize, token: String },
    #[error("{role} span {span} out of bounds for {len} tokens")]
    SpanOutOfBounds {
        role: SpanRole,
        span: Span,
        len: usize,
    },
    #[error("{first} and {second} spans overlap")]
    OverlappingSpans { first: SpanRole, second: SpanRole },
}

/// One gold or predicted relation over a tokenized sentence: a cause span,
/// an effect span, and optionally a signal span, all disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedRelation {
    tokens: Vec<String>,
    cause: Span,
    effect: Span,
    signal: Option<Span>,
}

impl AnnotatedRelation {
    /// Validates tokens and spans and builds the relation. Tokens must be
    /// non-empty, free of whitespace, and free of tag literals so that the
    /// relation serializes reversibly; spans must be in bounds and pairwise
    /// disjoint.
    pub fn new(
        tokens: Vec<String>,
        cause: Span,
        effect: Span,
        signal: Option<Span>,
    ) -> Result<Self, AnnotationError> {
        for (index, token) in tokens.iter().enumerate() {
            if token.is_empty() {
                return Err(AnnotationError::EmptyToken { index });
            }
            if token.chars().any(char::is_whitespace) {
                return Err(AnnotationError::TokenHasWhitespace {
                    index,
                    token: token.clone(),
                });
            }
            let has_tag = SpanRole::ALL
                .iter()
                .any(|role| token.contains(role.open_tag()) || token.contains(role.close_tag()));
            if has_tag {
                return Err(AnnotationError::TokenHasTagLiteral {
                    index,
                    token: token.clone(),
                });
            }
        }
        let len = tokens.len();
        let spans = [
            (SpanRole::Cause, Some(cause)),
            (SpanRole::Effect, Some(effect)),
            (SpanRole::Signal, signal),
        ];
        for (role, span) in &spans {
            if let Some(span) = span {
                if !span.fits_within(len) {
                    return Err(AnnotationError::SpanOutOfBounds {
                        role: *role,
                        span: *span,
                        len,
                    });
                }
            }
        }
        for (i, (role_a, span_a)) in spans.iter().enumerate() {
            for (role_b, span_b) in &spans[i + 1..] {
                if let (Some(a), Some(b)) = (span_a, span_b) {
                    if a.overlaps(b) {
                        return Err(AnnotationError::OverlappingSpans {
                            first: *role_a,
                            second: *role_b,
                        });
                    }
                }
            }
        }
        Ok(Self {
            tokens,
            cause,
            effect,
            signal,
        })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
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

    /// The sentence with tags removed: tokens joined by single spaces.
    pub fn plain_text(&self) -> String {
        self.tokens.join(" ")
    }

    fn span_text(&self, span: Span) -> String {
        self.tokens[span.start()..=span.end()].join(" ")
    }

    pub fn cause_text(&self) -> String {
        self.span_text(self.cause)
    }

    pub fn effect_text(&self) -> String {
        self.span_text(self.effect)
    }

    pub fn signal_text(&self) -> Option<String> {
        self.signal.map(|span| self.span_text(span))
    }
}

/// Splits on runs of whitespace, preserving all non-whitespace characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece<'a> {
    Text(&'a str),
    Open(SpanRole),
    Close(SpanRole),
}

/// Splits the input into text chunks and tag tokens, earliest match first.
/// The six tag literals never overlap each other, so scanning for the
/// leftmost occurrence is unambiguous.
fn lex(input: &str) -> Vec<Piece<'_>> {
    let mut pieces = Vec::new();
    let mut rest = input;
    loop {
        let mut earliest: Option<(usize, SpanRole, bool, usize)> = None;
        for role in SpanRole::ALL {
            for (literal, is_close) in [(role.open_tag(), false), (role.close_tag(), true)] {
                if let Some(pos) = rest.find(literal) {
                    if earliest.is_none_or(|(best, ..)| pos < best) {
                        earliest = Some((pos, role, is_close, literal.len()));
                    }
                }
            }
        }
        match earliest {
            None => {
                if !rest.is_empty() {
                    pieces.push(Piece::Text(rest));
                }
                return pieces;
            }
            Some((pos, role, is_close, len)) => {
                if pos > 0 {
                    pieces.push(Piece::Text(&rest[..pos]));
                }
                pieces.push(if is_close {
                    Piece::Close(role)
                } else {
                    Piece::Open(role)
                });
                rest = &rest[pos + len..];
            }
        }
    }
}

fn trailing_fragment(text: &str) -> Option<&str> {
    let trimmed = text.trim_end_matches(|c: char| !c.is_whitespace());
    let fragment = &text[trimmed.len()..];
    (!fragment.is_empty()).then_some(fragment)
}

fn leading_fragment(text: &str) -> Option<&str> {
    let end = text
        .char_indices()
        .find(|(_, c)| c.is_whitespace())
        .map_or(text.len(), |(i, _)| i);
    (end > 0).then(|| &text[..end])
}

/// A tag may sit flush against punctuation (which becomes its own token),
/// but not inside a word: any letter or digit in the adjacent outside
/// fragment means the tag cuts a token.
fn check_outside_fragment(fragment: Option<&str>, tag: SpanRole) -> Result<(), AnnotationError> {
    if let Some(fragment) = fragment {
        if fragment.chars().any(char::is_alphanumeric) {
            return Err(AnnotationError::BoundaryInsideToken {
                tag,
                fragment: fragment.to_string(),
            });
        }
    }
    Ok(())
}

/// Parses a tagged string into a relation over the tag-stripped tokens.
///
/// Requires exactly one `<ARG0>…</ARG0>` (cause) and one `<ARG1>…</ARG1>`
/// (effect), at most one `<SIG>…</SIG>` (signal), no nesting or
/// interleaving, and no tag cutting through a word. Every malformed input
/// maps to a structured [`AnnotationError`]; parsing never panics.
pub fn parse_tagged(tagged: &str) -> Result<AnnotatedRelation, AnnotationError> {
    let pieces = lex(tagged);

    let mut open: Option<SpanRole> = None;
    let mut seen = [false; 3];
    let mut segments: Vec<(Option<SpanRole>, &str)> = Vec::new();
    for (idx, piece) in pieces.iter().enumerate() {
        match piece {
            Piece::Text(text) => segments.push((open, text)),
            Piece::Open(role) => {
                if let Some(outer) = open {
                    return Err(AnnotationError::NestedTags {
                        outer,
                        inner: *role,
                    });
                }
                if seen[role.index()] {
                    return Err(AnnotationError::DuplicateTag { tag: *role });
                }
                seen[role.index()] = true;
                if idx > 0 {
                    if let Piece::Text(prev) = pieces[idx - 1] {
                        check_outside_fragment(trailing_fragment(prev), *role)?;
                    }
                }
                open = Some(*role);
            }
            Piece::Close(role) => {
                match open {
                    None => return Err(AnnotationError::UnexpectedClose { tag: *role }),
                    Some(current) if current != *role => {
                        return Err(AnnotationError::MismatchedClose {
                            open: current,
                            close: *role,
                        })
                    }
                    Some(_) => {}
                }
                if let Some(Piece::Text(next)) = pieces.get(idx + 1) {
                    check_outside_fragment(leading_fragment(next), *role)?;
                }
                open = None;
            }
        }
    }
    if let Some(tag) = open {
        return Err(AnnotationError::UnclosedTag { tag });
    }
    for role in [SpanRole::Cause, SpanRole::Effect] {
        if !seen[role.index()] {
            return Err(AnnotationError::MissingTag { tag: role });
        }
    }

    let mut tokens: Vec<String> = Vec::new();
    let mut spans: [Option<Span>; 3] = [None; 3];
    for (kind, text) in segments {
        let first = tokens.len();
        tokens.extend(text.split_whitespace().map(str::to_owned));
        if let Some(role) = kind {
            if tokens.len() == first {
                return Err(AnnotationError::EmptyTagSpan { tag: role });
            }
            spans[role.index()] =
                Some(Span::new(first, tokens.len() - 1).expect("segment produced tokens"));
        }
    }
    for role in SpanRole::ALL {
        if seen[role.index()] && spans[role.index()].is_none() {
            return Err(AnnotationError::EmptyTagSpan { tag: role });
        }
    }

    AnnotatedRelation::new(
        tokens,
        spans[SpanRole::Cause.index()].expect("presence checked above"),
        spans[SpanRole::Effect.index()].expect("presence checked above"),
        spans[SpanRole::Signal.index()],
    )
}

/// Renders a relation in canonical tagged form: tokens joined by single
/// spaces, tags flush against their span boundaries. Exact inverse of
/// [`parse_tagged`] on its own output.
pub fn serialize_tagged(relation: &AnnotatedRelation) -> String {
    let spans = [
        (SpanRole::Cause, Some(relation.cause())),
        (SpanRole::Effect, Some(relation.effect())),
        (SpanRole::Signal, relation.signal()),
    ];
    let mut parts: Vec<String> = Vec::with_capacity(relation.tokens().len());
    for (idx, token) in relation.tokens().iter().enumerate() {
        let mut piece = String::new();
        for (role, span) in &spans {
            if span.is_some_and(|s| s.start() == idx) {
                piece.push_str(role.open_tag());
            }
        }
        piece.push_str(token);
        for (role, span) in &spans {
            if span.is_some_and(|s| s.end() == idx) {
                piece.push_str(role.close_tag());
            }
        }
        parts.push(piece);
    }
    parts.join(" ")
}

/// Attaches a decoded hypothesis to its field's tokens so it can be
/// serialized or scored. Fails when a span exceeds the token count, when a
/// signal overlaps cause/effect (unrepresentable in the flat tag grammar),
/// or when the tokens themselves cannot round-trip.
pub fn hypothesis_to_relation(
    field: &SpanProbabilityField,
    hypothesis: &RelationHypothesis,
) -> Result<AnnotatedRelation, AnnotationError> {
    AnnotatedRelation::new(
        field.tokens.clone(),
        hypothesis.cause(),
        hypothesis.effect(),
        hypothesis.signal(),
    )
}
