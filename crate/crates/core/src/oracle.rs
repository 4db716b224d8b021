//! Exhaustive reference decoder.
//!
//! Deliberately naive counterparts of the beam-search decoder, used as
//! ground truth in property tests and for golden fixture files. Every
//! (outer pair, orientation) combination is enumerated outright and the best
//! inner pair inside each window is found by full quadratic enumeration, so
//! nothing here shares the decoder's lazy top-k frontier, running prefix
//! maxima, or bounded heap. The ranking comparator and the four-term score
//! expression *are* shared on purpose: otherwise equivalence checks would be
//! flaky on ties and on floating-point summation order.

use crate::decoder::{ensure_valid, score_quadruple, DecodeError, ScoredSpan};
use crate::types::{Orientation, RelationHypothesis, Span, SpanProbabilityField};

/// Brute-force decoding: enumerates all `n(n-1)/2` outer pairs per
/// orientation, maximizes the inner pair inside each by trying every
/// `(i, j)` with `i < j`, sorts everything with
/// [`RelationHypothesis::rank_cmp`], and returns the top `m`.
///
/// O(n⁴) time; intended for sentences up to roughly 20 tokens.
#[allow(clippy::needless_range_loop)]
pub fn oracle_decode(
    field: &SpanProbabilityField,
    m: usize,
) -> Result<Vec<RelationHypothesis>, DecodeError> {
    ensure_valid(field)?;
    let n = field.len();
    if n < 2 {
        return Err(DecodeError::TooShort { n });
    }

    let mut all: Vec<RelationHypothesis> = Vec::with_capacity(n * (n - 1));
    for orientation in [
        Orientation::CauseBeforeEffect,
        Orientation::CauseAfterEffect,
    ] {
        let (outer_a, outer_b, inner_a, inner_b) = match orientation {
            Orientation::CauseBeforeEffect => (
                &field.cause_start,
                &field.effect_end,
                &field.cause_end,
                &field.effect_start,
            ),
            Orientation::CauseAfterEffect => (
                &field.effect_start,
                &field.cause_end,
                &field.effect_end,
                &field.cause_start,
            ),
        };
        for sp in 0..n - 1 {
            for ep in sp + 1..n {
                let mut best: Option<(usize, usize, f64)> = None;
                for i in sp..ep {
                    for j in i + 1..=ep {
                        let inner = inner_a[i] + inner_b[j];
                        let replace = match best {
                            None => true,
                            Some((bi, bj, bs)) => match inner.total_cmp(&bs) {
                                std::cmp::Ordering::Greater => true,
                                std::cmp::Ordering::Less => false,
                                std::cmp::Ordering::Equal => (i, j) < (bi, bj),
                            },
                        };
                        if replace {
                            best = Some((i, j, inner));
                        }
                    }
                }
                let (i, j, _) = best.expect("ep >= sp + 1 leaves room for an inner pair");
                let score = score_quadruple(outer_a[sp], inner_a[i], inner_b[j], outer_b[ep]);
                let first = Span::new(sp, i).expect("sp <= i");
                let second = Span::new(j, ep).expect("j <= ep");
                let (cause, effect) = match orientation {
                    Orientation::CauseBeforeEffect => (first, second),
                    Orientation::CauseAfterEffect => (second, first),
                };
                all.push(
                    RelationHypothesis::new(cause, effect, score)
                        .expect("i < j keeps the spans disjoint"),
                );
            }
        }
    }

    all.sort_by(RelationHypothesis::rank_cmp);
    all.truncate(m);
    Ok(all)
}

/// Brute-force signal maximization: tries every `(s, e)` with `s <= e`,
/// skipping spans longer than `max_len` or overlapping any exclusion span.
/// Same tie-breaks as `decode_signal` (smaller start, then smaller end).
/// Returns `None` when the field has no signal vectors or no span is
/// feasible. The presence gate is not applied here; it belongs to the
/// decoder.
pub fn oracle_signal(
    field: &SpanProbabilityField,
    exclusion: &[Span],
    max_len: Option<usize>,
) -> Result<Option<ScoredSpan>, DecodeError> {
    ensure_valid(field)?;
    let Some(signal) = &field.signal else {
        return Ok(None);
    };
    let n = field.len();
    let mut best: Option<ScoredSpan> = None;
    for s in 0..n {
        for e in s..n {
            if let Some(limit) = max_len {
                if e - s + 1 > limit {
                    continue;
                }
            }
            let span = Span::new(s, e).expect("s <= e");
            if exclusion.iter().any(|x| x.overlaps(&span)) {
                continue;
            }
            let score = signal.start[s] + signal.end[e];
            let replace = match &best {
                None => true,
                Some(current) => match score.total_cmp(&current.score) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => {
                        (s, e) < (current.span.start(), current.span.end())
                    }
                },
            };
            if replace {
                best = Some(ScoredSpan { span, score });
            }
        }
    }
    Ok(best)
}
