//! Span decoding: softmax normalization, the unconstrained argmax baseline,
//! the beam-search span selector, and signal decoding with presence gating.
//!
//! The beam-search selector ([`bss_decode`]) fixes the two failure modes of
//! the argmax baseline (end positions landing before start positions, and
//! cause/effect spans overlapping) by searching over outer boundary pairs
//! per orientation and maximizing the inner boundary pair inside each.
//!
//! Scores are plain sums of the four boundary-position values, never
//! log-probabilities, so decoding works equally on softmax outputs and raw
//! logits. All operations are pure functions, safe to call from any number
//! of threads.

mod top_k;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::types::{
    BaselineDecodeResult, DecodeConfig, Orientation, RawSpan, RelationHypothesis,
    SignalOverlapPolicy, SignalVectors, Span, SpanProbabilityField, Violation,
};

/// Error from a decoding operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("field '{id}' is invalid: {}", format_violations(.violations))]
    InvalidField {
        id: String,
        violations: Vec<Violation>,
    },
    #[error("sentence too short to decode (n = {n}, need at least 2 tokens)")]
    TooShort { n: usize },
    #[error("input vector is empty")]
    EmptyInput,
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("window [{lo}, {hi}] invalid for vectors of length {len}")]
    WindowOutOfBounds { lo: usize, hi: usize, len: usize },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn ensure_valid(field: &SpanProbabilityField) -> Result<(), DecodeError> {
    let violations = field.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(DecodeError::InvalidField {
            id: field.id.clone(),
            violations,
        })
    }
}

/// An outer boundary pair: the first span's start and the last span's end,
/// scored before the inner boundaries are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterPair {
    /// Start of the earlier span (`sp`).
    pub start: usize,
    /// End of the later span (`ep`); always `>= start + 1`.
    pub end: usize,
    /// Which orientation's vectors scored this pair.
    pub orientation: Orientation,
    /// `a[start] + b[end]` for the orientation's outer vectors.
    pub score: f64,
}

/// The inner boundary pair inside an outer window: the earlier span's end
/// and the later span's start, with `left_end < right_start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerPair {
    pub left_end: usize,
    pub right_start: usize,
    /// `a[left_end] + b[right_start]` for the orientation's inner vectors.
    pub score: f64,
}

/// A decoded span together with its additive score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredSpan {
    pub span: Span,
    pub score: f64,
}

/// Numerically stable softmax: max-subtraction, then exponentiation and
/// normalization. The output sums to 1 within 1e-9 and is invariant under
/// adding a constant to every input.
pub fn softmax(scores: &[f64]) -> Result<Vec<f64>, DecodeError> {
    if scores.is_empty() {
        return Err(DecodeError::EmptyInput);
    }
    if let Some(index) = scores.iter().position(|v| !v.is_finite()) {
        return Err(DecodeError::NonFinite { index });
    }
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    Ok(exps.into_iter().map(|e| e / total).collect())
}

/// Index of the largest entry, ties broken toward the lowest index.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Unconstrained argmax decoding of every boundary vector independently.
///
/// This deliberately reproduces the baseline's drawbacks: the returned raw
/// index pairs may be inverted (end before start) and the cause/effect
/// ranges may overlap. The flags report which of those occurred.
pub fn baseline_decode(field: &SpanProbabilityField) -> Result<BaselineDecodeResult, DecodeError> {
    ensure_valid(field)?;
    let raw_cause = RawSpan {
        start: argmax(&field.cause_start),
        end: argmax(&field.cause_end),
    };
    let raw_effect = RawSpan {
        start: argmax(&field.effect_start),
        end: argmax(&field.effect_end),
    };
    let raw_signal = field.signal.as_ref().map(|signal| RawSpan {
        start: argmax(&signal.start),
        end: argmax(&signal.end),
    });
    Ok(BaselineDecodeResult {
        cause_valid: raw_cause.is_ordered(),
        effect_valid: raw_effect.is_ordered(),
        signal_valid: raw_signal.as_ref().map(RawSpan::is_ordered),
        pair_disjoint: raw_cause.disjoint_from(&raw_effect),
        raw_cause,
        raw_effect,
        raw_signal,
    })
}

/// Exact top-k pairs `(sp, ep)` with `sp + 1 <= ep` maximizing
/// `a[sp] + b[ep]`, in the order (score desc, sp asc, ep asc).
///
/// For [`Orientation::CauseBeforeEffect`] callers pass
/// `a = cause_start, b = effect_end`; for [`Orientation::CauseAfterEffect`],
/// `a = effect_start, b = cause_end`. The search never materializes all n²
/// pairs: it runs best-first over per-end-position fragments with a
/// constant-time range-argmax table, O((n + k) log n).
pub fn top_k_outer_pairs(
    a: &[f64],
    b: &[f64],
    k: usize,
    orientation: Orientation,
) -> Result<Vec<OuterPair>, DecodeError> {
    if a.len() != b.len() {
        return Err(DecodeError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(DecodeError::TooShort { n: a.len() });
    }
    Ok(top_k::lazy_top_k(a, b, k, orientation))
}

/// Best pair `(i, j)` with `lo <= i < j <= hi` maximizing `a[i] + b[j]`,
/// ties broken by smaller `i` then smaller `j`. Returns `None` when the
/// window cannot hold two positions (`hi == lo`).
///
/// Single left-to-right scan carrying the running leftmost argmax of `a`:
/// O(hi - lo) time.
pub fn best_inner_pair(
    a: &[f64],
    b: &[f64],
    lo: usize,
    hi: usize,
) -> Result<Option<InnerPair>, DecodeError> {
    if a.len() != b.len() {
        return Err(DecodeError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if lo > hi || hi >= a.len() {
        return Err(DecodeError::WindowOutOfBounds {
            lo,
            hi,
            len: a.len(),
        });
    }
    let mut best: Option<InnerPair> = None;
    let mut best_i = lo;
    for j in (lo + 1)..=hi {
        if a[j - 1] > a[best_i] {
            best_i = j - 1;
        }
        let candidate = InnerPair {
            left_end: best_i,
            right_start: j,
            score: a[best_i] + b[j],
        };
        let replace = match &best {
            None => true,
            Some(current) => match candidate.score.total_cmp(&current.score) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    (candidate.left_end, candidate.right_start)
                        < (current.left_end, current.right_start)
                }
            },
        };
        if replace {
            best = Some(candidate);
        }
    }
    Ok(best)
}

/// Four-position score in a fixed evaluation order so that the beam decoder
/// and the exhaustive oracle share one arithmetic path bit for bit.
pub(crate) fn score_quadruple(
    outer_start: f64,
    inner_left: f64,
    inner_right: f64,
    outer_end: f64,
) -> f64 {
    outer_start + inner_left + inner_right + outer_end
}

/// Wrapper whose `Ord` ranks worse hypotheses as greater, so a max-heap
/// bounded at m evicts the worst and keeps the exact top-m.
struct EvictWorst(RelationHypothesis);

impl Ord for EvictWorst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

impl PartialOrd for EvictWorst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for EvictWorst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for EvictWorst {}

/// The beam-search span selector.
///
/// 1. Take the top-k outer pairs independently for each orientation (at most
///    2k candidates).
/// 2. For each outer pair find the best inner pair inside its window; for
///    `CBeforeE` the quadruple reads cause = `[sp, i]`, effect = `[j, ep]`,
///    and for `CAfterE` effect = `[sp, i]`, cause = `[j, ep]`.
/// 3. Score each candidate as the sum of its four boundary probabilities.
/// 4. Keep the top m via a size-bounded min-heap.
///
/// The returned hypotheses are sorted by [`RelationHypothesis::rank_cmp`]
/// and always have disjoint cause/effect spans with `start <= end`; the
/// baseline's invalid outputs cannot occur here. At most m hypotheses are
/// returned, fewer when the candidate pool is smaller. Signals are not
/// attached; see [`decode_signal`] and [`decode`].
pub fn bss_decode(
    field: &SpanProbabilityField,
    config: &DecodeConfig,
) -> Result<Vec<RelationHypothesis>, DecodeError> {
    ensure_valid(field)?;
    let n = field.len();
    if n < 2 {
        return Err(DecodeError::TooShort { n });
    }
    let k = config.beam_width();
    let m = config.num_answers();

    let mut heap: BinaryHeap<EvictWorst> = BinaryHeap::with_capacity(m + 1);
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
        for outer in top_k::lazy_top_k(outer_a, outer_b, k, orientation) {
            // Outer pairs guarantee start + 1 <= end, so an inner pair always
            // exists; the skip keeps the loop total regardless.
            let Some(inner) = best_inner_pair(inner_a, inner_b, outer.start, outer.end)? else {
                continue;
            };
            let score = score_quadruple(
                outer_a[outer.start],
                inner_a[inner.left_end],
                inner_b[inner.right_start],
                outer_b[outer.end],
            );
            let first = Span::new(outer.start, inner.left_end).expect("inner end >= outer start");
            let second = Span::new(inner.right_start, outer.end).expect("outer end >= inner start");
            let (cause, effect) = match orientation {
                Orientation::CauseBeforeEffect => (first, second),
                Orientation::CauseAfterEffect => (second, first),
            };
            let hypothesis = RelationHypothesis::new(cause, effect, score)
                .expect("strict inner pair is disjoint");
            heap.push(EvictWorst(hypothesis));
            if heap.len() > m {
                heap.pop();
            }
        }
    }

    Ok(heap
        .into_sorted_vec()
        .into_iter()
        .map(|entry| entry.0)
        .collect())
}

/// Decodes the signal span, if any.
///
/// Returns `None` when the field has no signal vectors, or when a
/// signal-presence probability is supplied and falls below the config
/// threshold (the classifier gate). Otherwise returns the span `[s, e]`
/// maximizing `signal_start[s] + signal_end[e]` subject to the length cap
/// and, under [`SignalOverlapPolicy::ForbidOverlap`], disjointness from
/// every exclusion span. Ties prefer smaller `s`, then smaller `e`. `None`
/// when no feasible span exists.
pub fn decode_signal(
    field: &SpanProbabilityField,
    config: &DecodeConfig,
    exclusion: &[Span],
) -> Result<Option<ScoredSpan>, DecodeError> {
    ensure_valid(field)?;
    let Some(signal) = &field.signal else {
        return Ok(None);
    };
    if let Some(presence) = field.signal_presence {
        if presence < config.signal_threshold() {
            return Ok(None);
        }
    }

    let n = field.len();
    let mut blocked = vec![false; n];
    if config.overlap_policy() == SignalOverlapPolicy::ForbidOverlap {
        for span in exclusion {
            for t in span.token_indices() {
                if t < n {
                    blocked[t] = true;
                }
            }
        }
    }
    let max_len = config.max_signal_length().unwrap_or(n);

    let mut best: Option<ScoredSpan> = None;
    let mut gap_start = 0;
    while gap_start < n {
        if blocked[gap_start] {
            gap_start += 1;
            continue;
        }
        let mut gap_end = gap_start;
        while gap_end + 1 < n && !blocked[gap_end + 1] {
            gap_end += 1;
        }
        scan_gap(signal, gap_start, gap_end, max_len, &mut best);
        gap_start = gap_end + 1;
    }
    Ok(best)
}

/// Sliding-window maximization of `start[s] + end[e]` over `s <= e` within
/// one unblocked gap, with span length capped at `max_len`. The window keeps
/// candidate starts in a monotone deque whose front is the leftmost maximum.
fn scan_gap(
    signal: &SignalVectors,
    lo: usize,
    hi: usize,
    max_len: usize,
    best: &mut Option<ScoredSpan>,
) {
    let starts = &signal.start;
    let ends = &signal.end;
    let mut window: VecDeque<usize> = VecDeque::new();
    for e in lo..=hi {
        while let Some(&back) = window.back() {
            if starts[back] < starts[e] {
                window.pop_back();
            } else {
                break;
            }
        }
        window.push_back(e);
        let min_start = (e + 1).saturating_sub(max_len);
        while let Some(&front) = window.front() {
            if front < min_start {
                window.pop_front();
            } else {
                break;
            }
        }
        let s = *window.front().expect("window always holds e");
        let score = starts[s] + ends[e];
        let replace = match best {
            None => true,
            Some(current) => match score.total_cmp(&current.score) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => (s, e) < (current.span.start(), current.span.end()),
            },
        };
        if replace {
            *best = Some(ScoredSpan {
                span: Span::new(s, e).expect("window start precedes end"),
                score,
            });
        }
    }
}

/// Full decoding: [`bss_decode`] with the signal span attached to each
/// hypothesis. The signal is decoded once per hypothesis with that
/// hypothesis's cause and effect spans as the exclusion set, so under
/// `ForbidOverlap` different hypotheses may receive different signals; under
/// `AllowOverlap` every hypothesis gets the single best span.
pub fn decode(
    field: &SpanProbabilityField,
    config: &DecodeConfig,
) -> Result<Vec<RelationHypothesis>, DecodeError> {
    let hypotheses = bss_decode(field, config)?;
    hypotheses
        .into_iter()
        .map(|hypothesis| {
            let exclusion = [hypothesis.cause(), hypothesis.effect()];
            match decode_signal(field, config, &exclusion)? {
                Some(found) => Ok(hypothesis
                    .with_signal(found.span, config.overlap_policy())
                    .expect("decoded signal respects the exclusion set")),
                None => Ok(hypothesis),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(
        cause_start: Vec<f64>,
        cause_end: Vec<f64>,
        effect_start: Vec<f64>,
        effect_end: Vec<f64>,
    ) -> SpanProbabilityField {
        let n = cause_start.len();
        SpanProbabilityField {
            id: "test".into(),
            tokens: (0..n).map(|i| format!("t{i}")).collect(),
            cause_start,
            cause_end,
            effect_start,
            effect_end,
            signal: None,
            signal_presence: None,
            normalized: false,
        }
    }

    fn span(start: usize, end: usize) -> Span {
        Span::new(start, end).unwrap()
    }

    #[test]
    fn softmax_uniform_on_equal_logits() {
        assert_eq!(softmax(&[0.0; 4]).unwrap(), vec![0.25; 4]);
    }

    #[test]
    fn softmax_shift_invariant_ratio() {
        for c in [0.0, -100.0, 1e5] {
            let out = softmax(&[c, c + 3f64.ln()]).unwrap();
            assert!((out[0] - 0.25).abs() < 1e-9, "c={c}: {out:?}");
            assert!((out[1] - 0.75).abs() < 1e-9, "c={c}: {out:?}");
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn softmax_matches_high_precision_reference() {
        // Reference values computed with 60-digit arithmetic.
        let input = [0.31, -1.27, 2.05, 0.0, -0.5, 1.75, -2.6];
        let expected = [
            0.08092713302285861411214,
            0.01666897417182297074716,
            0.461069669043484806761,
            0.05935575939157381603358,
            0.03600108790151560371181,
            0.3415688118311029480302,
            0.004408564637641240604087,
        ];
        let out = softmax(&input).unwrap();
        for (got, want) in out.iter().zip(expected) {
            assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        }
        let sum: f64 = out.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn softmax_rejects_empty_and_non_finite() {
        assert_eq!(softmax(&[]), Err(DecodeError::EmptyInput));
        assert_eq!(
            softmax(&[0.0, f64::INFINITY]),
            Err(DecodeError::NonFinite { index: 1 })
        );
    }

    #[test]
    fn baseline_delta_distributions() {
        let f = field(
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
        );
        let result = baseline_decode(&f).unwrap();
        assert_eq!(result.raw_cause, RawSpan { start: 0, end: 0 });
        assert_eq!(result.raw_effect, RawSpan { start: 1, end: 1 });
        assert!(result.cause_valid && result.effect_valid && result.pair_disjoint);
        assert_eq!(result.raw_signal, None);
        assert_eq!(result.signal_valid, None);
    }

    #[test]
    fn baseline_reproduces_end_before_start_drawback() {
        let f = field(
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        );
        let result = baseline_decode(&f).unwrap();
        assert_eq!(result.raw_cause, RawSpan { start: 2, end: 0 });
        assert!(!result.cause_valid);
        assert!(result.effect_valid);
    }

    #[test]
    fn baseline_uniform_ties_break_low() {
        let f = field(vec![0.25; 4], vec![0.25; 4], vec![0.25; 4], vec![0.25; 4]);
        let result = baseline_decode(&f).unwrap();
        assert_eq!(result.raw_cause, RawSpan { start: 0, end: 0 });
        assert_eq!(result.raw_effect, RawSpan { start: 0, end: 0 });
        assert!(result.cause_valid && result.effect_valid);
        assert!(!result.pair_disjoint);
    }

    #[test]
    fn top_k_delta_vectors() {
        let pairs = top_k_outer_pairs(
            &[1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0],
            1,
            Orientation::CauseBeforeEffect,
        )
        .unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs[0].start, pairs[0].end, pairs[0].score), (0, 2, 2.0));
    }

    #[test]
    fn top_k_tied_pairs_follow_tiebreak_and_truncate_to_valid_count() {
        let pairs = top_k_outer_pairs(
            &[0.5, 0.5, 0.0],
            &[0.0, 0.5, 0.5],
            4,
            Orientation::CauseBeforeEffect,
        )
        .unwrap();
        let got: Vec<(usize, usize, f64)> =
            pairs.iter().map(|p| (p.start, p.end, p.score)).collect();
        assert_eq!(got, vec![(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
    }

    #[test]
    fn top_k_rejects_short_input() {
        assert_eq!(
            top_k_outer_pairs(&[1.0], &[1.0], 1, Orientation::CauseBeforeEffect),
            Err(DecodeError::TooShort { n: 1 })
        );
    }

    #[test]
    fn inner_pair_delta_vectors() {
        let found = best_inner_pair(&[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0], 0, 3)
            .unwrap()
            .unwrap();
        assert_eq!(
            (found.left_end, found.right_start, found.score),
            (1, 3, 2.0)
        );
    }

    #[test]
    fn inner_pair_absent_in_single_position_window() {
        assert_eq!(best_inner_pair(&[0.0; 4], &[0.0; 4], 2, 2).unwrap(), None);
    }

    #[test]
    fn inner_pair_rejects_out_of_bounds() {
        assert!(best_inner_pair(&[0.0; 3], &[0.0; 3], 1, 3).is_err());
        assert!(best_inner_pair(&[0.0; 3], &[0.0; 3], 2, 1).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn inner_pair_length_12_window_matches_exhaustive_search() {
        let a = [
            0.31, 0.77, 0.05, 0.52, 0.91, 0.13, 0.68, 0.24, 0.46, 0.88, 0.02, 0.59,
        ];
        let b = [
            0.64, 0.17, 0.93, 0.41, 0.08, 0.75, 0.29, 0.86, 0.53, 0.11, 0.97, 0.38,
        ];
        let got = best_inner_pair(&a, &b, 1, 10).unwrap().unwrap();
        let mut expected: Option<(usize, usize, f64)> = None;
        for i in 1..10 {
            for j in (i + 1)..=10 {
                let score = a[i] + b[j];
                if expected.is_none_or(|(_, _, s)| score > s) {
                    expected = Some((i, j, score));
                }
            }
        }
        let (i, j, score) = expected.unwrap();
        assert_eq!((got.left_end, got.right_start, got.score), (i, j, score));
    }

    #[test]
    fn inner_pair_tie_prefers_lexicographically_smaller_pair() {
        // (0,2), (0,3), (1,2), (1,3) all score 1.0; smallest (i, j) wins.
        let a = [0.5, 0.5, 0.0, 0.0];
        let b = [0.0, 0.0, 0.5, 0.5];
        let found = best_inner_pair(&a, &b, 0, 3).unwrap().unwrap();
        assert_eq!((found.left_end, found.right_start), (0, 2));
    }

    #[test]
    fn bss_delta_cause_before_effect() {
        let f = field(
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
        );
        let config = DecodeConfig::new(1, 1).unwrap();
        let out = bss_decode(&f, &config).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].cause(), span(0, 0));
        assert_eq!(out[0].effect(), span(1, 1));
        assert_eq!(out[0].orientation(), Orientation::CauseBeforeEffect);
        assert_eq!(out[0].score(), 4.0);
    }

    #[test]
    fn bss_delta_cause_after_effect() {
        let f = field(
            vec![0.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
        );
        let config = DecodeConfig::new(1, 1).unwrap();
        let out = bss_decode(&f, &config).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].effect(), span(0, 0));
        assert_eq!(out[0].cause(), span(1, 1));
        assert_eq!(out[0].orientation(), Orientation::CauseAfterEffect);
        assert_eq!(out[0].score(), 4.0);
    }

    #[test]
    fn bss_uniform_n3_selects_by_tiebreak() {
        let third = 1.0 / 3.0;
        let f = field(
            vec![third; 3],
            vec![third; 3],
            vec![third; 3],
            vec![third; 3],
        );
        let config = DecodeConfig::new(3, 2).unwrap();
        let out = bss_decode(&f, &config).unwrap();
        assert_eq!(out.len(), 2);
        let expected_score = third + third + third + third;
        for h in &out {
            assert_eq!(h.score(), expected_score);
            assert_eq!(h.orientation(), Orientation::CauseBeforeEffect);
        }
        assert_eq!((out[0].cause(), out[0].effect()), (span(0, 0), span(1, 1)));
        assert_eq!((out[1].cause(), out[1].effect()), (span(0, 0), span(1, 2)));
    }

    #[test]
    fn bss_rejects_single_token_field() {
        let f = field(vec![1.0], vec![1.0], vec![1.0], vec![1.0]);
        let config = DecodeConfig::new(1, 1).unwrap();
        assert_eq!(bss_decode(&f, &config), Err(DecodeError::TooShort { n: 1 }));
    }

    #[test]
    fn bss_rejects_invalid_field() {
        let mut f = field(
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
        );
        f.cause_start.push(0.0);
        let config = DecodeConfig::new(1, 1).unwrap();
        assert!(matches!(
            bss_decode(&f, &config),
            Err(DecodeError::InvalidField { .. })
        ));
    }

    fn signal_field(presence: Option<f64>) -> SpanProbabilityField {
        let mut f = field(
            vec![1.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
        );
        f.signal = Some(SignalVectors {
            start: vec![0.0, 0.0, 1.0, 0.0],
            end: vec![0.0, 0.0, 1.0, 0.0],
        });
        f.signal_presence = presence;
        f
    }

    #[test]
    fn signal_delta_with_exclusion() {
        let f = signal_field(Some(0.9));
        let config = DecodeConfig::new(1, 1).unwrap();
        let found = decode_signal(&f, &config, &[span(0, 1)]).unwrap().unwrap();
        assert_eq!(found.span, span(2, 2));
        assert_eq!(found.score, 2.0);
    }

    #[test]
    fn signal_gated_out_below_threshold() {
        let f = signal_field(Some(0.3));
        let config = DecodeConfig::new(1, 1).unwrap();
        assert_eq!(decode_signal(&f, &config, &[span(0, 1)]).unwrap(), None);
    }

    #[test]
    fn signal_absent_without_vectors() {
        let f = field(
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
        );
        let config = DecodeConfig::new(1, 1).unwrap();
        assert_eq!(decode_signal(&f, &config, &[]).unwrap(), None);
    }

    #[test]
    fn signal_absent_when_everything_excluded() {
        let f = signal_field(None);
        let config = DecodeConfig::new(1, 1).unwrap();
        assert_eq!(decode_signal(&f, &config, &[span(0, 3)]).unwrap(), None);
    }

    #[test]
    fn signal_search_confined_to_the_gap_between_exclusions() {
        // Exclusions [0,3] and [6,9] leave only positions 4..=5.
        let mut f = field(vec![0.1; 10], vec![0.1; 10], vec![0.1; 10], vec![0.1; 10]);
        f.signal = Some(SignalVectors {
            start: vec![0.9, 0.8, 0.7, 0.6, 0.2, 0.3, 0.9, 0.9, 0.9, 0.9],
            end: vec![0.9, 0.9, 0.9, 0.9, 0.1, 0.4, 0.9, 0.8, 0.7, 0.6],
        });
        let config = DecodeConfig::new(1, 1).unwrap();
        let exclusion = [span(0, 3), span(6, 9)];
        let found = decode_signal(&f, &config, &exclusion).unwrap().unwrap();
        // Exhaustive over s <= e within [4, 5]: (4,4)=0.3, (4,5)=0.6,
        // (5,5)=0.7 -> best is [5,5].
        assert_eq!(found.span, span(5, 5));
        assert_eq!(found.score, 0.3 + 0.4);
    }

    #[test]
    fn signal_respects_max_length() {
        let mut f = signal_field(None);
        f.signal = Some(SignalVectors {
            start: vec![0.6, 0.0, 0.0, 0.0],
            end: vec![0.0, 0.0, 0.0, 0.9],
        });
        let unbounded = DecodeConfig::new(1, 1).unwrap();
        let capped = DecodeConfig::new(1, 1)
            .unwrap()
            .with_max_signal_length(2)
            .unwrap();
        assert_eq!(
            decode_signal(&f, &unbounded, &[]).unwrap().unwrap().span,
            span(0, 3)
        );
        assert_eq!(
            decode_signal(&f, &capped, &[]).unwrap().unwrap().span,
            span(2, 3)
        );
    }

    #[test]
    fn signal_allow_overlap_ignores_exclusion() {
        let f = signal_field(None);
        let config = DecodeConfig::new(1, 1)
            .unwrap()
            .with_overlap_policy(SignalOverlapPolicy::AllowOverlap);
        let found = decode_signal(&f, &config, &[span(0, 3)]).unwrap().unwrap();
        assert_eq!(found.span, span(2, 2));
    }

    #[test]
    fn decode_attaches_no_signal_without_vectors() {
        let f = field(
            vec![1.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 1.0],
        );
        let config = DecodeConfig::new(1, 1).unwrap();
        let out = decode(&f, &config).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].signal(), None);
    }

    #[test]
    fn decode_matches_bss_when_gated_out() {
        let f = signal_field(Some(0.1));
        let config = DecodeConfig::new(2, 2).unwrap();
        let gated = decode(&f, &config).unwrap();
        let bare = bss_decode(&f, &config).unwrap();
        assert_eq!(gated, bare);
    }

    #[test]
    fn decode_attaches_signal_outside_hypothesis_spans() {
        let f = signal_field(Some(0.9));
        let config = DecodeConfig::new(1, 1).unwrap();
        let out = decode(&f, &config).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].cause(), span(0, 0));
        assert_eq!(out[0].effect(), span(1, 1));
        assert_eq!(out[0].signal(), Some(span(2, 2)));
    }
}
