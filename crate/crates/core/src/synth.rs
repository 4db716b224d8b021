//! Seeded random probability fields for fixtures, tests, and benchmarks.
//!
//! Pass a deterministic RNG (for example `ChaCha8Rng::seed_from_u64`) to get
//! reproducible fields; nothing here touches thread-local randomness.

use rand::seq::index::sample;
use rand::Rng;

use crate::annotation::AnnotatedRelation;
use crate::decoder::softmax;
use crate::types::{SignalVectors, Span, SpanProbabilityField};

/// Fraction of generated fields that carry signal vectors, roughly matching
/// how often annotated sentences contain a signal marker.
const SIGNAL_RATE: f64 = 0.7;

/// One softmax-normalized probability vector from uniform random scores.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let scores: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
    softmax(&scores).expect("finite scores with n >= 1")
}

/// A valid, normalized field with `n` tokens. Signal vectors (and a
/// presence probability) are attached with probability `SIGNAL_RATE`.
pub fn random_field<R: Rng + ?Sized>(
    rng: &mut R,
    id: impl Into<String>,
    n: usize,
) -> SpanProbabilityField {
    let with_signal = rng.random_bool(SIGNAL_RATE);
    random_field_with(rng, id, n, with_signal)
}

/// Like [`random_field`] with the signal choice made by the caller.
pub fn random_field_with<R: Rng + ?Sized>(
    rng: &mut R,
    id: impl Into<String>,
    n: usize,
    with_signal: bool,
) -> SpanProbabilityField {
    let signal = with_signal.then(|| SignalVectors {
        start: random_distribution(rng, n),
        end: random_distribution(rng, n),
    });
    let signal_presence = signal.as_ref().map(|_| rng.random_range(0.0..1.0));
    SpanProbabilityField {
        id: id.into(),
        tokens: (0..n).map(|i| format!("w{i}")).collect(),
        cause_start: random_distribution(rng, n),
        cause_end: random_distribution(rng, n),
        effect_start: random_distribution(rng, n),
        effect_end: random_distribution(rng, n),
        signal,
        signal_presence,
        normalized: true,
    }
}

/// Random sentence tokens: short lowercase words with occasional punctuation,
/// safe for tagged-string serialization.
pub fn random_tokens<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<String> {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    const PUNCT: &[&str] = &[",", ".", "!", "?", "'", ";"];
    (0..n)
        .map(|_| {
            if rng.random_bool(0.12) {
                PUNCT[rng.random_range(0..PUNCT.len())].to_string()
            } else {
                let len = rng.random_range(1..=8);
                (0..len)
                    .map(|_| LETTERS[rng.random_range(0..LETTERS.len())] as char)
                    .collect()
            }
        })
        .collect()
}

/// A random valid relation over `n` tokens: disjoint cause and effect spans
/// in random order, plus an optional signal span. Requires `n >= 2` without
/// a signal and `n >= 3` with one.
pub fn random_relation<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    with_signal: bool,
) -> AnnotatedRelation {
    let span_count = if with_signal { 3 } else { 2 };
    assert!(n >= span_count, "need at least {span_count} tokens");
    // Sampling 2k distinct values from 0..n+k and shifting each back by half
    // its rank yields k disjoint spans uniformly, single-token spans and
    // adjacent spans included.
    let mut boundaries = sample(rng, n + span_count, 2 * span_count).into_vec();
    boundaries.sort_unstable();
    let mut spans: Vec<Span> = (0..span_count)
        .map(|i| {
            Span::new(boundaries[2 * i] - i, boundaries[2 * i + 1] - (i + 1))
                .expect("shifted boundaries stay ordered")
        })
        .collect();

    // Random role assignment: pick which slot holds the cause, then the
    // effect; the signal (if any) takes the remaining slot.
    let cause_slot = rng.random_range(0..spans.len());
    let cause = spans.remove(cause_slot);
    let effect_slot = rng.random_range(0..spans.len());
    let effect = spans.remove(effect_slot);
    let signal = spans.pop();

    AnnotatedRelation::new(random_tokens(rng, n), cause, effect, signal)
        .expect("disjoint spans over clean tokens")
}
