//! Lazy exact top-k selection of outer boundary pairs.
//!
//! The task: among all pairs `(sp, ep)` with `sp + 1 <= ep`, return the k
//! pairs with the largest `a[sp] + b[ep]`, in the order (score desc, sp asc,
//! ep asc). Materializing all n² pairs is off the table for large n, so the
//! search runs best-first over *fragments*: one heap entry per (end position,
//! sub-range of start positions), holding that fragment's best pair. Popping
//! a fragment emits its pair and splits the range around the emitted start.
//! With an O(1) range-argmax table this is O((n + k) log n).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::OuterPair;
use crate::types::Orientation;

/// Sparse table answering leftmost-argmax queries over half-open index
/// ranges in O(1) after O(n log n) build.
struct RangeArgmax<'a> {
    values: &'a [f64],
    /// `table[j][i]` = leftmost argmax of `values[i .. i + 2^j]`.
    table: Vec<Vec<usize>>,
}

impl<'a> RangeArgmax<'a> {
    fn new(values: &'a [f64]) -> Self {
        let n = values.len();
        let levels = if n <= 1 { 1 } else { n.ilog2() as usize + 1 };
        let mut table: Vec<Vec<usize>> = Vec::with_capacity(levels);
        table.push((0..n).collect());
        for j in 1..levels {
            let half = 1usize << (j - 1);
            let width = 1usize << j;
            let prev = &table[j - 1];
            let mut row = Vec::with_capacity(n + 1 - width);
            for i in 0..=(n - width) {
                row.push(leftmost_max(values, prev[i], prev[i + half]));
            }
            table.push(row);
        }
        Self { values, table }
    }

    /// Leftmost argmax over the non-empty range `lo..hi`.
    fn query(&self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo < hi && hi <= self.values.len());
        let j = (hi - lo).ilog2() as usize;
        let left = self.table[j][lo];
        let right = self.table[j][hi - (1 << j)];
        leftmost_max(self.values, left, right)
    }
}

/// Of two candidate positions, keep the one with the larger value; on equal
/// values keep `p`. Call sites always pass the earlier-range candidate as
/// `p`, which makes the result the leftmost maximum.
fn leftmost_max(values: &[f64], p: usize, q: usize) -> usize {
    if values[q] > values[p] {
        q
    } else {
        p
    }
}

/// Best remaining pair for a fixed end position, over the start-position
/// range `lo..hi`. `sp` is the leftmost argmax of `a` within that range.
struct Fragment {
    score: f64,
    sp: usize,
    ep: usize,
    lo: usize,
    hi: usize,
}

impl Fragment {
    fn new(argmax: &RangeArgmax<'_>, b_ep: f64, ep: usize, lo: usize, hi: usize) -> Self {
        let sp = argmax.query(lo, hi);
        Self {
            score: argmax.values[sp] + b_ep,
            sp,
            ep,
            lo,
            hi,
        }
    }
}

// BinaryHeap pops its maximum, so "greater" means "emitted earlier":
// higher score, then smaller sp, then smaller ep.
impl Ord for Fragment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.sp.cmp(&self.sp))
            .then_with(|| other.ep.cmp(&self.ep))
    }
}

impl PartialOrd for Fragment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Fragment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fragment {}

/// Exact top-k `(sp, ep)` pairs with `sp + 1 <= ep`, maximizing
/// `a[sp] + b[ep]`. Requires `a.len() == b.len() >= 2`.
pub(super) fn lazy_top_k(
    a: &[f64],
    b: &[f64],
    k: usize,
    orientation: Orientation,
) -> Vec<OuterPair> {
    let n = a.len();
    debug_assert!(n >= 2 && b.len() == n);
    let argmax = RangeArgmax::new(a);

    // One fragment per end position, initially covering all starts before it.
    let mut heap: BinaryHeap<Fragment> = (1..n)
        .map(|ep| Fragment::new(&argmax, b[ep], ep, 0, ep))
        .collect();

    let max_pairs = n * (n - 1) / 2;
    let mut out = Vec::with_capacity(k.min(max_pairs));
    while out.len() < k {
        let Some(fragment) = heap.pop() else { break };
        out.push(OuterPair {
            start: fragment.sp,
            end: fragment.ep,
            orientation,
            score: fragment.score,
        });
        let b_ep = b[fragment.ep];
        if fragment.lo < fragment.sp {
            heap.push(Fragment::new(
                &argmax,
                b_ep,
                fragment.ep,
                fragment.lo,
                fragment.sp,
            ));
        }
        if fragment.sp + 1 < fragment.hi {
            heap.push(Fragment::new(
                &argmax,
                b_ep,
                fragment.ep,
                fragment.sp + 1,
                fragment.hi,
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_argmax_prefers_leftmost_on_ties() {
        let values = [1.0, 3.0, 3.0, 0.5, 3.0];
        let table = RangeArgmax::new(&values);
        assert_eq!(table.query(0, 5), 1);
        assert_eq!(table.query(2, 5), 2);
        assert_eq!(table.query(3, 4), 3);
        assert_eq!(table.query(3, 5), 4);
    }

    #[test]
    fn range_argmax_single_element() {
        let values = [7.0];
        let table = RangeArgmax::new(&values);
        assert_eq!(table.query(0, 1), 0);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn lazy_top_k_emits_all_pairs_in_rank_order() {
        let a = [0.2, 0.9, 0.1, 0.4];
        let b = [0.5, 0.3, 0.8, 0.6];
        let pairs = lazy_top_k(&a, &b, usize::MAX, Orientation::CauseBeforeEffect);
        assert_eq!(pairs.len(), 6);
        // Brute-force reference order.
        let mut expected: Vec<(usize, usize, f64)> = Vec::new();
        for sp in 0..a.len() {
            for ep in (sp + 1)..a.len() {
                expected.push((sp, ep, a[sp] + b[ep]));
            }
        }
        expected.sort_by(|x, y| y.2.total_cmp(&x.2).then(x.0.cmp(&y.0)).then(x.1.cmp(&y.1)));
        let got: Vec<(usize, usize, f64)> =
            pairs.iter().map(|p| (p.start, p.end, p.score)).collect();
        assert_eq!(got, expected);
    }
}
