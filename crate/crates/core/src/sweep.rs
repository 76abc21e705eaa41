//! Map-reduce over the consecutive denominator pairs of a Farey window.
//!
//! The window is cut at Farey points into a fixed number of chunks, each
//! chunk is folded independently (in parallel), and the partial results are
//! merged left to right. The output depends on the chunk count, never on the
//! number of worker threads.

use rayon::prelude::*;

use crate::error::Result;
use crate::farey::{denominator_pairs, partition};
use crate::rational::RationalInterval;

/// Default number of chunks a window is cut into.
pub const DEFAULT_CHUNKS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub chunks: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            chunks: DEFAULT_CHUNKS,
        }
    }
}

impl SweepConfig {
    pub fn sequential() -> Self {
        SweepConfig { chunks: 1 }
    }
}

/// Folds `visit(acc, q_j, q_{j+1})` over every pair of the window.
pub fn fold_pairs<A, I, V, M>(
    order: u64,
    interval: RationalInterval,
    config: SweepConfig,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, u64, u64) + Sync,
    M: Fn(A, A) -> A,
{
    let parts = partition(order, interval, config.chunks)?;
    let partials: Vec<A> = parts
        .par_iter()
        .map(|part| {
            let mut acc = init();
            // Each part has Farey endpoints, so enumeration cannot fail here.
            if let Ok(pairs) = denominator_pairs(order, *part) {
                for (a, b) in pairs {
                    visit(&mut acc, a, b);
                }
            }
            acc
        })
        .collect();
    Ok(partials.into_iter().fold(init(), merge))
}

/// Number of consecutive pairs, `N_I(Q) - 1` (zero for an empty window).
pub fn pair_count(order: u64, interval: RationalInterval, config: SweepConfig) -> Result<u64> {
    fold_pairs(
        order,
        interval,
        config,
        || 0u64,
        |n, _, _| *n += 1,
        |a, b| a + b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::cardinality;

    #[test]
    fn pair_count_is_cardinality_minus_one() {
        for order in [1u64, 2, 5, 37, 300] {
            let n = cardinality(order, RationalInterval::unit()).unwrap();
            for chunks in [1, 3, 64] {
                let got = pair_count(order, RationalInterval::unit(), SweepConfig { chunks }).unwrap();
                assert_eq!(got, n - 1);
            }
        }
    }

    #[test]
    fn ordered_merge_preserves_sequence() {
        let i = RationalInterval::unit();
        let seq = fold_pairs(
            60,
            i,
            SweepConfig { chunks: 16 },
            Vec::new,
            |v: &mut Vec<(u64, u64)>, a, b| v.push((a, b)),
            |mut a, b| {
                a.extend(b);
                a
            },
        )
        .unwrap();
        let direct: Vec<(u64, u64)> = denominator_pairs(60, i).unwrap().collect();
        assert_eq!(seq, direct);
    }
}
