//! Farey fractions of order `Q` restricted to a rational interval.
//!
//! Enumeration is driven by the neighbour recurrence: if `a/b < c/d` are
//! consecutive in `F(Q)` then the next element is
//! `(k c - a) / (k d - b)` with `k = floor((Q + b) / d)`. All arithmetic is in
//! 64-bit integers, which is exact as long as `Q <= 2^31`.

use crate::error::{Error, Result};
use crate::rational::{Fraction, PositiveRational, RationalInterval};

/// Largest supported order. Keeps `k * q <= Q + q' <= 2^32` inside `u64`.
pub const MAX_ORDER: u64 = 1 << 31;

pub(crate) fn check_order(order: u64) -> Result<()> {
    if order == 0 {
        return Err(Error::usage("Farey order must be at least 1"));
    }
    if order > MAX_ORDER {
        return Err(Error::range(format!(
            "order {order} exceeds the supported maximum 2^31"
        )));
    }
    Ok(())
}

/// `Q = floor((2 delta)^(-1/2))`: the order whose Ford circles are exactly
/// those with centres at height `>= delta`.
///
/// The floor is taken in integer arithmetic on the exact rational, so
/// boundary cases such as `delta = 1/50` land on `Q = 5` rather than 4.
pub fn order_from_delta(delta: PositiveRational) -> Result<u64> {
    // Q^2 <= den / (2 num)  <=>  Q^2 <= floor(den / (2 num)).
    let bound = match delta.numer().checked_mul(2) {
        Some(twice) => delta.denom() / twice,
        None => 0,
    };
    let order = bound.isqrt();
    if order == 0 {
        return Err(Error::usage(
            "delta > 1/2: no Ford circle centre lies at or above that height",
        ));
    }
    if order > MAX_ORDER as u128 {
        return Err(Error::range(format!(
            "delta {}/{} gives an order above 2^31",
            delta.numer(),
            delta.denom()
        )));
    }
    Ok(order as u64)
}

/// Neighbour recurrence without checks.
#[inline(always)]
pub(crate) fn step(order: u64, prev: Fraction, curr: Fraction) -> Fraction {
    let k = (order + prev.denom()) / curr.denom();
    Fraction::new_unchecked(
        k * curr.numer() - prev.numer(),
        k * curr.denom() - prev.denom(),
    )
}

/// Successor of `curr` in `F(Q)` given its predecessor `prev`.
///
/// Returns [`Error::EndOfSequence`] when `curr` is `1/1`.
pub fn farey_next(order: u64, prev: Fraction, curr: Fraction) -> Result<Fraction> {
    check_order(order)?;
    if prev.denom() > order || curr.denom() > order {
        return Err(Error::contract(format!(
            "{prev} or {curr} has a denominator above the order {order}"
        )));
    }
    if !prev.is_unimodular_with(&curr) {
        return Err(Error::contract(format!(
            "{prev} and {curr} are not Farey neighbours"
        )));
    }
    if curr == Fraction::ONE {
        return Err(Error::EndOfSequence);
    }
    Ok(step(order, prev, curr))
}

/// Finds the consecutive pair `(a, b)` of `F(Q)` with `a < alpha <= b`.
///
/// For `alpha = 0` there is no element below, and the pair `(0/1, 1/Q)` is
/// returned instead; in that case `0/1` itself is the first element.
///
/// The search is a Stern–Brocot descent in which each run of equal moves is
/// taken in one step, so the cost is linear in the continued-fraction length
/// of `alpha`.
pub fn locate_start(alpha: Fraction, order: u64) -> Result<(Fraction, Fraction)> {
    check_order(order)?;
    if alpha == Fraction::ONE {
        return Err(Error::usage("locate_start needs alpha < 1"));
    }
    if alpha == Fraction::ZERO {
        return Ok((Fraction::ZERO, Fraction::new_unchecked(1, order)));
    }

    let a = alpha.numer() as i128;
    let b = alpha.denom() as i128;
    let q = order as i128;
    // Invariant: l < alpha <= r, l and r unimodular, denominators <= Q.
    let (mut lp, mut lq) = (0i128, 1i128);
    let (mut rp, mut rq) = (1i128, 1i128);
    loop {
        let (mp, mq) = (lp + rp, lq + rq);
        if mq > q {
            break;
        }
        if mp * b < a * mq {
            // mediant below alpha: push l towards r as far as possible
            let gap_r = rp * b - a * rq; // >= 0
            let gap_l = a * lq - lp * b; // > 0
            let by_order = (q - lq) / rq;
            let k = if gap_r == 0 {
                by_order
            } else {
                by_order.min((gap_l - 1) / gap_r)
            };
            lp += k * rp;
            lq += k * rq;
        } else {
            let gap_r = rp * b - a * rq;
            let gap_l = a * lq - lp * b;
            let k = ((q - rq) / lq).min(gap_r / gap_l);
            rp += k * lp;
            rq += k * lq;
        }
    }
    Ok((
        Fraction::new_unchecked(lp as u64, lq as u64),
        Fraction::new_unchecked(rp as u64, rq as u64),
    ))
}

/// Last element of `F(Q)` that is `<= beta`.
pub(crate) fn last_at_most(beta: Fraction, order: u64) -> Result<Fraction> {
    if beta == Fraction::ONE {
        return Ok(Fraction::ONE);
    }
    let (a, b) = locate_start(beta, order)?;
    Ok(if b == beta { b } else { a })
}

/// Streaming iterator over `F(Q) ∩ [alpha, beta]` in increasing order.
#[derive(Clone, Debug)]
pub struct FareyIter {
    order: u64,
    beta: Fraction,
    head: Option<Fraction>,
    next: Option<Fraction>,
}

impl Iterator for FareyIter {
    type Item = Fraction;

    #[inline]
    fn next(&mut self) -> Option<Fraction> {
        let head = self.head.take()?;
        if head > self.beta {
            return None;
        }
        if let Some(next) = self.next {
            self.head = Some(next);
            self.next = (next != Fraction::ONE).then(|| step(self.order, head, next));
        }
        Some(head)
    }
}

/// Elements of `F(Q)` in the closed interval, endpoints included when they
/// are themselves of order at most `Q`.
pub fn enumerate(order: u64, interval: RationalInterval) -> Result<FareyIter> {
    check_order(order)?;
    let alpha = interval.alpha();
    let (head, next) = if alpha == Fraction::ZERO {
        (Fraction::ZERO, Some(Fraction::new_unchecked(1, order)))
    } else {
        let (a, b) = locate_start(alpha, order)?;
        let next = (b != Fraction::ONE).then(|| step(order, a, b));
        (b, next)
    };
    Ok(FareyIter {
        order,
        beta: interval.beta(),
        head: Some(head),
        next,
    })
}

/// `N_I(Q)`, the number of Farey fractions of order `Q` in `I`.
pub fn cardinality(order: u64, interval: RationalInterval) -> Result<u64> {
    Ok(enumerate(order, interval)?.count() as u64)
}

/// Consecutive denominator pairs `(q_j, q_{j+1})` for `j = 1 .. N - 1`.
#[derive(Clone, Debug)]
pub struct DenominatorPairs {
    inner: FareyIter,
    prev: Option<u64>,
}

impl Iterator for DenominatorPairs {
    type Item = (u64, u64);

    #[inline]
    fn next(&mut self) -> Option<(u64, u64)> {
        let prev = match self.prev {
            Some(p) => p,
            None => self.inner.next()?.denom(),
        };
        let curr = self.inner.next()?.denom();
        self.prev = Some(curr);
        Some((prev, curr))
    }
}

pub fn denominator_pairs(order: u64, interval: RationalInterval) -> Result<DenominatorPairs> {
    Ok(DenominatorPairs {
        inner: enumerate(order, interval)?,
        prev: None,
    })
}

/// Splits the window into at most `chunks` sub-intervals whose endpoints are
/// Farey fractions of order `Q`, so that the pair sequences of the pieces
/// concatenate to the pair sequence of the whole window.
///
/// The cut points depend only on `(Q, interval, chunks)`. Returns an empty
/// list when the window holds fewer than two Farey fractions.
pub fn partition(
    order: u64,
    interval: RationalInterval,
    chunks: usize,
) -> Result<Vec<RationalInterval>> {
    check_order(order)?;
    let first = match enumerate(order, interval)?.next() {
        Some(f) => f,
        None => return Ok(Vec::new()),
    };
    let last = last_at_most(interval.beta(), order)?;
    if last <= first {
        return Ok(Vec::new());
    }

    let lo = interval.alpha().to_f64();
    let width = interval.beta().to_f64() - lo;
    let mut cuts = vec![first];
    for i in 1..chunks.max(1) {
        let v = lo + width * i as f64 / chunks as f64;
        let p = (v * order as f64).round().clamp(0.0, order as f64) as u64;
        let cut = Fraction::reduced(p, order)?;
        if first < cut && cut < last && cuts.last() != Some(&cut) {
            cuts.push(cut);
        }
    }
    cuts.push(last);
    cuts.windows(2)
        .map(|w| RationalInterval::new(w[0], w[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    fn brute_farey(order: u64) -> Vec<Fraction> {
        let mut v: Vec<Fraction> = (1..=order)
            .flat_map(|q| (0..=q).filter_map(move |p| Fraction::new(p, q).ok()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn order_from_delta_examples() {
        let q = |s: &str| order_from_delta(s.parse().unwrap()).unwrap();
        assert_eq!(q("1/50"), 5);
        assert_eq!(q("0.02"), 5);
        assert_eq!(q("0.02000001"), 4);
        assert_eq!(q("1/200000000"), 10_000);
        assert_eq!(q("0.5"), 1);
        assert!(order_from_delta("0.6".parse().unwrap()).is_err());
        assert!(matches!(
            order_from_delta("1e-30".parse().unwrap()),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn farey_next_examples() {
        assert_eq!(farey_next(5, fr("0/1"), fr("1/5")).unwrap(), fr("1/4"));
        assert_eq!(farey_next(5, fr("2/5"), fr("1/2")).unwrap(), fr("3/5"));
        assert_eq!(farey_next(2, fr("0/1"), fr("1/2")).unwrap(), fr("1/1"));
        assert!(matches!(
            farey_next(2, fr("1/2"), fr("1/1")),
            Err(Error::EndOfSequence)
        ));
        assert!(matches!(
            farey_next(5, fr("0/1"), fr("2/5")),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            farey_next(3, fr("0/1"), fr("1/4")),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn locate_start_examples() {
        assert_eq!(locate_start(fr("0/1"), 5).unwrap(), (fr("0/1"), fr("1/5")));
        assert_eq!(locate_start(fr("1/2"), 5).unwrap(), (fr("2/5"), fr("1/2")));
        assert_eq!(locate_start(fr("3/7"), 5).unwrap(), (fr("2/5"), fr("1/2")));
        assert!(locate_start(fr("1/1"), 5).is_err());
    }

    #[test]
    fn locate_start_matches_scan() {
        for order in 1..=30 {
            let all = brute_farey(order);
            for den in 1..=40u64 {
                for num in 0..den {
                    let Ok(alpha) = Fraction::new(num, den) else { continue };
                    let got = locate_start(alpha, order).unwrap();
                    if alpha == Fraction::ZERO {
                        assert_eq!(got, (all[0], all[1]));
                        continue;
                    }
                    let idx = all.iter().position(|f| *f >= alpha).unwrap();
                    assert_eq!(got, (all[idx - 1], all[idx]), "alpha={alpha} Q={order}");
                }
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let f5: Vec<String> = enumerate(5, RationalInterval::unit())
            .unwrap()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(
            f5,
            ["0/1", "1/5", "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "3/4", "4/5", "1/1"]
        );
        let f1: Vec<Fraction> = enumerate(1, RationalInterval::unit()).unwrap().collect();
        assert_eq!(f1, [Fraction::ZERO, Fraction::ONE]);
        assert_eq!(cardinality(100, RationalInterval::unit()).unwrap(), 3045);
    }

    #[test]
    fn narrow_interval_can_be_empty() {
        let i = RationalInterval::new(fr("3/7"), fr("4/9")).unwrap();
        assert_eq!(cardinality(3, i).unwrap(), 0);
        assert_eq!(denominator_pairs(3, i).unwrap().count(), 0);
        assert!(partition(3, i, 4).unwrap().is_empty());
    }

    #[test]
    fn sub_interval_equals_filtered_full_enumeration() {
        let all = brute_farey(40);
        for (a, b) in [("0/1", "1/2"), ("1/3", "2/3"), ("3/7", "5/8"), ("2/41", "40/41")] {
            let i = RationalInterval::new(fr(a), fr(b)).unwrap();
            let got: Vec<Fraction> = enumerate(40, i).unwrap().collect();
            let want: Vec<Fraction> = all.iter().copied().filter(|f| i.contains(f)).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn partition_concatenates_to_full_pair_sequence() {
        let i = RationalInterval::new(fr("1/7"), fr("6/7")).unwrap();
        let full: Vec<(u64, u64)> = denominator_pairs(200, i).unwrap().collect();
        for chunks in [1, 2, 7, 64, 1000] {
            let parts = partition(200, i, chunks).unwrap();
            assert!(parts.len() <= chunks.max(1));
            let joined: Vec<(u64, u64)> = parts
                .iter()
                .flat_map(|p| denominator_pairs(200, *p).unwrap())
                .collect();
            assert_eq!(joined, full, "chunks={chunks}");
        }
    }

    #[test]
    fn large_order_is_rejected() {
        assert!(matches!(
            enumerate(MAX_ORDER + 1, RationalInterval::unit()),
            Err(Error::Range(_))
        ));
        assert!(enumerate(0, RationalInterval::unit()).is_err());
    }

    #[test]
    fn enumeration_at_max_order_stays_exact() {
        let (a, b) = locate_start(fr("1/3"), MAX_ORDER).unwrap();
        assert!(a.is_unimodular_with(&b));
        let c = farey_next(MAX_ORDER, a, b).unwrap();
        assert!(b.is_unimodular_with(&c));
        assert!(b.denom() + c.denom() > MAX_ORDER);
    }
}
