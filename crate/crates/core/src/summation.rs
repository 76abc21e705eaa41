//! Compensated (Neumaier) summation.

use std::iter::Sum;
use std::ops::AddAssign;

/// Running sum with a separate compensation term for lost low-order bits.
///
/// Accumulators merge with [`CompensatedSum::merge`], which folds the other
/// side's sum and compensation in as two ordinary additions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        CompensatedSum { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(mut self, other: CompensatedSum) -> CompensatedSum {
        self.add(other.sum);
        self.add(other.comp);
        self
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for CompensatedSum {
    #[inline]
    fn add_assign(&mut self, v: f64) {
        self.add(v);
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of an iterator of doubles.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().sum::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(v.iter().sum::<f64>(), 0.0);
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn harmonic_sum_matches_reverse_order() {
        let n = 1_000_000;
        let forward = compensated_sum((1..=n).map(|k| 1.0 / k as f64));
        let mut backward = 0.0;
        for k in (1..=n).rev() {
            backward += 1.0 / k as f64;
        }
        assert!((forward - backward).abs() <= 1e-13 * forward);
    }

    #[test]
    fn merge_equals_single_pass() {
        let xs: Vec<f64> = (1..=10_000).map(|k| (k as f64).sqrt().recip()).collect();
        let whole = compensated_sum(xs.iter().copied());
        let (a, b) = xs.split_at(3_333);
        let merged = a
            .iter()
            .copied()
            .sum::<CompensatedSum>()
            .merge(b.iter().copied().sum());
        assert!((merged.value() - whole).abs() <= 1e-14 * whole);
    }
}
