//! Totient sums, the coprime-inverse window count, and Abel summation.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureConfig};
use crate::rational::RationalInterval;
use crate::summation::CompensatedSum;

/// Largest sieve the library will allocate.
pub const SIEVE_LIMIT: u64 = 100_000_000;

/// `6/π²`.
pub const SIX_OVER_PI2: f64 = 6.0 / (PI * PI);

/// A computed sum next to its predicted main term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    /// `Q`, `q` or the upper limit `b`, depending on the sum.
    pub parameter: f64,
    pub computed: f64,
    pub predicted: f64,
    /// `computed - predicted`.
    pub residual: f64,
}

impl SumReport {
    pub fn new(parameter: f64, computed: f64, predicted: f64) -> Self {
        SumReport {
            parameter,
            computed,
            predicted,
            residual: computed - predicted,
        }
    }
}

/// `φ(0..=limit)` by a linear sieve; entry 0 is 0.
pub fn totient_sieve(limit: u64) -> Result<Vec<u32>> {
    if limit > SIEVE_LIMIT {
        return Err(Error::range(format!(
            "sieve limit {limit} exceeds {SIEVE_LIMIT}"
        )));
    }
    let n = limit as usize;
    let mut phi = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    if n >= 1 {
        phi[1] = 1;
    }
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = i as u32 - 1;
            primes.push(i as u32);
        }
        for &p in &primes {
            let m = i * p as usize;
            if m > n {
                break;
            }
            if i % p as usize == 0 {
                phi[m] = phi[i] * p;
                break;
            }
            phi[m] = phi[i] * (p - 1);
        }
    }
    Ok(phi)
}

/// `Σ_{q ≤ Q} φ(q)/q²` against `(6/π²) log Q`.
pub fn totient_ratio_sum(order: u64) -> Result<SumReport> {
    if order == 0 {
        return Err(Error::usage("order must be at least 1"));
    }
    let phi = totient_sieve(order)?;
    let computed = (1..=order as usize)
        .map(|q| phi[q] as f64 / (q as f64 * q as f64))
        .sum::<CompensatedSum>()
        .value();
    Ok(SumReport::new(
        order as f64,
        computed,
        SIX_OVER_PI2 * (order as f64).ln(),
    ))
}

/// Inverse of `a` modulo `q`, normalized to `[1, q]`, if `gcd(a, q) = 1`.
pub fn inverse_mod(a: u64, q: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(q as i128));
    if e.gcd != 1 {
        return None;
    }
    let r = e.x.rem_euclid(q as i128) as u64;
    Some(if r == 0 { q } else { r })
}

/// `A_q(t)`: the number of `q' ≤ t` coprime to `q` whose inverse modulo `q`
/// (taken in `[1, q]`) lies in `[qα, qβ]`, against `(φ(q)/q)(t - 1)|I|`.
pub fn inverse_window_count(q: u64, t: f64, interval: RationalInterval) -> Result<SumReport> {
    if q == 0 {
        return Err(Error::usage("modulus must be positive"));
    }
    if !(t >= 1.0 && t <= q as f64) {
        return Err(Error::usage(format!("bound t = {t} must lie in [1, {q}]")));
    }
    let (a, b) = (interval.alpha(), interval.beta());
    let inside = |v: u64| {
        let v = v as u128;
        v * a.denom() as u128 >= q as u128 * a.numer() as u128
            && v * b.denom() as u128 <= q as u128 * b.numer() as u128
    };
    let top = t.floor() as u64;
    let mut count = 0u64;
    let mut units = 0u64;
    for qp in 1..=q {
        if let Some(inv) = inverse_mod(qp, q) {
            units += 1;
            if qp <= top && inside(inv) {
                count += 1;
            }
        }
    }
    let predicted = units as f64 / q as f64 * (t - 1.0) * interval.length();
    Ok(SumReport::new(q as f64, count as f64, predicted))
}

/// `Σ_{a < k ≤ b} (φ(k)/k) f(k)` against `(6/π²) ∫_a^b f`.
pub fn totient_weighted_sum<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    config: QuadratureConfig,
) -> Result<SumReport> {
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::usage(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let hi = b.floor() as u64;
    let phi = totient_sieve(hi)?;
    let lo = a.floor() as u64 + 1;
    let computed = (lo..=hi)
        .map(|k| phi[k as usize] as f64 / k as f64 * f(k as f64))
        .sum::<CompensatedSum>()
        .value();
    let integral = integrate(&f, a, b, config)?;
    Ok(SumReport::new(b, computed, SIX_OVER_PI2 * integral.value))
}

/// `A(y) f(y) - A(x) f(x) - ∫_x^y A(t) f'(t) dt` with `A(t) = Σ_{1 ≤ n ≤ t} a(n)`,
/// which equals `Σ_{x < n ≤ y} a(n) f(n)`.
///
/// `A` is constant on each `[n, n + 1)`, so the integral is taken one unit
/// segment at a time; segments with `A = 0` are skipped.
pub fn abel_sum<A, F, D>(
    weights: A,
    f: F,
    derivative: D,
    x: f64,
    y: f64,
    config: QuadratureConfig,
) -> Result<f64>
where
    A: Fn(u64) -> f64,
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(x < y) || !x.is_finite() || !y.is_finite() {
        return Err(Error::usage(format!("need x < y, got x = {x}, y = {y}")));
    }
    let partial = |t: f64| -> CompensatedSum {
        let top = if t < 1.0 { 0 } else { t.floor() as u64 };
        (1..=top).map(&weights).sum()
    };
    let a_x = partial(x).value();
    let mut running = partial(x);
    let mut integral = CompensatedSum::new();
    let mut left = x;
    while left < y {
        let right = (left.floor() + 1.0).min(y);
        let level = running.value();
        if level != 0.0 {
            let r = integrate(&derivative, left, right, config)?;
            integral.add(level * r.value);
        }
        if right.fract() == 0.0 && right >= 1.0 {
            running.add(weights(right as u64));
        }
        left = right;
    }
    let a_y = partial(y).value();
    let mut out = CompensatedSum::new();
    // A = 0 contributes nothing even where f is singular
    if a_y != 0.0 {
        out.add(a_y * f(y));
    }
    if a_x != 0.0 {
        out.add(-a_x * f(x));
    }
    out.add(-integral.value());
    Ok(out.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::cardinality;

    #[test]
    fn sieve_values() {
        let phi = totient_sieve(100).unwrap();
        assert_eq!(&phi[1..=5], &[1, 1, 2, 2, 4]);
        assert_eq!(phi[97], 96);
        let s: u64 = phi.iter().map(|&v| v as u64).sum();
        assert_eq!(s, 3044);
        assert_eq!(cardinality(100, RationalInterval::unit()).unwrap(), 1 + s);
        assert!(totient_sieve(SIEVE_LIMIT + 1).is_err());
    }

    #[test]
    fn sieve_matches_gcd_count() {
        let phi = totient_sieve(300).unwrap();
        for q in 1..=300u64 {
            let direct = (1..=q).filter(|k| k.gcd(&q) == 1).count() as u32;
            assert_eq!(phi[q as usize], direct, "q={q}");
        }
    }

    #[test]
    fn ratio_sum_examples() {
        assert_eq!(totient_ratio_sum(1).unwrap().computed, 1.0);
        let r = totient_ratio_sum(5).unwrap();
        let hand = 1.0 + 0.25 + 2.0 / 9.0 + 0.125 + 4.0 / 25.0;
        assert!((r.computed - hand).abs() < 1e-15);
        assert_eq!(r.residual, r.computed - r.predicted);
        let a = totient_ratio_sum(10_000).unwrap().residual;
        let b = totient_ratio_sum(100_000).unwrap().residual;
        assert!((a - b).abs() <= 0.005, "{a} {b}");
    }

    #[test]
    fn inverse_count_examples() {
        let unit = RationalInterval::unit();
        let r = inverse_window_count(5, 5.0, unit).unwrap();
        assert_eq!(r.computed, 4.0);
        assert!((r.predicted - 3.2).abs() < 1e-15);
        assert!((r.residual - 0.8).abs() < 1e-15);
        assert_eq!(inverse_window_count(2, 1.0, unit).unwrap().computed, 1.0);
        let half: RationalInterval = "0/1:1/2".parse().unwrap();
        assert_eq!(inverse_window_count(101, 101.0, half).unwrap().computed, 50.0);
        assert!(inverse_window_count(0, 1.0, unit).is_err());
        assert_eq!(inverse_mod(3, 7), Some(5));
        assert_eq!(inverse_mod(1, 1), Some(1));
        assert_eq!(inverse_mod(4, 6), None);
    }

    #[test]
    fn full_window_is_plain_coprime_count() {
        let unit = RationalInterval::unit();
        for q in [1u64, 2, 12, 97, 360] {
            for t in [1.0, (q as f64 / 2.0).max(1.0), q as f64] {
                let direct = (1..=t as u64).filter(|k| k.gcd(&q) == 1).count() as f64;
                assert_eq!(inverse_window_count(q, t, unit).unwrap().computed, direct);
            }
        }
    }

    #[test]
    fn kloosterman_residual_growth() {
        let windows: Vec<RationalInterval> = ["0/1:1/2", "1/3:3/4", "2/7:3/10"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let mut worst: f64 = 0.0;
        for q in (2..=2000u64).step_by(7) {
            for w in &windows {
                let r = inverse_window_count(q, q as f64, *w).unwrap();
                worst = worst.max(r.residual.abs() / (q as f64).powf(0.6));
            }
        }
        assert!(worst <= 3.0, "max |residual| / q^0.6 = {worst}");
    }

    #[test]
    fn weighted_sum_examples() {
        let cfg = QuadratureConfig::default();
        let r = totient_weighted_sum(|_| 0.0, 0.5, 100.0, cfg).unwrap();
        assert_eq!((r.computed, r.predicted), (0.0, 0.0));
        let mut ratios = Vec::new();
        for q in [1_000.0f64, 10_000.0] {
            let r = totient_weighted_sum(|_| 1.0, 0.5, q, cfg).unwrap();
            ratios.push(r.residual.abs() / q.ln());
        }
        assert!(ratios.iter().all(|&c| c < 1.0), "{ratios:?}");
        let mut cs = Vec::new();
        for q in [10_000.0f64, 40_000.0] {
            let r = totient_weighted_sum(|x| x, q / 2.0, q, cfg).unwrap();
            cs.push(r.residual.abs() / (q * q.ln()));
        }
        assert!(cs.iter().all(|&c| c < 1.0), "{cs:?}");
        let r = totient_weighted_sum(|x| 1.0 / x, 1.0, 5000.0, cfg).unwrap();
        assert!(r.residual.abs() < 1.0);
    }

    #[test]
    fn abel_matches_direct_sums() {
        let cfg = QuadratureConfig::default();
        let v = abel_sum(|_| 1.0, |t| t, |_| 1.0, 0.0, 10.0, cfg).unwrap();
        assert!((v - 55.0).abs() < 1e-12);
        assert_eq!(abel_sum(|_| 0.0, |t| t, |_| 1.0, 0.0, 10.0, cfg).unwrap(), 0.0);

        let phi = totient_sieve(100).unwrap();
        let v = abel_sum(
            |n| phi[n as usize] as f64,
            |t| 1.0 / (t * t),
            |t| -2.0 / (t * t * t),
            0.0,
            100.0,
            cfg,
        )
        .unwrap();
        let direct = totient_ratio_sum(100).unwrap().computed;
        assert!((v - direct).abs() <= 1e-9 * direct, "{v} {direct}");

        // non-integer endpoints
        let v = abel_sum(|n| n as f64, |t| t.sqrt(), |t| 0.5 / t.sqrt(), 2.5, 17.25, cfg).unwrap();
        let direct: f64 = (3..=17).map(|n| n as f64 * (n as f64).sqrt()).sum();
        assert!((v - direct).abs() <= 1e-9 * direct, "{v} {direct}");
    }
}
