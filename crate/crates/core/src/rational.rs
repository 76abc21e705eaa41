//! Exact rationals in `[0, 1]` and rational intervals.
//!
//! Comparisons never go through floating point: two fractions with 64-bit
//! components are compared by cross-multiplying into 128 bits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced fraction `p/q` with `0 <= p <= q` and `q >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction {
    p: u64,
    q: u64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { p: 0, q: 1 };
    pub const ONE: Fraction = Fraction { p: 1, q: 1 };

    /// Builds `p/q`, rejecting anything that is not already reduced or lies
    /// outside `[0, 1]`.
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::usage(format!("zero denominator in {p}/{q}")));
        }
        if p > q {
            return Err(Error::usage(format!("{p}/{q} lies outside [0, 1]")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::usage(format!("{p}/{q} is not reduced")));
        }
        Ok(Fraction { p, q })
    }

    /// Builds `p/q` after dividing out the common factor.
    pub fn reduced(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::usage(format!("zero denominator in {p}/{q}")));
        }
        let g = p.gcd(&q);
        Fraction::new(p / g, q / g)
    }

    /// Caller guarantees the invariants (used on the enumeration hot path,
    /// where unimodularity implies reducedness).
    pub(crate) const fn new_unchecked(p: u64, q: u64) -> Self {
        Fraction { p, q }
    }

    #[inline]
    pub fn numer(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn denom(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `next.p * self.q - self.p * next.q`; equals 1 exactly when `self` and
    /// `next` are Farey neighbours (in that order).
    #[inline]
    pub fn determinant(&self, next: &Fraction) -> i128 {
        next.p as i128 * self.q as i128 - self.p as i128 * next.q as i128
    }

    #[inline]
    pub fn is_unimodular_with(&self, next: &Fraction) -> bool {
        self.determinant(next) == 1
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p as u128 * other.q as u128).cmp(&(other.p as u128 * self.q as u128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `p/q` (reduced on the way in) or a bare `0` / `1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad fraction `{s}`: {e}")))
        };
        match s.split_once('/') {
            Some((p, q)) => Fraction::reduced(parse(p)?, parse(q)?),
            None => Fraction::reduced(parse(s)?, 1),
        }
    }
}

impl TryFrom<String> for Fraction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

/// A closed interval `[alpha, beta]` with rational endpoints in `[0, 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RationalInterval {
    alpha: Fraction,
    beta: Fraction,
}

impl RationalInterval {
    pub fn new(alpha: Fraction, beta: Fraction) -> Result<Self> {
        if alpha >= beta {
            return Err(Error::usage(format!(
                "interval [{alpha}, {beta}] is empty or reversed"
            )));
        }
        Ok(RationalInterval { alpha, beta })
    }

    pub const fn unit() -> Self {
        RationalInterval {
            alpha: Fraction::ZERO,
            beta: Fraction::ONE,
        }
    }

    #[inline]
    pub fn alpha(&self) -> Fraction {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> Fraction {
        self.beta
    }

    /// `|I| = beta - alpha`, rounded once.
    pub fn length(&self) -> f64 {
        let num = self.alpha.determinant(&self.beta);
        let den = self.alpha.q as u128 * self.beta.q as u128;
        num as f64 / den as f64
    }

    #[inline]
    pub fn contains(&self, f: &Fraction) -> bool {
        self.alpha <= *f && *f <= self.beta
    }

    pub fn is_unit(&self) -> bool {
        self.alpha == Fraction::ZERO && self.beta == Fraction::ONE
    }
}

impl Default for RationalInterval {
    fn default() -> Self {
        RationalInterval::unit()
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.alpha, self.beta)
    }
}

impl FromStr for RationalInterval {
    type Err = Error;

    /// Parses `a/b:c/d`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("interval `{s}` must look like a/b:c/d")))?;
        RationalInterval::new(a.parse()?, b.parse()?)
    }
}

impl TryFrom<String> for RationalInterval {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RationalInterval> for String {
    fn from(i: RationalInterval) -> String {
        i.to_string()
    }
}

/// A strictly positive exact rational, used for the height cut-off `delta`.
///
/// Decimal and scientific inputs are read exactly (`0.02` is `1/50`, not the
/// nearest double).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PositiveRational {
    num: u128,
    den: u128,
}

impl PositiveRational {
    pub fn new(num: u128, den: u128) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::usage(format!("{num}/{den} is not strictly positive")));
        }
        let g = num.gcd(&den);
        Ok(PositiveRational {
            num: num / g,
            den: den / g,
        })
    }

    /// Interprets a double through its shortest round-trip decimal form.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::usage(format!("{v} is not a finite positive number")));
        }
        format!("{v:e}").parse()
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }
}

impl FromStr for PositiveRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::Parse(format!("bad positive number `{s}`: {why}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: u128 = n.trim().parse().map_err(|_| bad("numerator"))?;
            let d: u128 = d.trim().parse().map_err(|_| bad("denominator"))?;
            return PositiveRational::new(n, d);
        }

        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (
                &s[..i],
                s[i + 1..].parse::<i32>().map_err(|_| bad("exponent"))?,
            ),
            None => (s, 0),
        };
        let mantissa = mantissa.strip_prefix('+').unwrap_or(mantissa);
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad("no digits"));
        }
        let digits: String = [int_part, frac_part].concat();
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("not a decimal"));
        }
        let digits = digits.trim_start_matches('0');
        let mut num: u128 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|_| Error::range(format!("`{s}` has too many digits")))?
        };
        let scale = exp - frac_part.len() as i32;
        let mut den: u128 = 1;
        let pow10 = |k: u32| {
            10u128
                .checked_pow(k)
                .ok_or_else(|| Error::range(format!("`{s}` exceeds 128-bit exact range")))
        };
        if scale >= 0 {
            num = num
                .checked_mul(pow10(scale as u32)?)
                .ok_or_else(|| Error::range(format!("`{s}` exceeds 128-bit exact range")))?;
        } else {
            den = pow10(scale.unsigned_abs())?;
        }
        PositiveRational::new(num, den)
    }
}

/// Best rational approximation `p/q` of `v ∈ [0, 1]` with `q <= max_den`,
/// from the continued-fraction convergents and the last semiconvergent.
pub fn best_approximation(v: f64, max_den: u64) -> (u64, u64) {
    let v = v.clamp(0.0, 1.0);
    let max_den = max_den.max(1);
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut x = v;
    loop {
        let a = x.floor();
        if a > u64::MAX as f64 / 2.0 {
            break;
        }
        let a = a as u64;
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            let k = (max_den - q0) / q1.max(1);
            let (sp, sq) = (p0 + k * p1, q0 + k * q1);
            let err = |p: u64, q: u64| (v - p as f64 / q as f64).abs();
            if q1 == 0 || (sq > 0 && err(sp, sq) < err(p1, q1)) {
                return (sp, sq);
            }
            return (p1, q1);
        }
        let p2 = a * p1 + p0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = x - a as f64;
        if frac <= f64::EPSILON * x.max(1.0) {
            break;
        }
        x = 1.0 / frac;
    }
    (p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    #[test]
    fn fraction_rejects_bad_input() {
        assert!(Fraction::new(2, 4).is_err());
        assert!(Fraction::new(3, 2).is_err());
        assert!(Fraction::new(0, 0).is_err());
        assert_eq!(fr("2/4"), Fraction::new(1, 2).unwrap());
        assert_eq!(fr("1"), Fraction::ONE);
        assert!("x/3".parse::<Fraction>().is_err());
    }

    #[test]
    fn ordering_is_exact() {
        // Differ only in the 20th significant digit.
        let a = Fraction::new(u32::MAX as u64 - 1, u32::MAX as u64).unwrap();
        let b = Fraction::new(u32::MAX as u64 - 2, u32::MAX as u64 - 1).unwrap();
        assert!(b < a);
        assert!(fr("1/3") < fr("2/5"));
        assert_eq!(fr("0/1").cmp(&fr("0/1")), Ordering::Equal);
    }

    #[test]
    fn interval_parsing_and_length() {
        let i: RationalInterval = "1/4:1/2".parse().unwrap();
        assert_eq!(i.length(), 0.25);
        assert!(i.contains(&fr("1/3")));
        assert!(!i.contains(&fr("3/5")));
        assert!("1/2:1/4".parse::<RationalInterval>().is_err());
        assert!("1/2".parse::<RationalInterval>().is_err());
        assert_eq!(i.to_string(), "1/4:1/2");
    }

    #[test]
    fn serde_uses_string_forms() {
        let i = RationalInterval::new(fr("1/3"), fr("1/2")).unwrap();
        let j = serde_json::to_string(&i).unwrap();
        assert_eq!(j, "\"1/3:1/2\"");
        let back: RationalInterval = serde_json::from_str(&j).unwrap();
        assert_eq!(back, i);
    }

    #[test]
    fn best_approximation_examples() {
        assert_eq!(best_approximation(std::f64::consts::PI - 3.0, 1000), (16, 113));
        assert_eq!(best_approximation(0.2, 100), (1, 5));
        assert_eq!(best_approximation(0.0, 10), (0, 1));
        assert_eq!(best_approximation(1.0, 10), (1, 1));
        assert_eq!(best_approximation(1234.0 / 4567.0, 5000), (1234, 4567));
    }

    #[test]
    fn positive_rational_reads_decimals_exactly() {
        let d: PositiveRational = "0.02".parse().unwrap();
        assert_eq!((d.numer(), d.denom()), (1, 50));
        let d: PositiveRational = "5e-9".parse().unwrap();
        assert_eq!((d.numer(), d.denom()), (1, 200_000_000));
        let d: PositiveRational = "1/200000000".parse().unwrap();
        assert_eq!((d.numer(), d.denom()), (1, 200_000_000));
        let d: PositiveRational = "2.5E1".parse().unwrap();
        assert_eq!((d.numer(), d.denom()), (25, 1));
        let d = PositiveRational::from_f64(0.02).unwrap();
        assert_eq!((d.numer(), d.denom()), (1, 50));
        assert!("0".parse::<PositiveRational>().is_err());
        assert!("-1".parse::<PositiveRational>().is_err());
        assert!("1e-60".parse::<PositiveRational>().is_err());
    }
}
