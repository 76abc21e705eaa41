//! Geometric statistics of consecutive Ford circles.
//!
//! A consecutive pair of Farey denominators `(q_j, q_{j+1})` at order `Q` is
//! normalized to the point `(x, y) = (q_j / Q, q_{j+1} / Q)` of
//!
//! ```text
//! Ω = { (x, y) ∈ (0, 1]² : x + y > 1 }
//! ```
//!
//! and every statistic is a function on `Ω`. The exact per-pair quantities on
//! the circles themselves live in [`raw_pair_quantities`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Fraction;

/// The statistics on `Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatisticKind {
    /// `1/(2x²) + 1/(2y²)`: `Q²` times the distance between the centres.
    #[serde(rename = "euclid")]
    EuclideanDistance,
    /// `(x/y - y/x) / 2`: slope of the segment joining the centres.
    Slope,
    /// `2xy / |y² - x²|`: tangent of the angle at the first centre.
    #[serde(rename = "euc-angle")]
    EuclideanAngleTan,
    /// `1/(4x³y) + 1/(4xy³)`: `Q⁴` times the area of the trapezium under the
    /// segment.
    #[serde(rename = "area")]
    EuclideanArea,
    /// `(x/y + y/x) / 2`: `sinh` of half the hyperbolic distance.
    #[serde(rename = "hyp")]
    HyperbolicDistance,
    /// `4x⁵/y³ - 4xy + 16x³/y`: the hyperbolic angle statistic.
    #[serde(rename = "hyp-angle")]
    HyperbolicAngleTan,
    /// `2 arctan(min(x, y) / max(x, y))`, the Euclidean angle in radians.
    #[serde(rename = "euc-angle-rad")]
    EuclideanAngleRadians,
}

impl StatisticKind {
    pub const ALL: [StatisticKind; 7] = [
        StatisticKind::EuclideanDistance,
        StatisticKind::Slope,
        StatisticKind::EuclideanAngleTan,
        StatisticKind::EuclideanArea,
        StatisticKind::HyperbolicDistance,
        StatisticKind::HyperbolicAngleTan,
        StatisticKind::EuclideanAngleRadians,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatisticKind::EuclideanDistance => "euclid",
            StatisticKind::Slope => "slope",
            StatisticKind::EuclideanAngleTan => "euc-angle",
            StatisticKind::EuclideanArea => "area",
            StatisticKind::HyperbolicDistance => "hyp",
            StatisticKind::HyperbolicAngleTan => "hyp-angle",
            StatisticKind::EuclideanAngleRadians => "euc-angle-rad",
        }
    }

    /// Unchecked evaluation at `(x, y)`.
    ///
    /// `EuclideanAngleTan` returns `+inf` on the diagonal, where the angle is
    /// a right angle.
    #[inline]
    pub fn value(self, x: f64, y: f64) -> f64 {
        match self {
            StatisticKind::EuclideanDistance => 0.5 / (x * x) + 0.5 / (y * y),
            StatisticKind::Slope => 0.5 * (x / y - y / x),
            StatisticKind::EuclideanAngleTan => 2.0 * x * y / ((y - x) * (y + x)).abs(),
            StatisticKind::EuclideanArea => {
                let xy = x * y;
                0.25 / (xy * x * x) + 0.25 / (xy * y * y)
            }
            StatisticKind::HyperbolicDistance => 0.5 * (x / y + y / x),
            StatisticKind::HyperbolicAngleTan => {
                let x2 = x * x;
                4.0 * x2 * x2 * x / (y * y * y) - 4.0 * x * y + 16.0 * x2 * x / y
            }
            StatisticKind::EuclideanAngleRadians => {
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                2.0 * (lo / hi).atan()
            }
        }
    }

    /// Whether `F >= 1` everywhere on `Ω`.
    pub fn is_at_least_one(self) -> bool {
        matches!(
            self,
            StatisticKind::EuclideanDistance | StatisticKind::HyperbolicDistance
        )
    }

    /// Whether `∫ F dm` over `Ω` is finite.
    ///
    /// The distance and area statistics blow up like `1/x²` and `1/x³` at the
    /// edge `x → 0`; the tangent statistics like `1/|x - y|` on the diagonal
    /// and `1/y³` at the corner `(1, 0)`.
    pub fn has_finite_mean(self) -> bool {
        matches!(
            self,
            StatisticKind::Slope
                | StatisticKind::HyperbolicDistance
                | StatisticKind::EuclideanAngleRadians
        )
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatisticKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = StatisticKind::ALL.iter().map(|k| k.name()).collect();
                Error::Parse(format!("unknown statistic `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// The integer data behind a normalized pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactPair {
    pub q_j: u64,
    pub q_next: u64,
    pub order: u64,
}

/// A point `(x, y)` of `Ω`, optionally remembering the exact denominators it
/// came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPair {
    x: f64,
    y: f64,
    exact: Option<ExactPair>,
}

impl NormalizedPair {
    /// A floating-point point of `Ω`.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x > 0.0 && x <= 1.0 && y > 0.0 && y <= 1.0 && x + y > 1.0) {
            return Err(Error::contract(format!("({x}, {y}) is not in Ω")));
        }
        Ok(NormalizedPair { x, y, exact: None })
    }

    pub(crate) fn from_exact_unchecked(q_j: u64, q_next: u64, order: u64) -> Self {
        let qf = order as f64;
        NormalizedPair {
            x: q_j as f64 / qf,
            y: q_next as f64 / qf,
            exact: Some(ExactPair { q_j, q_next, order }),
        }
    }

    pub(crate) fn from_float_unchecked(x: f64, y: f64) -> Self {
        NormalizedPair { x, y, exact: None }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn exact(&self) -> Option<ExactPair> {
        self.exact
    }
}

/// `(q_j / Q, q_{j+1} / Q)`, checking that the denominators can be
/// consecutive at order `Q`.
pub fn normalize(q_j: u64, q_next: u64, order: u64) -> Result<NormalizedPair> {
    if q_j == 0 || q_next == 0 || q_j > order || q_next > order {
        return Err(Error::contract(format!(
            "denominators ({q_j}, {q_next}) must lie in [1, {order}]"
        )));
    }
    if q_j + q_next <= order {
        return Err(Error::contract(format!(
            "q_j + q_(j+1) = {} does not exceed the order {order}",
            q_j + q_next
        )));
    }
    Ok(NormalizedPair::from_exact_unchecked(q_j, q_next, order))
}

/// Checked evaluation of a statistic on a pair.
pub fn evaluate(kind: StatisticKind, pair: &NormalizedPair) -> Result<f64> {
    if kind == StatisticKind::EuclideanAngleTan {
        let on_diagonal = match pair.exact {
            Some(e) => e.q_j == e.q_next,
            None => pair.x == pair.y,
        };
        if on_diagonal {
            return Err(Error::RightAngle);
        }
    }
    Ok(kind.value(pair.x, pair.y))
}

/// A point of the upper half-plane (or its boundary).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Hyperbolic distance in the upper half-plane metric `|dz| / y`.
///
/// Uses `sinh(ρ/2) = |z₁ - z₂| / (2 √(y₁ y₂))`, which is the same identity
/// as `cosh ρ = 1 + |z₁ - z₂|² / (2 y₁ y₂)` but stays accurate for nearby
/// points.
pub fn hyperbolic_distance_metric(o1: Point, o2: Point) -> Result<f64> {
    if !(o1.y > 0.0 && o2.y > 0.0) {
        return Err(Error::contract("points must lie strictly above the real axis"));
    }
    let chord = (o1.x - o2.x).hypot(o1.y - o2.y);
    Ok(2.0 * (chord / (2.0 * (o1.y * o2.y).sqrt())).asinh())
}

/// Foot `c` on the real axis of the hyperbolic geodesic through two points:
/// the circle centred at `(c, 0)` through both.
pub fn hyperbolic_geodesic_center(o1: Point, o2: Point) -> Result<f64> {
    if o1.x == o2.x {
        return Err(Error::contract(
            "points share an x coordinate: the geodesic is a vertical line",
        ));
    }
    Ok((o2.x * o2.x + o2.y * o2.y - o1.x * o1.x - o1.y * o1.y) / (2.0 * (o2.x - o1.x)))
}

/// The Ford circle tangent to the real axis at `p/q`, radius `1/(2q²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FordCircle {
    pub tangency: Fraction,
}

fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl FordCircle {
    pub fn new(tangency: Fraction) -> Self {
        FordCircle { tangency }
    }

    pub fn radius(&self) -> BigRational {
        let q = self.tangency.denom();
        ratio(1, 2 * BigInt::from(q) * BigInt::from(q))
    }

    /// Exact centre `(p/q, 1/(2q²))`.
    pub fn center(&self) -> (BigRational, BigRational) {
        (
            ratio(self.tangency.numer(), self.tangency.denom()),
            self.radius(),
        )
    }

    pub fn center_f64(&self) -> Point {
        let q = self.tangency.denom() as f64;
        Point::new(self.tangency.to_f64(), 0.5 / (q * q))
    }

    pub fn radius_f64(&self) -> f64 {
        let q = self.tangency.denom() as f64;
        0.5 / (q * q)
    }

    /// Exact external tangency: `(Δx)² + (r₁ - r₂)² = (r₁ + r₂)²`.
    pub fn is_tangent_to(&self, other: &FordCircle) -> bool {
        let (x1, r1) = self.center();
        let (x2, r2) = other.center();
        let dx = x2 - x1;
        let dr = &r1 - &r2;
        let sr = r1 + r2;
        &dx * &dx + &dr * &dr == &sr * &sr
    }
}

/// Exact geometric quantities of two tangent Ford circles `C_j`, `C_{j+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RawPairQuantities {
    /// Distance between the centres, `1/(2q²) + 1/(2q'²)`.
    pub d: BigRational,
    /// Slope of the segment from `O_j` to `O_{j+1}`.
    pub slope: BigRational,
    /// `2qq' / |q'² - q²|`; `None` when the angle is right (`q = q'`).
    pub tan_theta: Option<BigRational>,
    /// Area of the trapezium under the segment, `1/(4q³q') + 1/(4qq'³)`.
    pub area: BigRational,
    /// `q/(2q') + q'/(2q)`.
    pub sinh_half_rho: BigRational,
    /// `4q⁵/q'³ - 4qq' + 16q³/q'`.
    pub tan_alpha: BigRational,
}

pub fn raw_pair_quantities(cj: &FordCircle, cnext: &FordCircle) -> Result<RawPairQuantities> {
    if !cj.is_tangent_to(cnext) {
        return Err(Error::contract(format!(
            "Ford circles at {} and {} are not tangent",
            cj.tangency, cnext.tangency
        )));
    }
    let q = BigInt::from(cj.tangency.denom());
    let r = BigInt::from(cnext.tangency.denom());
    let q2 = &q * &q;
    let r2 = &r * &r;

    let (x1, y1) = cj.center();
    let (x2, y2) = cnext.center();
    let slope = (y2 - y1) / (x2 - x1);

    let tan_theta = (q2 != r2).then(|| {
        let diff = &r2 - &q2;
        ratio(BigInt::from(2) * &q * &r, diff.abs())
    });
    let four = BigInt::from(4);
    Ok(RawPairQuantities {
        d: ratio(1, BigInt::from(2) * &q2) + ratio(1, BigInt::from(2) * &r2),
        slope,
        tan_theta,
        area: ratio(1, &four * &q2 * &q * &r) + ratio(1, &four * &q * &r2 * &r),
        sinh_half_rho: ratio(q.clone(), BigInt::from(2) * &r) + ratio(r.clone(), BigInt::from(2) * &q),
        tan_alpha: ratio(&four * &q2 * &q2 * &q, &r2 * &r) - ratio(&four * &q * &r, BigInt::one())
            + ratio(BigInt::from(16) * &q2 * &q, r.clone()),
    })
}

/// Area of `[x0, x1] × [y0, y1] ∩ { x + y > 1 }`.
///
/// For fixed `x` the covered height is `clamp(x - (1 - y1), 0, y1 - y0)`;
/// the area is the integral of that ramp, taken in closed form.
pub fn omega_area_in_rect(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let h = y1 - y0;
    let c = 1.0 - y1;
    let ramp = |u: f64| {
        if u <= 0.0 {
            0.0
        } else if u <= h {
            0.5 * u * u
        } else {
            h * (u - 0.5 * h)
        }
    };
    ramp(x1 - c) - ramp(x0 - c)
}

/// Lossy conversion used when comparing exact quantities with doubles.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().unwrap_or(f64::NAN)
}
