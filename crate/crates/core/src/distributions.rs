//! Survival functions `G_F(t) = m{F >= t}`: empirical at finite `Q`, by
//! adaptive indicator quadrature over `Ω`, and in closed form for the two
//! distance statistics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bcz::pair_value;
use crate::error::{Error, Result};
use crate::geom::{omega_area_in_rect, StatisticKind};
use crate::rational::RationalInterval;
use crate::summation::CompensatedSum;
use crate::sweep::{fold_pairs, SweepConfig};

/// Where the values of a [`SurvivalCurve`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SurvivalSource {
    Empirical { order: u64 },
    Quadrature,
    ClosedForm,
}

impl fmt::Display for SurvivalSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurvivalSource::Empirical { order } => write!(f, "empirical@{order}"),
            SurvivalSource::Quadrature => f.write_str("quadrature"),
            SurvivalSource::ClosedForm => f.write_str("closed-form"),
        }
    }
}

impl FromStr for SurvivalSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(SurvivalSource::Quadrature),
            "closed-form" => Ok(SurvivalSource::ClosedForm),
            _ => s
                .strip_prefix("empirical@")
                .and_then(|q| q.parse().ok())
                .map(|order| SurvivalSource::Empirical { order })
                .ok_or_else(|| Error::Parse(format!("unknown survival source `{s}`"))),
        }
    }
}

impl TryFrom<String> for SurvivalSource {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SurvivalSource> for String {
    fn from(s: SurvivalSource) -> String {
        s.to_string()
    }
}

/// `G` sampled on a strictly increasing grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct SurvivalCurve {
    kind: StatisticKind,
    source: SurvivalSource,
    t: Vec<f64>,
    g: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCurve {
    kind: StatisticKind,
    source: SurvivalSource,
    t: Vec<f64>,
    g: Vec<f64>,
}

impl TryFrom<RawCurve> for SurvivalCurve {
    type Error = Error;

    fn try_from(r: RawCurve) -> Result<Self> {
        SurvivalCurve::new(r.kind, r.source, r.t, r.g)
    }
}

impl SurvivalCurve {
    /// Checks that the grid is strictly increasing and that `g` is
    /// non-increasing with values in `[0, 1]`.
    pub fn new(kind: StatisticKind, source: SurvivalSource, t: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if t.len() != g.len() {
            return Err(Error::contract(format!(
                "{} grid points but {} values",
                t.len(),
                g.len()
            )));
        }
        check_grid(&t)?;
        if g.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::contract("survival values must lie in [0, 1]"));
        }
        if g.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::contract("survival values must be non-increasing"));
        }
        Ok(SurvivalCurve { kind, source, t, g })
    }

    pub fn kind(&self) -> StatisticKind {
        self.kind
    }

    pub fn source(&self) -> SurvivalSource {
        self.source
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

fn check_grid(t: &[f64]) -> Result<()> {
    if t.is_empty() {
        return Err(Error::usage("threshold grid is empty"));
    }
    if t.iter().any(|v| !v.is_finite()) {
        return Err(Error::usage("threshold grid must be finite"));
    }
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::usage("threshold grid must be strictly increasing"));
    }
    Ok(())
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    grid(lo, hi, n, false)
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `log t`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) {
        return Err(Error::usage("log grid needs a positive lower end"));
    }
    grid(lo, hi, n, true)
}

fn grid(lo: f64, hi: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if n == 0 || !(lo.is_finite() && hi.is_finite()) || (n > 1 && !(lo < hi)) {
        return Err(Error::usage(format!("bad grid {lo}..{hi} with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = if log { (lo.ln(), hi.ln()) } else { (lo, hi) };
    let step = (b - a) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n)
        .map(|i| {
            let v = a + step * i as f64;
            if log {
                v.exp()
            } else {
                v
            }
        })
        .collect();
    out[0] = lo;
    out[n - 1] = hi;
    Ok(out)
}

/// Proportion of the consecutive pairs of the window with `F >= t`, for
/// every `t` of the grid, in one pass over the pairs.
pub fn empirical_survival(
    kind: StatisticKind,
    order: u64,
    interval: RationalInterval,
    grid: &[f64],
    config: SweepConfig,
) -> Result<SurvivalCurve> {
    check_grid(grid)?;
    let n = grid.len();
    // bucket k counts pairs with exactly k thresholds <= F
    let buckets = fold_pairs(
        order,
        interval,
        config,
        || vec![0u64; n + 1],
        |c, a, b| {
            let v = pair_value(kind, a, b, order);
            c[grid.partition_point(|&t| t <= v)] += 1;
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    let total: u64 = buckets.iter().sum();
    if total == 0 {
        return Err(Error::usage(format!(
            "window {interval} holds no consecutive pair at order {order}"
        )));
    }
    let mut g = vec![0.0; n];
    let mut above = 0u64;
    for i in (0..n).rev() {
        above += buckets[i + 1];
        g[i] = above as f64 / total as f64;
    }
    SurvivalCurve::new(kind, SurvivalSource::Empirical { order }, grid.to_vec(), g)
}

/// Stopping rule and budget for [`superlevel_mass`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorConfig {
    /// Stop once the mass of undecided cells is below
    /// `min(abs_tol, rel_tol · estimate)`.
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Most cells examined before giving up.
    pub max_cells: usize,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        IndicatorConfig {
            abs_tol: 1e-6,
            rel_tol: 1e-4,
            max_cells: 20_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorResult {
    pub value: f64,
    /// Total mass of the cells that were still undecided; the error is at
    /// most this.
    pub undecided_mass: f64,
    pub cells: usize,
}

/// Axis-aligned box `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn split(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect { x1: xm, y1: ym, ..*self },
            Rect { x0: xm, y1: ym, ..*self },
            Rect { x1: xm, y0: ym, ..*self },
            Rect { x0: xm, y0: ym, ..*self },
        ]
    }

    /// Bounding box of `self ∩ Ω`, if that is not empty.
    fn clip(&self) -> Option<Rect> {
        let x0 = self.x0.max(1.0 - self.y1);
        let y0 = self.y0.max(1.0 - self.x1);
        (x0 < self.x1 && y0 < self.y1).then_some(Rect { x0, y0, ..*self })
    }
}

enum Class {
    Inside(f64),
    Outside,
    Boundary { mass: f64, hit: bool },
}

/// `m{(x, y) ∈ Ω : F(x, y) >= t}` by recursive subdivision of `[0, 1]²`.
///
/// `bounds` must return a lower and upper bound for `F` on the given box
/// (already clipped to the bounding box of its intersection with `Ω`).
/// Cells wholly above or below `t` are settled with their exact `Ω`-mass;
/// undecided cells are split in four until their total mass meets the
/// tolerance, and the remaining ones are then counted by the value at their
/// centre.
pub fn superlevel_mass<B, V>(bounds: B, value: V, t: f64, config: IndicatorConfig) -> Result<IndicatorResult>
where
    B: Fn(&Rect) -> (f64, f64) + Sync,
    V: Fn(f64, f64) -> f64 + Sync,
{
    let classify = |r: &Rect| -> Class {
        let Some(c) = r.clip() else {
            return Class::Outside;
        };
        let (lo, hi) = bounds(&c);
        let mass = 2.0 * omega_area_in_rect(r.x0, r.x1, r.y0, r.y1);
        if lo >= t {
            Class::Inside(mass)
        } else if hi < t {
            Class::Outside
        } else {
            let hit = value(0.5 * (c.x0 + c.x1), 0.5 * (c.y0 + c.y1)) >= t;
            Class::Boundary { mass, hit }
        }
    };
    let mut cells = vec![Rect {
        x0: 0.0,
        x1: 1.0,
        y0: 0.0,
        y1: 1.0,
    }];
    let mut inside = CompensatedSum::new();
    let mut examined = 0usize;
    loop {
        examined += cells.len();
        let classes: Vec<Class> = cells.par_iter().map(classify).collect();
        let mut undecided = CompensatedSum::new();
        let mut estimate = CompensatedSum::new();
        let mut next = Vec::new();
        for (r, c) in cells.iter().zip(classes) {
            match c {
                Class::Inside(m) => inside.add(m),
                Class::Outside => {}
                Class::Boundary { mass, hit } => {
                    undecided.add(mass);
                    if hit {
                        estimate.add(mass);
                    }
                    next.push(*r);
                }
            }
        }
        let value = inside.value() + estimate.value();
        let undecided = undecided.value();
        if next.is_empty() || undecided <= config.abs_tol.min(config.rel_tol * value) {
            return Ok(IndicatorResult {
                value: value.clamp(0.0, 1.0),
                undecided_mass: undecided,
                cells: examined,
            });
        }
        if examined + 4 * next.len() > config.max_cells {
            return Err(Error::numeric(
                format!("indicator quadrature budget of {} cells exhausted at t = {t}", config.max_cells),
                undecided,
            ));
        }
        cells = next.iter().flat_map(Rect::split).collect();
    }
}

/// Bounds for `F` on a box inside the closure of `Ω`.
pub fn statistic_bounds(kind: StatisticKind, b: &Rect) -> (f64, f64) {
    let (xl, xh, yl, yh) = (b.x0, b.x1, b.y0, b.y1);
    // r = x / y over the box
    let (rl, rh) = (xl / yh, xh / yl);
    // m = min(r, 1/r) ∈ [0, 1]
    let m = |r: f64| if r <= 1.0 { r } else { 1.0 / r };
    let m_range = || {
        let (a, b) = (m(rl), m(rh));
        if rl <= 1.0 && 1.0 <= rh {
            (a.min(b), 1.0)
        } else {
            (a.min(b), a.max(b))
        }
    };
    match kind {
        StatisticKind::EuclideanDistance | StatisticKind::EuclideanArea => {
            (kind.value(xh, yh), kind.value(xl, yl))
        }
        StatisticKind::Slope => (0.5 * (rl - 1.0 / rl), 0.5 * (rh - 1.0 / rh)),
        StatisticKind::HyperbolicDistance => {
            let h = |r: f64| 0.5 * (r + 1.0 / r);
            let hi = h(rl).max(h(rh));
            if rl <= 1.0 && 1.0 <= rh {
                (1.0, hi)
            } else {
                (h(rl).min(h(rh)), hi)
            }
        }
        StatisticKind::EuclideanAngleTan => {
            let (a, b) = m_range();
            let f = |m: f64| 2.0 * m / ((1.0 - m) * (1.0 + m));
            (f(a), f(b))
        }
        StatisticKind::EuclideanAngleRadians => {
            let (a, b) = m_range();
            (2.0 * a.atan(), 2.0 * b.atan())
        }
        StatisticKind::HyperbolicAngleTan => {
            // 4x⁵/y³ - 4xy + 16x³/y, bounded term by term
            let p = |x: f64, y: f64| 4.0 * x.powi(5) / y.powi(3);
            let q = |x: f64, y: f64| 16.0 * x.powi(3) / y;
            (
                p(xl, yh) - 4.0 * xh * yh + q(xl, yh),
                p(xh, yl) - 4.0 * xl * yl + q(xh, yl),
            )
        }
    }
}

/// `G_F(t)` for the limiting measure, by indicator quadrature.
pub fn limiting_survival_quadrature(kind: StatisticKind, t: f64, config: IndicatorConfig) -> Result<IndicatorResult> {
    if t.is_nan() {
        return Err(Error::usage("threshold is NaN"));
    }
    superlevel_mass(|b| statistic_bounds(kind, b), |x, y| kind.value(x, y), t, config)
}

/// Quadrature values on a whole grid, made non-increasing by a running
/// minimum to absorb the (sub-tolerance) noise between neighbouring points.
pub fn quadrature_survival(kind: StatisticKind, grid: &[f64], config: IndicatorConfig) -> Result<SurvivalCurve> {
    check_grid(grid)?;
    let mut g = grid
        .iter()
        .map(|&t| limiting_survival_quadrature(kind, t, config).map(|r| r.value))
        .collect::<Result<Vec<f64>>>()?;
    for i in 1..g.len() {
        g[i] = g[i].min(g[i - 1]);
    }
    SurvivalCurve::new(kind, SurvivalSource::Quadrature, grid.to_vec(), g)
}

/// `G(t)` for the Euclidean distance `1/(2x²) + 1/(2y²)`.
///
/// With `w = √(2t - 1)` the region `{F < t}` is bounded by the curve
/// `y = x / √(2tx² - 1)` from `(1/w, 1)` to `(1, 1/w)`. For `t <= 4` the
/// curve stays above `x + y = 1` and
///
/// `G = 2/w + (w - 1/w)/t - 1`.
///
/// For `t > 4` it dips below the line between `x = (1 ∓ r)/2`, where
/// `s = √(1 + 2t)` and `r = √((s - 3)/(s + 1))`, and the sliver between curve
/// and line is added back. After cancelling the leading unit term this is
///
/// `G = 2/w + (w - 1/w)/t - 4/((s + 1)(1 + r)) - r(s + 1)/t`.
///
/// The remaining terms are each of size `t^{-1/2}` against a result of size
/// `1/t`, so about half of the decimal digits of `t` are lost.
pub fn euclid_closed_form(t: f64) -> f64 {
    if t <= 1.0 {
        return 1.0;
    }
    let w = (2.0 * t - 1.0).sqrt();
    let common = 2.0 / w + (w - 1.0 / w) / t;
    let g = if t <= 4.0 {
        common - 1.0
    } else {
        let s = (1.0 + 2.0 * t).sqrt();
        let r = ((s - 3.0) / (s + 1.0)).sqrt();
        common - 4.0 / ((s + 1.0) * (1.0 + r)) - r * (s + 1.0) / t
    };
    g.clamp(0.0, 1.0)
}

/// The Euclidean survival expression in the form it is usually printed:
///
/// `(4t - 1)/√(2t - 1) - 1 - (1/t)√(1/(2t - 1)) + S/t + (1/t)√(t - √(2t + 1) - S)
///  - (1/t)√(t - √(2t + 1) + S)`, with `S = √(t(t - 2√(2t + 1) + 2))`.
///
/// It is kept for comparison only. It leaves the reals for `t < 4` (returns
/// `None`) and does not match the measure of the region elsewhere; use
/// [`euclid_closed_form`].
pub fn euclid_printed_form(t: f64) -> Option<f64> {
    let r = (2.0 * t + 1.0).sqrt();
    let s2 = t * (t - 2.0 * r + 2.0);
    let a = t - r;
    if !(t > 0.5) || s2 < 0.0 {
        return None;
    }
    let s = s2.sqrt();
    if a - s < 0.0 {
        return None;
    }
    let w = (2.0 * t - 1.0).sqrt();
    Some((4.0 * t - 1.0) / w - 1.0 - (1.0 / w) / t + s / t + (a - s).sqrt() / t - (a + s).sqrt() / t)
}

/// `G(t) = 2 / ((t + s)(t + s + 1))` with `s = √(t² - 1)` for the hyperbolic
/// distance `(x/y + y/x)/2`.
pub fn hyperbolic_closed_form(t: f64) -> f64 {
    if t <= 1.0 {
        return 1.0;
    }
    // t + √(t² - 1), with the radicand factored to keep precision near 1
    let c = t + ((t - 1.0) * (t + 1.0)).sqrt();
    2.0 / (c * (c + 1.0))
}

/// Which `G` a tail fit samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailSource {
    Empirical {
        order: u64,
        interval: RationalInterval,
        config: SweepConfig,
    },
    Quadrature(IndicatorConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// Least-squares slope of `log G` against `log t`.
    pub slope: f64,
    pub intercept: f64,
    pub curve: SurvivalCurve,
}

/// Power-law exponent of `G` on `[t_lo, t_hi]`, from `points` log-spaced
/// samples.
pub fn tail_exponent_fit(
    kind: StatisticKind,
    t_lo: f64,
    t_hi: f64,
    points: usize,
    source: TailSource,
) -> Result<TailFit> {
    if !(1.0 < t_lo && t_lo < t_hi && t_hi.is_finite()) {
        return Err(Error::usage(format!(
            "tail range must satisfy 1 < t_lo < t_hi, got [{t_lo}, {t_hi}]"
        )));
    }
    if points < 2 {
        return Err(Error::usage("a tail fit needs at least two points"));
    }
    let grid = log_grid(t_lo, t_hi, points)?;
    let curve = match source {
        TailSource::Empirical {
            order,
            interval,
            config,
        } => empirical_survival(kind, order, interval, &grid, config)?,
        TailSource::Quadrature(cfg) => quadrature_survival(kind, &grid, cfg)?,
    };
    if let Some(i) = curve.g().iter().position(|&g| g <= 0.0) {
        return Err(Error::numeric(
            format!(
                "G vanishes from t = {} on; raise Q or use the quadrature source",
                curve.t()[i]
            ),
            0.0,
        ));
    }
    let xs: Vec<f64> = curve.t().iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = curve.g().iter().map(|g| g.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(TailFit {
        slope,
        intercept: my - slope * mx,
        curve,
    })
}
