//! First moments `(1/|I|) Σ_j |F(x_j, y_j)|` over the consecutive pairs of a
//! Farey window, their predicted leading terms, and the limiting averages
//! `∫ F dm`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bcz::pair_value;
use crate::error::{Error, Result};
use crate::geom::StatisticKind;
use crate::quad::{integrate_omega, QuadratureConfig, QuadratureResult};
use crate::rational::RationalInterval;
use crate::summation::CompensatedSum;
use crate::sums::SIX_OVER_PI2;
use crate::sweep::{fold_pairs, SweepConfig};

/// `9/(2π²)`.
pub const HYPERBOLIC_MOMENT_CONSTANT: f64 = 9.0 / (2.0 * PI * PI);

/// `12/π`, the constant usually quoted for the angle moment.
pub const ANGLE_MOMENT_CONSTANT: f64 = 12.0 / PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub kind: StatisticKind,
    pub order: u64,
    pub interval: RationalInterval,
    /// `N_I(Q) - 1`.
    pub pair_count: u64,
    /// `Σ_j |F(x_j, y_j)|`.
    pub raw_sum: f64,
    /// `raw_sum / |I|`.
    pub normalized: f64,
    /// `normalized / Q²`.
    pub normalized_over_q2: f64,
    /// `(1 / (N - 1)) Σ_j F(x_j, y_j)`, signed.
    pub mean: f64,
    /// Leading term of `normalized`, for the kinds that have one.
    pub predicted: Option<f64>,
    /// `normalized - predicted`.
    pub residual: Option<f64>,
    /// `residual / Q²`.
    pub scaled_residual: Option<f64>,
    /// Set by [`fit_moment_constants`].
    pub fitted_constant: Option<f64>,
}

/// Leading term of the normalized moment at order `Q`: `(6/π²) Q² log Q`
/// for the Euclidean distance, `(9/(2π²)) Q²` for the hyperbolic distance.
pub fn predicted_moment(kind: StatisticKind, order: u64) -> Option<f64> {
    let q = order as f64;
    match kind {
        StatisticKind::EuclideanDistance => Some(SIX_OVER_PI2 * q * q * q.ln()),
        StatisticKind::HyperbolicDistance => Some(HYPERBOLIC_MOMENT_CONSTANT * q * q),
        _ => None,
    }
}

#[derive(Clone, Copy, Default)]
struct Acc {
    abs: CompensatedSum,
    signed: CompensatedSum,
    count: u64,
}

fn accumulate(kind: StatisticKind, order: u64, interval: RationalInterval, config: SweepConfig) -> Result<Acc> {
    fold_pairs(
        order,
        interval,
        config,
        Acc::default,
        |acc, a, b| {
            let v = pair_value(kind, a, b, order);
            acc.abs.add(v.abs());
            acc.signed.add(v);
            acc.count += 1;
        },
        |a, b| Acc {
            abs: a.abs.merge(b.abs),
            signed: a.signed.merge(b.signed),
            count: a.count + b.count,
        },
    )
}

/// The moment of `kind` over the window at order `Q`.
///
/// `EuclideanAngleTan` is infinite on the diagonal, so its moment is
/// infinite whenever the pair `(1, 1)` falls in the window.
pub fn empirical_moment(
    kind: StatisticKind,
    order: u64,
    interval: RationalInterval,
    config: SweepConfig,
) -> Result<MomentReport> {
    if order < 2 {
        return Err(Error::usage("moments need Q >= 2"));
    }
    let acc = accumulate(kind, order, interval, config)?;
    if acc.count == 0 {
        return Err(Error::usage(format!(
            "window {interval} holds no consecutive pair at order {order}"
        )));
    }
    let raw_sum = acc.abs.value();
    let normalized = raw_sum / interval.length();
    let q2 = order as f64 * order as f64;
    let predicted = predicted_moment(kind, order);
    let residual = predicted.map(|p| normalized - p);
    Ok(MomentReport {
        kind,
        order,
        interval,
        pair_count: acc.count,
        raw_sum,
        normalized,
        normalized_over_q2: normalized / q2,
        mean: acc.signed.value() / acc.count as f64,
        predicted,
        residual,
        scaled_residual: residual.map(|r| r / q2),
        fitted_constant: None,
    })
}

/// The angle moment `(1/|I|) Σ_j (θ_j + θ_{j+1})`, `θ` in radians, compared
/// with the limiting value and with the count-based constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnglePairReport {
    pub order: u64,
    pub interval: RationalInterval,
    pub pair_count: u64,
    /// `Σ_j θ_j`.
    pub angle_sum: f64,
    /// `(1/|I|) Σ_j (θ_j + θ_{j+1})`, indices cyclic.
    pub moment: f64,
    pub moment_over_q2: f64,
    /// `(6/π²) ∫ θ dm`, the limit of `moment_over_q2`.
    pub oracle: f64,
    /// `(2π/|I|) N_I(Q) / Q²`.
    pub count_based: f64,
    /// `12/π`.
    pub stated_constant: f64,
    pub relative_error_vs_oracle: f64,
    pub relative_error_vs_stated_constant: f64,
    /// Within 1% of the oracle.
    pub agrees_with_oracle: bool,
    /// Within 1% of `12/π`.
    pub agrees_with_stated_constant: bool,
}

/// Relative agreement threshold for the flags of [`AnglePairReport`].
pub const ANGLE_AGREEMENT: f64 = 0.01;

pub fn angle_pair_moment(
    order: u64,
    interval: RationalInterval,
    config: SweepConfig,
) -> Result<AnglePairReport> {
    let kind = StatisticKind::EuclideanAngleRadians;
    if order < 2 {
        return Err(Error::usage("moments need Q >= 2"));
    }
    let acc = accumulate(kind, order, interval, config)?;
    if acc.count == 0 {
        return Err(Error::usage(format!(
            "window {interval} holds no consecutive pair at order {order}"
        )));
    }
    let angle_sum = acc.abs.value();
    // Σ_j (θ_j + θ_{j+1}) with j + 1 taken cyclically is 2 Σ θ
    let moment = 2.0 * angle_sum / interval.length();
    let q2 = order as f64 * order as f64;
    let oracle = SIX_OVER_PI2 * equidistribution_average(kind, QuadratureConfig::default())?.value;
    let moment_over_q2 = moment / q2;
    let count_based = 2.0 * PI * (acc.count + 1) as f64 / interval.length() / q2;
    let rel_oracle = (moment_over_q2 - oracle).abs() / oracle;
    let rel_stated = (moment_over_q2 - ANGLE_MOMENT_CONSTANT).abs() / ANGLE_MOMENT_CONSTANT;
    Ok(AnglePairReport {
        order,
        interval,
        pair_count: acc.count,
        angle_sum,
        moment,
        moment_over_q2,
        oracle,
        count_based,
        stated_constant: ANGLE_MOMENT_CONSTANT,
        relative_error_vs_oracle: rel_oracle,
        relative_error_vs_stated_constant: rel_stated,
        agrees_with_oracle: rel_oracle <= ANGLE_AGREEMENT,
        agrees_with_stated_constant: rel_stated <= ANGLE_AGREEMENT,
    })
}

/// `∫_Ω F dm`, refused for the kinds whose integral diverges.
pub fn equidistribution_average(kind: StatisticKind, config: QuadratureConfig) -> Result<QuadratureResult> {
    if !kind.has_finite_mean() {
        return Err(Error::DivergentMean(kind.name().to_string()));
    }
    integrate_omega(|x, y| kind.value(x, y), config)
}

/// Residuals `normalized/Q² - predicted/Q²` along an increasing list of
/// orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentFit {
    pub kind: StatisticKind,
    pub interval: RationalInterval,
    pub reports: Vec<MomentReport>,
    pub scaled_residuals: Vec<f64>,
    /// `|r_n - r_{n-1}|` for the last two orders.
    pub last_gap: f64,
    /// The residual at the largest order.
    pub fitted_constant: f64,
}

pub fn fit_moment_constants(
    kind: StatisticKind,
    orders: &[u64],
    interval: RationalInterval,
    config: SweepConfig,
) -> Result<MomentFit> {
    if predicted_moment(kind, 2).is_none() {
        return Err(Error::usage(format!(
            "no predicted moment for `{kind}`; use euclid or hyp"
        )));
    }
    if orders.len() < 3 {
        return Err(Error::usage("a constant fit needs at least three orders"));
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::usage("orders must be strictly increasing"));
    }
    let mut reports = orders
        .iter()
        .map(|&q| empirical_moment(kind, q, interval, config))
        .collect::<Result<Vec<_>>>()?;
    let scaled_residuals: Vec<f64> = reports
        .iter()
        .map(|r| r.scaled_residual.expect("kind has a prediction"))
        .collect();
    let n = scaled_residuals.len();
    let fitted_constant = scaled_residuals[n - 1];
    for r in &mut reports {
        r.fitted_constant = Some(fitted_constant);
    }
    Ok(MomentFit {
        kind,
        interval,
        reports,
        last_gap: (scaled_residuals[n - 1] - scaled_residuals[n - 2]).abs(),
        scaled_residuals,
        fitted_constant,
    })
}
