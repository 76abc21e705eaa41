//! The BCZ map `T(x, y) = (y, ⌊(1 + x)/y⌋ y - x)` on `Ω`, which carries the
//! normalized pair `(q_j, q_{j+1}) / Q` to `(q_{j+1}, q_{j+2}) / Q`, plus the
//! empirical measures and shifted joint statistics built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::denominator_pairs;
use crate::geom::{omega_area_in_rect, NormalizedPair, StatisticKind};
use crate::rational::{best_approximation, RationalInterval};
use crate::sweep::{fold_pairs, SweepConfig};

/// Distance from an integer below which the floating floor is recomputed
/// from a rational reconstruction of the inputs.
pub const FLOOR_GUARD: f64 = 1e-9;

/// Largest denominator tried when reconstructing a floating input.
pub const RECONSTRUCTION_DENOMINATOR: u64 = 1 << 31;

/// One step of the BCZ map.
///
/// Pairs that carry their exact denominators are stepped in integers and the
/// doubles are re-derived from them. Plain floating pairs use the floating
/// floor unless `(1 + x)/y` is within [`FLOOR_GUARD`] of an integer, in which
/// case `x` and `y` are replaced by their best rational approximations with
/// denominator at most [`RECONSTRUCTION_DENOMINATOR`] and the floor is taken
/// exactly.
pub fn bcz_step(pair: &NormalizedPair) -> NormalizedPair {
    if let Some(e) = pair.exact() {
        let k = (e.order + e.q_j) / e.q_next;
        return NormalizedPair::from_exact_unchecked(e.q_next, k * e.q_next - e.q_j, e.order);
    }
    let (x, y) = (pair.x(), pair.y());
    let r = (1.0 + x) / y;
    let k = if (r - r.round()).abs() < FLOOR_GUARD {
        guarded_floor(x, y)
    } else {
        r.floor()
    };
    let next = (k * y - x).min(1.0);
    debug_assert!(next > 0.0 && y + next > 1.0, "BCZ image left Ω: ({x}, {y})");
    NormalizedPair::from_float_unchecked(y, next)
}

fn guarded_floor(x: f64, y: f64) -> f64 {
    let (a, b) = best_approximation(x, RECONSTRUCTION_DENOMINATOR);
    let (c, d) = best_approximation(y, RECONSTRUCTION_DENOMINATOR);
    // floor(((b + a) / b) / (c / d)) = floor((b + a) d / (b c))
    let num = (b as u128 + a as u128) * d as u128;
    let den = b as u128 * c as u128;
    (num / den) as f64
}

/// `[start, T(start), ..., Tⁿ(start)]`.
pub fn orbit(start: NormalizedPair, steps: usize) -> Vec<NormalizedPair> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut p = start;
    out.push(p);
    for _ in 0..steps {
        p = bcz_step(&p);
        out.push(p);
    }
    out
}

/// Uniform `nx × ny` grid on `[0, 1]²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinSpec {
    pub nx: usize,
    pub ny: usize,
}

impl BinSpec {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::usage("histogram needs at least one bin per axis"));
        }
        Ok(BinSpec { nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Bin of the point `(q_j, q_next) / order`, computed in integers. The
    /// closed right edge `x = 1` belongs to the last column.
    #[inline]
    fn index(&self, q_j: u64, q_next: u64, order: u64) -> usize {
        let ix = ((q_j as u128 * self.nx as u128 / order as u128) as usize).min(self.nx - 1);
        let iy = ((q_next as u128 * self.ny as u128 / order as u128) as usize).min(self.ny - 1);
        iy * self.nx + ix
    }

    /// `m(bin) = 2 · area(bin ∩ Ω)`, row-major.
    pub fn reference_masses(&self) -> Vec<f64> {
        let (hx, hy) = (1.0 / self.nx as f64, 1.0 / self.ny as f64);
        (0..self.ny)
            .flat_map(|iy| (0..self.nx).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| {
                2.0 * omega_area_in_rect(
                    ix as f64 * hx,
                    (ix + 1) as f64 * hx,
                    iy as f64 * hy,
                    (iy + 1) as f64 * hy,
                )
            })
            .collect()
    }
}

/// Histogram of the normalized consecutive pairs of a Farey window, compared
/// bin by bin with the limiting measure `dm = 2 dx dy` on `Ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub order: u64,
    pub interval: RationalInterval,
    pub bins: BinSpec,
    pub pair_count: u64,
    /// Raw counts, row-major (`iy * nx + ix`).
    pub counts: Vec<u64>,
    /// `counts / pair_count`.
    pub empirical: Vec<f64>,
    /// `m(bin)`.
    pub reference: Vec<f64>,
    /// `max over bins of |empirical - reference|`.
    pub discrepancy: f64,
}

pub fn empirical_measure(
    order: u64,
    interval: RationalInterval,
    bins: BinSpec,
    config: SweepConfig,
) -> Result<EmpiricalMeasure> {
    let n_bins = bins.len();
    if n_bins == 0 {
        return Err(Error::usage("empty bin specification"));
    }
    let counts = fold_pairs(
        order,
        interval,
        config,
        || vec![0u64; n_bins],
        |c, a, b| c[bins.index(a, b, order)] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    let pair_count: u64 = counts.iter().sum();
    if pair_count == 0 {
        return Err(Error::usage(format!(
            "window {interval} holds no consecutive pair at order {order}"
        )));
    }
    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / pair_count as f64)
        .collect();
    let reference = bins.reference_masses();
    let discrepancy = empirical
        .iter()
        .zip(&reference)
        .map(|(e, r)| (e - r).abs())
        .fold(0.0, f64::max);
    Ok(EmpiricalMeasure {
        order,
        interval,
        bins,
        pair_count,
        counts,
        empirical,
        reference,
        discrepancy,
    })
}

/// Value of `kind` at the normalized pair `(q_j, q_next) / order`.
///
/// Every sweep goes through this so that counts taken by different routes
/// agree bit for bit.
#[inline]
pub(crate) fn pair_value(kind: StatisticKind, q_j: u64, q_next: u64, order: u64) -> f64 {
    let qf = order as f64;
    kind.value(q_j as f64 / qf, q_next as f64 / qf)
}

/// Proportion of pair indices `j` with `F_i(pair_{j + n_i}) >= t_i` for all
/// `i`, indices taken cyclically over the `N - 1` pairs of the window.
pub fn joint_shifted_distribution(
    stats: &[StatisticKind],
    shifts: &[i64],
    thresholds: &[f64],
    order: u64,
    interval: RationalInterval,
) -> Result<f64> {
    if stats.len() != shifts.len() || stats.len() != thresholds.len() {
        return Err(Error::usage(format!(
            "{} statistics, {} shifts and {} thresholds: lengths must match",
            stats.len(),
            shifts.len(),
            thresholds.len()
        )));
    }
    if stats.is_empty() {
        return Err(Error::usage("at least one statistic is required"));
    }
    let pairs: Vec<(u64, u64)> = denominator_pairs(order, interval)?.collect();
    let m = pairs.len();
    if m == 0 {
        return Err(Error::usage(format!(
            "window {interval} holds no consecutive pair at order {order}"
        )));
    }
    let passes: Vec<Vec<bool>> = stats
        .iter()
        .zip(thresholds)
        .map(|(&k, &t)| {
            pairs
                .iter()
                .map(|&(a, b)| pair_value(k, a, b, order) >= t)
                .collect()
        })
        .collect();
    let offsets: Vec<usize> = shifts
        .iter()
        .map(|&n| n.rem_euclid(m as i64) as usize)
        .collect();
    let hits = (0..m)
        .filter(|&j| {
            passes
                .iter()
                .zip(&offsets)
                .all(|(pass, &off)| pass[(j + off) % m])
        })
        .count();
    Ok(hits as f64 / m as f64)
}
