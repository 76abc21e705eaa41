//! Adaptive Gauss–Kronrod quadrature on intervals and over `Ω`.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// weights of the embedded 7-point Gauss rule on the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Stopping rule for the adaptive rules: stop once the summed error
/// estimate is below `max(abs_tol, rel_tol · |value|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Most subintervals (or cells) before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureConfig {
    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

/// `∫_a^b f` by globally adaptive bisection with the 15-point Kronrod rule.
///
/// The rule never evaluates at the endpoints, so integrable endpoint
/// singularities are fine.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    config: QuadratureConfig,
) -> Result<QuadratureResult> {
    integrate_with_breaks(f, &[a, b], config)
}

/// As [`integrate`], starting from the given sorted breakpoints (placed at
/// known kinks or singularities).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    config: QuadratureConfig,
) -> Result<QuadratureResult> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::usage("quadrature breakpoints must be sorted"));
    }
    let mut segs: Vec<Segment> = breaks
        .windows(2)
        .filter(|w| w[0] < w[1])
        .map(|w| kronrod(&f, w[0], w[1]))
        .collect();
    if segs.is_empty() {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut evaluations = 15 * segs.len();
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::numeric("integrand is not finite at a node", error));
        }
        if error <= config.target(value) {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if segs.len() >= config.max_subdivisions {
            return Err(Error::numeric(
                format!("no convergence after {} subintervals", segs.len()),
                error,
            ));
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("non-empty");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if !(s.a < mid && mid < s.b) {
            // The segment cannot be split further in double precision.
            return Err(Error::numeric("subinterval below double resolution", error));
        }
        segs.push(kronrod(&f, s.a, mid));
        segs.push(kronrod(&f, mid, s.b));
        evaluations += 30;
    }
}

/// `∫_Ω f dm` with `dm = 2 dx dy`.
///
/// The inner integral runs over `y ∈ (1 - x, 1]`, split at the diagonal
/// `y = x`; the outer integral is split at `x = 1/2`, where the diagonal
/// enters the inner range. Inner rules use a tolerance a hundred times
/// tighter than the outer one.
pub fn integrate_omega<F: Fn(f64, f64) -> f64>(
    f: F,
    config: QuadratureConfig,
) -> Result<QuadratureResult> {
    let inner_cfg = QuadratureConfig {
        abs_tol: config.abs_tol * 1e-2,
        rel_tol: config.rel_tol * 1e-2,
        ..config
    };
    let failure: Cell<Option<f64>> = Cell::new(None);
    let evaluations = Cell::new(0usize);
    let outer = |x: f64| {
        let lo = 1.0 - x;
        let r = if lo < x && x < 1.0 {
            integrate_with_breaks(|y| f(x, y), &[lo, x, 1.0], inner_cfg)
        } else {
            integrate(|y| f(x, y), lo, 1.0, inner_cfg)
        };
        match r {
            Ok(r) => {
                evaluations.set(evaluations.get() + r.evaluations);
                r.value
            }
            Err(e) => {
                let achieved = match e {
                    Error::Numeric { achieved, .. } => achieved,
                    _ => f64::NAN,
                };
                if failure.get().is_none() {
                    failure.set(Some(achieved));
                }
                f64::NAN
            }
        }
    };
    let r = integrate_with_breaks(outer, &[0.0, 0.5, 1.0], config);
    if let Some(achieved) = failure.get() {
        return Err(Error::numeric("inner integral over Ω did not converge", achieved));
    }
    let r = r?;
    Ok(QuadratureResult {
        value: 2.0 * r.value,
        error_estimate: 2.0 * r.error_estimate,
        evaluations: evaluations.get(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x * x, 0.0, 1.0, QuadratureConfig::default()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
        let r = integrate(|x| x.powi(21), -1.0, 2.0, QuadratureConfig::default()).unwrap();
        assert!((r.value - (2f64.powi(22) - 1.0) / 22.0).abs() < 1e-9);
    }

    #[test]
    fn endpoint_singularities() {
        let r = integrate(|x| -x.ln(), 0.0, 1.0, QuadratureConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate(|x| x.sqrt().recip(), 0.0, 1.0, QuadratureConfig::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn divergence_is_reported() {
        let cfg = QuadratureConfig {
            max_subdivisions: 200,
            ..Default::default()
        };
        assert!(matches!(
            integrate(|x| 1.0 / (x * x), 0.0, 1.0, cfg),
            Err(Error::Numeric { .. })
        ));
    }

    #[test]
    fn omega_has_unit_mass() {
        let r = integrate_omega(|_, _| 1.0, QuadratureConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        let r = integrate_omega(|x, _| x, QuadratureConfig::default()).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn omega_log_singular_integrand() {
        // ∬_Ω x/y dx dy = 3/4
        let r = integrate_omega(|x, y| x / y, QuadratureConfig::default()).unwrap();
        assert!((r.value - 1.5).abs() < 1e-10, "{r:?}");
    }
}
