//! Special functions and one-sided limit extrapolation.
//!
//! Everything downstream needs two primitives: Γ(x) on the positive real axis
//! and a way to decide whether a sequence sampled on a geometric ladder of
//! step sizes settles to a limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
// published coefficients, kept at their quoted precision
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0.
///
/// Lanczos approximation (g = 7, nine terms). Arguments below 1/2 are shifted
/// up with Γ(x) = Γ(x + 1) / x so the series is always evaluated on x ≥ 1/2.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma requires a finite x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * w.powf(z + 0.5) * (-w).exp() * series
}

/// Γ for arguments the callers have already validated as positive.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        lanczos(x + 1.0) / x
    } else {
        lanczos(x)
    }
}

/// Outcome of a limit extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitStatus {
    Converged,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for LimitStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LimitStatus::Converged => "Converged",
            LimitStatus::Divergent => "Divergent",
            LimitStatus::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// An extrapolated limit together with its convergence diagnosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub status: LimitStatus,
    pub error_bar: f64,
    pub scales_used: usize,
}

impl LimitEstimate {
    pub fn is_converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }
}

/// Growth of the raw spread over the final scales that counts as divergence.
pub const DIVERGENCE_GROWTH: f64 = 1.5;

/// Number of acceleration passes applied on top of the raw sequence.
const ACCELERATION_STAGES: usize = 2;

/// Estimate `lim_{h→0} value(h)` from samples on a geometric ladder.
///
/// `samples` are `(h, value)` pairs with strictly decreasing `h` and a
/// constant ratio between consecutive steps. The raw sequence is accelerated
/// with repeated Δ² (Richardson with a data-estimated ratio) passes; the
/// status follows three rules:
///
/// * `Converged`: the last two values of the deepest accelerated stage differ
///   by at most `tolerance` and the raw spreads `|v_k - v_{k-1}|` over the
///   final three scales are non-increasing;
/// * `Divergent`: one of those final three spreads exceeds an earlier one by
///   a factor of at least [`DIVERGENCE_GROWTH`] (or a sample is not finite);
/// * `Inconclusive` otherwise.
///
/// Spreads below `max(tolerance / 100, 1e3·ε·max|v|)` are treated as zero so
/// that rounding noise in an already converged sequence is not read as growth.
pub fn extrapolate_limit(samples: &[(f64, f64)], tolerance: f64) -> Result<LimitEstimate> {
    if samples.len() < 4 {
        return Err(Error::argument(format!(
            "extrapolation needs at least 4 scales, got {}",
            samples.len()
        )));
    }
    if !(tolerance > 0.0) {
        return Err(Error::argument("tolerance must be positive"));
    }
    check_ladder(samples)?;

    let raw: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();
    let n = raw.len();

    if raw.iter().any(|v| !v.is_finite()) {
        let value = raw.iter().rev().copied().find(|v| v.is_finite()).unwrap_or(f64::NAN);
        return Ok(LimitEstimate {
            value,
            status: LimitStatus::Divergent,
            error_bar: f64::INFINITY,
            scales_used: n,
        });
    }

    let mut stage = raw.clone();
    for _ in 0..ACCELERATION_STAGES {
        if stage.len() < 4 {
            break;
        }
        stage = stage.windows(3).map(|w| delta_squared(w[0], w[1], w[2])).collect();
    }
    let value = stage[stage.len() - 1];
    let error_bar = (value - stage[stage.len() - 2]).abs();

    let magnitude = raw.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = (tolerance / 100.0).max(1e3 * f64::EPSILON * magnitude);
    let spread = |k: usize| {
        let d = (raw[k] - raw[k - 1]).abs();
        if d <= floor {
            0.0
        } else {
            d
        }
    };
    let tail = [spread(n - 3), spread(n - 2), spread(n - 1)];

    let shrinking = tail[1] <= tail[0] && tail[2] <= tail[1];
    let grew = (0..3).any(|later| {
        (0..later).any(|earlier| {
            let (e, l) = (tail[earlier], tail[later]);
            l > 0.0 && (e == 0.0 || l >= DIVERGENCE_GROWTH * e)
        })
    });

    let status = if error_bar.is_finite() && error_bar <= tolerance && shrinking {
        LimitStatus::Converged
    } else if grew {
        LimitStatus::Divergent
    } else {
        LimitStatus::Inconclusive
    };

    Ok(LimitEstimate { value, status, error_bar, scales_used: n })
}

fn check_ladder(samples: &[(f64, f64)]) -> Result<()> {
    for pair in samples.windows(2) {
        let (h0, h1) = (pair[0].0, pair[1].0);
        if !(h1 > 0.0) || !(h1 < h0) {
            return Err(Error::argument(format!(
                "ladder steps must be positive and strictly decreasing ({h0} then {h1})"
            )));
        }
    }
    let ratio = samples[1].0 / samples[0].0;
    for pair in samples.windows(2) {
        let r = pair[1].0 / pair[0].0;
        if ((r - ratio) / ratio).abs() > 1e-9 {
            return Err(Error::argument(format!(
                "ladder is not geometric: ratios {ratio} and {r}"
            )));
        }
    }
    Ok(())
}

/// One Δ² step. Falls back to the newest value whenever the three points do
/// not look like a contracting geometric tail.
fn delta_squared(x0: f64, x1: f64, x2: f64) -> f64 {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    if d2 == 0.0 || d1 == 0.0 {
        return x2;
    }
    let ratio = d2 / d1;
    if !(ratio.abs() < 1.0) {
        return x2;
    }
    x2 + d2 * ratio / (1.0 - ratio)
}

/// Dyadic ladder `h0 · 2^{-k}` for `k = 0..scales`.
pub fn dyadic_ladder(h0: f64, scales: usize) -> Vec<f64> {
    (0..scales).map(|k| h0 * 0.5_f64.powi(k as i32)).collect()
}

/// Observed convergence order from three consecutive refinements with ratio 2.
pub fn observed_order(coarse: f64, mid: f64, fine: f64) -> f64 {
    ((coarse - mid) / (mid - fine)).abs().log2()
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_at_small_integers() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(0.5).unwrap() - 1.772_453_850_905_516).abs() < 1e-12);
    }

    #[test]
    fn gamma_matches_factorials_up_to_50() {
        let mut fact = 1.0_f64;
        for n in 1..=50u32 {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            assert!(rel(gamma(n as f64).unwrap(), fact) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn gamma_matches_half_integers() {
        // Γ(k + 1/2) = Γ(1/2) · ∏_{j<k} (j + 1/2)
        let mut value = std::f64::consts::PI.sqrt();
        for k in 0..45 {
            let x = k as f64 + 0.5;
            assert!(rel(gamma(x).unwrap(), value) < 1e-12, "x = {x}");
            value *= x;
        }
    }

    #[test]
    fn gamma_matches_high_precision_values() {
        // 30-digit reference values
        let table = [
            (0.1, 9.513_507_698_668_731_836_3),
            (0.25, 3.625_609_908_221_908_311_9),
            (1.0 / 3.0, 2.678_938_534_707_747_913_3),
            (0.75, 1.225_416_702_465_177_645_1),
            (1.3, 0.897_470_696_306_277_188_49),
            (2.7, 1.544_685_845_850_593_765),
            (7.5, 1_871.254_305_797_788_346_5),
            (12.25, 73_711_509.046_769_949_091),
            (33.3, 7.487_577_596_522_706_608e35),
            (49.9, 4.118_011_034_253_058_041_9e62),
            (50.0, 6.082_818_640_342_675_608_7e62),
        ];
        for (x, want) in table {
            assert!(rel(gamma(x).unwrap(), want) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn gamma_recurrence_on_quarter_grid() {
        for k in 1..=40 {
            let x = 0.25 * k as f64;
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs, "x = {x}");
        }
    }

    #[test]
    fn gamma_rejects_non_positive() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-1.5), Err(Error::Domain(_))));
        assert!(matches!(gamma(f64::NAN), Err(Error::Domain(_))));
    }

    fn ladder_samples(k_range: std::ops::RangeInclusive<i32>, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        k_range.map(|k| {
            let h = 0.5_f64.powi(k);
            (h, f(h))
        })
        .collect()
    }

    #[test]
    fn constant_sequence_is_exact() {
        let samples = ladder_samples(1..=6, |_| 3.25);
        let est = extrapolate_limit(&samples, 1e-12).unwrap();
        assert_eq!(est.value, 3.25);
        assert_eq!(est.error_bar, 0.0);
        assert_eq!(est.status, LimitStatus::Converged);
        assert_eq!(est.scales_used, 6);
    }

    #[test]
    fn quadratic_error_is_removed() {
        let samples = ladder_samples(1..=8, |h| 1.0 + h * h);
        let est = extrapolate_limit(&samples, 1e-8).unwrap();
        assert!((est.value - 1.0).abs() < 1e-8, "{est:?}");
        assert_eq!(est.status, LimitStatus::Converged);
    }

    #[test]
    fn oscillating_sequence_is_divergent() {
        let samples = ladder_samples(1..=8, |h| (1.0 / h).cos());
        let est = extrapolate_limit(&samples, 1e-3).unwrap();
        assert_eq!(est.status, LimitStatus::Divergent, "{est:?}");
    }

    #[test]
    fn power_law_errors_with_ten_scales() {
        for p in [0.5, 1.0, 2.0] {
            let samples: Vec<_> = dyadic_ladder(0.1, 10)
                .into_iter()
                .map(|h| (h, -0.7 + 2.3 * h.powf(p)))
                .collect();
            let est = extrapolate_limit(&samples, 1e-6).unwrap();
            assert!((est.value + 0.7).abs() < 1e-6, "p = {p}: {est:?}");
            assert_eq!(est.status, LimitStatus::Converged);
        }
    }

    #[test]
    fn growing_sequence_is_divergent() {
        let samples: Vec<_> = dyadic_ladder(0.1, 8).into_iter().map(|h| (h, 1.0 / h)).collect();
        let est = extrapolate_limit(&samples, 1e-3).unwrap();
        assert_eq!(est.status, LimitStatus::Divergent);
    }

    #[test]
    fn non_finite_sample_is_divergent() {
        let mut samples = ladder_samples(1..=5, |h| h);
        samples[4].1 = f64::INFINITY;
        let est = extrapolate_limit(&samples, 1e-3).unwrap();
        assert_eq!(est.status, LimitStatus::Divergent);
    }

    #[test]
    fn rejects_bad_ladders() {
        assert!(matches!(
            extrapolate_limit(&ladder_samples(1..=3, |h| h), 1e-3),
            Err(Error::Argument(_))
        ));
        let mut samples = ladder_samples(1..=5, |h| h);
        samples.swap(1, 2);
        assert!(matches!(extrapolate_limit(&samples, 1e-3), Err(Error::Argument(_))));
        let uneven = vec![(0.5, 1.0), (0.25, 1.0), (0.1, 1.0), (0.05, 1.0)];
        assert!(matches!(extrapolate_limit(&uneven, 1e-3), Err(Error::Argument(_))));
    }

    #[test]
    fn four_samples_are_enough() {
        let samples = ladder_samples(1..=4, |h| 2.0 + h);
        let est = extrapolate_limit(&samples, 1e-9).unwrap();
        assert!((est.value - 2.0).abs() < 1e-12);
        assert_eq!(est.status, LimitStatus::Converged);
    }
}
