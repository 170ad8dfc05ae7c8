//! Quadrature weight tables for the weakly singular kernel `(t-s)^{β-1}`.

use crate::numerics::gamma_pos;

/// Below this index the closed forms are evaluated directly; above it the
/// binomial series is used to avoid cancellation between nearly equal powers.
const SERIES_THRESHOLD: usize = 8;
const SERIES_TERMS: usize = 24;

/// Generalized binomial coefficients `C(p, k)` for `k = 0..=terms`.
fn binomials(p: f64, terms: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(terms + 1);
    c.push(1.0);
    for k in 1..=terms {
        let prev = c[k - 1];
        c.push(prev * (p - k as f64 + 1.0) / k as f64);
    }
    c
}

/// Product-trapezoid weights: the piecewise-linear interpolant of the
/// integrand is integrated exactly against `(t-s)^{β-1} / Γ(β)`.
///
/// For `n` cells of width `Δ` ending at `t`,
///
/// `I^β g(t) ≈ Δ^β / Γ(β+2) · [a₀(n) g₀ + Σ_{j=1}^{n-1} w(n-j) g_j + g_n]`
///
/// with `w(m) = (m+1)^{β+1} - 2m^{β+1} + (m-1)^{β+1}` and
/// `a₀(n) = (n-1)^{β+1} - (n-1-β) n^β`.
#[derive(Debug, Clone)]
pub(crate) struct TrapezoidWeights {
    beta: f64,
    /// `interior[m] = w(m)` for `m ≥ 1`; index 0 unused.
    interior: Vec<f64>,
    binom_beta: Vec<f64>,
}

impl TrapezoidWeights {
    pub(crate) fn new(beta: f64, max_cells: usize) -> Self {
        let p = beta + 1.0;
        let binom_p = binomials(p, 2 * SERIES_TERMS);
        let binom_beta = binomials(beta, SERIES_TERMS + 1);
        let mut interior = vec![0.0; max_cells + 1];
        for (m, w) in interior.iter_mut().enumerate().skip(1) {
            *w = if m < SERIES_THRESHOLD {
                let mf = m as f64;
                (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p)
            } else {
                // m^p · 2 Σ_k C(p, 2k) m^{-2k}
                let inv2 = 1.0 / (m as f64 * m as f64);
                let mut term = inv2;
                let mut s = 0.0;
                for k in 1..SERIES_TERMS {
                    s += binom_p[2 * k] * term;
                    term *= inv2;
                }
                2.0 * (m as f64).powf(p) * s
            };
        }
        TrapezoidWeights { beta, interior, binom_beta }
    }

    fn first(&self, n: usize) -> f64 {
        let beta = self.beta;
        let m = n - 1;
        if m < SERIES_THRESHOLD {
            let nf = n as f64;
            (nf - 1.0).powf(beta + 1.0) - (nf - 1.0 - beta) * nf.powf(beta)
        } else {
            // m^{β+1} Σ_{k≥2} m^{-k} [β C(β,k-1) - C(β,k)]
            let inv = 1.0 / m as f64;
            let mut term = inv * inv;
            let mut s = 0.0;
            for k in 2..=SERIES_TERMS {
                s += (beta * self.binom_beta[k - 1] - self.binom_beta[k]) * term;
                term *= inv;
            }
            (m as f64).powf(beta + 1.0) * s
        }
    }

    /// `I^β` over the first `cells` cells of `g` (spacing `delta`).
    pub(crate) fn integrate(&self, g: &[f64], cells: usize, delta: f64) -> f64 {
        debug_assert!(cells >= 1 && cells < g.len() && cells < self.interior.len());
        let mut s = g[cells] + self.first(cells) * g[0];
        for (j, gj) in g.iter().enumerate().take(cells).skip(1) {
            s += self.interior[cells - j] * gj;
        }
        s * delta.powf(self.beta) / gamma_pos(self.beta + 2.0)
    }

    #[cfg(test)]
    fn raw_sum(&self, cells: usize) -> f64 {
        let ones = vec![1.0; cells + 1];
        self.integrate(&ones, cells, 1.0) * gamma_pos(self.beta + 2.0)
    }
}

/// `b(m) = (m+1)^{1-α} - m^{1-α}`, the cell moments of the L1 scheme.
pub(crate) fn l1_weights(alpha: f64, cells: usize) -> Vec<f64> {
    let q = 1.0 - alpha;
    (0..cells)
        .map(|m| {
            if m == 0 {
                1.0
            } else {
                let mf = m as f64;
                mf.powf(q) * (q * (1.0 / mf).ln_1p()).exp_m1()
            }
        })
        .collect()
}

/// Grünwald-Letnikov coefficients `(-1)^j C(α, j)` by the usual recurrence.
pub(crate) fn grunwald_weights(alpha: f64, count: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(count);
    let mut current = 1.0;
    for j in 0..count {
        if j > 0 {
            current *= 1.0 - (alpha + 1.0) / j as f64;
        }
        w.push(current);
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_weights_integrate_constants_exactly() {
        for beta in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let tw = TrapezoidWeights::new(beta, 5000);
            for n in [1usize, 2, 3, 7, 8, 9, 50, 4096] {
                let want = (n as f64).powf(beta) * (1.0 + beta);
                let got = tw.raw_sum(n);
                assert!(((got - want) / want).abs() < 1e-13, "beta={beta} n={n}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn series_and_direct_weights_agree_near_threshold() {
        let beta = 0.37_f64;
        let p = beta + 1.0;
        let tw = TrapezoidWeights::new(beta, 40);
        for m in SERIES_THRESHOLD..SERIES_THRESHOLD + 6 {
            let mf = m as f64;
            let direct = (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
            assert!(((tw.interior[m] - direct) / direct).abs() < 1e-11);
            let nf = (m + 1) as f64;
            let direct0 = (nf - 1.0).powf(p) - (nf - 1.0 - beta) * nf.powf(beta);
            assert!(((tw.first(m + 1) - direct0) / direct0).abs() < 1e-10);
        }
    }

    #[test]
    fn l1_weights_telescope() {
        let b = l1_weights(0.3, 100);
        let total: f64 = b.iter().sum();
        assert!((total - 100f64.powf(0.7)).abs() < 1e-12);
    }

    #[test]
    fn grunwald_weights_sum_to_zero_in_the_limit() {
        // Σ_j (-1)^j C(α,j) = 0 for α > 0; partial sums decay like n^{-α}.
        let w = grunwald_weights(0.5, 1 << 16);
        let partial: f64 = w.iter().sum();
        assert!(partial.abs() < 5e-3);
        assert_eq!(w[0], 1.0);
        assert!((w[1] + 0.5).abs() < 1e-15);
    }
}
