//! Local fractional derivatives: the difference-quotient (BC) estimator and
//! the Kolwankar-Gangal (KG) estimator, each read off as a one-sided limit
//! over a dyadic ladder of step sizes.
//!
//! Whether the limit exists is never decided symbolically. An estimate is
//! trusted only when [`extrapolate_limit`] reports `Converged`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{FuncExpr, Interval};
use crate::error::{Error, Result};
use crate::frac_ops::{rl_derivative, Direction, FnIntegrand, FracOrder, Scheme};
use crate::numerics::{dyadic_ladder, extrapolate_limit, gamma_pos, LimitEstimate};

/// Ladder and inner-grid settings shared by both estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalConfig {
    /// Largest step of the ladder.
    pub h0: f64,
    pub scales: usize,
    pub min_scales: usize,
    /// Passed to [`extrapolate_limit`].
    pub tolerance: f64,
    /// Grid nodes per KG window `[y, y + h]`.
    pub kg_nodes: usize,
    pub domain: Interval,
}

impl Default for LocalConfig {
    fn default() -> Self {
        LocalConfig {
            h0: 0.1,
            scales: 13,
            min_scales: 4,
            tolerance: 1e-3,
            kg_nodes: 256,
            domain: Interval::default(),
        }
    }
}

impl LocalConfig {
    pub fn refined(self) -> Self {
        LocalConfig { kg_nodes: self.kg_nodes * 2, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    /// Difference quotient `Γ(1+α) σ (f(y+σh) - f(y)) / h^α`.
    Bc,
    /// RL derivative of `σ (f - f(y))` with base point `y`, evaluated at `y + σh`.
    Kg,
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Estimator::Bc => "bc",
            Estimator::Kg => "kg",
        })
    }
}

/// One evaluated local derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalProbe {
    pub y: f64,
    pub sigma: Direction,
    pub alpha: FracOrder,
    pub estimator: Estimator,
    pub ladder: Vec<f64>,
    pub result: LimitEstimate,
}

/// Steps `h` such that `y + σh` stays inside the domain.
///
/// Steps that leave the domain are dropped from the coarse end; if fewer than
/// `min_scales` remain the ladder is extended downwards. Steps at or below the
/// finest scale resolved by a truncated series are dropped as well.
pub fn ladder_for(f: &FuncExpr, y: f64, sigma: Direction, cfg: &LocalConfig) -> Result<Vec<f64>> {
    let d = cfg.domain;
    if !d.contains(y) {
        return Err(Error::domain(format!("probe point {y} outside [{}, {}]", d.a, d.b)));
    }
    let room = match sigma {
        Direction::Plus => d.b - y,
        Direction::Minus => y - d.a,
    };
    if !(room > 0.0) {
        return Err(Error::domain(format!("no room on the {sigma} side of y = {y}")));
    }
    let first = (0..64)
        .find(|&k| cfg.h0 * 0.5_f64.powi(k) <= room)
        .ok_or_else(|| Error::domain(format!("y = {y} is too close to the boundary")))? as usize;
    let count = cfg.scales.saturating_sub(first).max(cfg.min_scales);
    let floor = f.resolution_scale().unwrap_or(0.0);
    let ladder: Vec<f64> = dyadic_ladder(cfg.h0, first + count)
        .into_iter()
        .skip(first)
        .filter(|&h| h > floor)
        .collect();
    if ladder.len() < cfg.min_scales {
        return Err(Error::domain(format!(
            "only {} ladder scales fit at y = {y} (need {})",
            ladder.len(),
            cfg.min_scales
        )));
    }
    Ok(ladder)
}

/// Raw difference quotients on the ladder.
pub fn bc_quotients(f: &FuncExpr, alpha: FracOrder, y: f64, sigma: Direction, cfg: &LocalConfig) -> Result<Vec<(f64, f64)>> {
    let ladder = ladder_for(f, y, sigma, cfg)?;
    let fy = f.eval(y)?;
    let scale = gamma_pos(1.0 + alpha.value()) * sigma.sign();
    ladder
        .into_iter()
        .map(|h| {
            let fx = f.eval(y + sigma.sign() * h)?;
            Ok((h, scale * (fx - fy) / h.powf(alpha.value())))
        })
        .collect()
}

/// Raw KG window values on the ladder.
pub fn kg_values(f: &FuncExpr, alpha: FracOrder, y: f64, sigma: Direction, cfg: &LocalConfig) -> Result<Vec<(f64, f64)>> {
    let ladder = ladder_for(f, y, sigma, cfg)?;
    let fy = f.eval(y)?;
    let scheme = Scheme::new(cfg.kg_nodes)?;
    let d = cfg.domain;
    ladder
        .into_iter()
        .map(|h| {
            let v = match sigma {
                Direction::Plus => {
                    let window = FnIntegrand {
                        f: |s: f64| Ok(f.eval(s)? - fy),
                        support: Some(Interval { a: y, b: d.b }),
                    };
                    rl_derivative(&window, alpha, y, y + h, scheme)?
                }
                Direction::Minus => {
                    // right-sided derivative at y - h, reflected onto [0, h]
                    let window = FnIntegrand {
                        f: |u: f64| Ok(fy - f.eval(y - u)?),
                        support: Some(Interval { a: 0.0, b: y - d.a }),
                    };
                    rl_derivative(&window, alpha, 0.0, h, scheme)?
                }
            };
            Ok((h, v))
        })
        .collect()
}

/// Difference-quotient local fractional derivative.
pub fn bc_lfd(f: &FuncExpr, alpha: FracOrder, y: f64, sigma: Direction, cfg: &LocalConfig) -> Result<LimitEstimate> {
    extrapolate_limit(&bc_quotients(f, alpha, y, sigma, cfg)?, cfg.tolerance)
}

/// Kolwankar-Gangal local fractional derivative.
pub fn kg_lfd(f: &FuncExpr, alpha: FracOrder, y: f64, sigma: Direction, cfg: &LocalConfig) -> Result<LimitEstimate> {
    extrapolate_limit(&kg_values(f, alpha, y, sigma, cfg)?, cfg.tolerance)
}

pub fn probe(
    f: &FuncExpr,
    alpha: FracOrder,
    y: f64,
    sigma: Direction,
    estimator: Estimator,
    cfg: &LocalConfig,
) -> Result<LocalProbe> {
    let values = match estimator {
        Estimator::Bc => bc_quotients(f, alpha, y, sigma, cfg)?,
        Estimator::Kg => kg_values(f, alpha, y, sigma, cfg)?,
    };
    let result = extrapolate_limit(&values, cfg.tolerance)?;
    Ok(LocalProbe {
        y,
        sigma,
        alpha,
        estimator,
        ladder: values.iter().map(|&(h, _)| h).collect(),
        result,
    })
}

/// Side-by-side KG and BC estimates at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub kg: LimitEstimate,
    pub bc: LimitEstimate,
    /// `|kg - bc|`, present only when both converged.
    pub gap: Option<f64>,
    /// Note on truncated series inside `f`.
    pub caveat: Option<String>,
}

pub fn kg_bc_agreement(f: &FuncExpr, alpha: FracOrder, y: f64, sigma: Direction, cfg: &LocalConfig) -> Result<Agreement> {
    let kg = kg_lfd(f, alpha, y, sigma, cfg)?;
    let bc = bc_lfd(f, alpha, y, sigma, cfg)?;
    let gap = (kg.is_converged() && bc.is_converged()).then(|| (kg.value - bc.value).abs());
    let caveat = f.truncation_tail_bound().map(|tail| {
        format!(
            "truncated series: sup-norm tail bound {tail:.3e}; behaviour below scale {:.3e} is smooth",
            f.resolution_scale().unwrap_or(0.0)
        )
    });
    Ok(Agreement { kg, bc, gap, caveat })
}

/// Result of sampling a local derivative across an interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub declared_holder: f64,
    pub tolerance: f64,
    pub probes: Vec<LocalProbe>,
    /// Share of probes that converged to a value within `tolerance` of 0.
    pub fraction: f64,
}

impl Sweep {
    /// CSV `y,estimate,status,error_bar`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["y", "estimate", "status", "error_bar"])?;
        for p in &self.probes {
            w.write_record([
                format!("{:.16e}", p.y),
                format!("{:.16e}", p.result.value),
                p.result.status.to_string(),
                format!("{:.16e}", p.result.error_bar),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Probe `m` equispaced points of `interval` (σ = +) and report how many
/// local derivatives are converged zeros.
pub fn triviality_sweep(
    f: &FuncExpr,
    alpha: FracOrder,
    interval: Interval,
    m: usize,
    estimator: Estimator,
    tolerance: f64,
    cfg: &LocalConfig,
) -> Result<Sweep> {
    let declared_holder = f
        .declared_holder()
        .ok_or_else(|| Error::argument(format!("{f} has no declared Hölder exponent")))?;
    if m == 0 {
        return Err(Error::argument("sweep needs at least one probe point"));
    }
    let probes = interval
        .equispaced(m)
        .into_par_iter()
        .map(|y| probe(f, alpha, y, Direction::Plus, estimator, cfg))
        .collect::<Result<Vec<_>>>()?;
    let hits = probes
        .iter()
        .filter(|p| p.result.is_converged() && p.result.value.abs() <= tolerance)
        .count();
    Ok(Sweep { declared_holder, tolerance, fraction: hits as f64 / m as f64, probes })
}
