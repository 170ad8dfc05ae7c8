use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::u_ln_abs_u;
use crate::corpus::FuncExpr;
use crate::error::{Error, Result};
use crate::local_ops::{bc_lfd, kg_lfd, LocalConfig};

use super::{caputo, gl_derivative, jumarie, rl_derivative, rl_integral, FracOrder, Scheme, DEFAULT_NODES, ORACLE_NODES};

/// Side from which a local derivative approaches its point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Plus => 1.0,
            Direction::Minus => -1.0,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Plus => "+",
            Direction::Minus => "-",
        })
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Direction::Plus),
            "-" | "minus" => Ok(Direction::Minus),
            other => Err(Error::Parse(format!("direction must be + or -, got {other:?}"))),
        }
    }
}

/// Resolution knobs for every operator in the catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    /// Quadrature grid for RL, Caputo and Jumarie.
    pub nodes: usize,
    /// Step count for Grünwald-Letnikov sums.
    pub gl_nodes: usize,
    pub local: LocalConfig,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { nodes: DEFAULT_NODES, gl_nodes: ORACLE_NODES, local: LocalConfig::default() }
    }
}

impl Resolution {
    /// Every grid doubled; the local ladder is left unchanged.
    pub fn refined(self) -> Self {
        Resolution { nodes: self.nodes * 2, gl_nodes: self.gl_nodes * 2, local: self.local.refined() }
    }

    pub fn scheme(&self) -> Result<Scheme> {
        Scheme::new(self.nodes)
    }
}

/// A catalogued derivative-like operator with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorHandle {
    ClassicalDerivative,
    /// `I^β_{0+}`.
    RlIntegral(FracOrder),
    RlDerivative { alpha: FracOrder, base: f64 },
    Caputo { alpha: FracOrder, base: f64 },
    /// Base point fixed at 0.
    Jumarie(FracOrder),
    GrunwaldLetnikov { alpha: FracOrder, base: f64 },
    BcLocal { alpha: FracOrder, sigma: Direction },
    KgLocal { alpha: FracOrder, sigma: Direction },
    /// `d·f·ln|f|`.
    Entropy { d: FuncExpr },
    /// `c·f' + d·f·ln|f|`.
    KonigMilman { c: FuncExpr, d: FuncExpr },
}

impl OperatorHandle {
    /// Evaluate the operator applied to `f` at `t`.
    ///
    /// Local operators fail with [`Error::NotConverged`] unless the limit
    /// estimate converged.
    pub fn apply(&self, f: &FuncExpr, t: f64, res: &Resolution) -> Result<f64> {
        self.apply_with_error(f, t, res).map(|(v, _)| v)
    }

    /// Like [`apply`](Self::apply), also returning the error bar of the limit
    /// estimate for local operators (0 for the others).
    pub fn apply_with_error(&self, f: &FuncExpr, t: f64, res: &Resolution) -> Result<(f64, f64)> {
        let exact = |v: Result<f64>| v.map(|v| (v, 0.0));
        match self {
            OperatorHandle::ClassicalDerivative => exact(f.derivative()?.eval(t)),
            OperatorHandle::RlIntegral(order) => exact(rl_integral(f, *order, 0.0, t, res.scheme()?)),
            OperatorHandle::RlDerivative { alpha, base } => exact(rl_derivative(f, *alpha, *base, t, res.scheme()?)),
            OperatorHandle::Caputo { alpha, base } => exact(caputo(f, *alpha, *base, t, res.scheme()?)),
            OperatorHandle::Jumarie(alpha) => exact(jumarie(f, *alpha, t, res.scheme()?)),
            OperatorHandle::GrunwaldLetnikov { alpha, base } => exact(gl_derivative(f, *alpha, *base, t, res.gl_nodes)),
            OperatorHandle::BcLocal { alpha, sigma } => {
                converged(bc_lfd(f, *alpha, t, *sigma, &res.local)?, self, t)
            }
            OperatorHandle::KgLocal { alpha, sigma } => {
                converged(kg_lfd(f, *alpha, t, *sigma, &res.local)?, self, t)
            }
            OperatorHandle::Entropy { d } => Ok((d.eval(t)? * u_ln_abs_u(f.eval(t)?), 0.0)),
            OperatorHandle::KonigMilman { c, d } => {
                let df = f.derivative()?;
                Ok((c.eval(t)? * df.eval(t)? + d.eval(t)? * u_ln_abs_u(f.eval(t)?), 0.0))
            }
        }
    }

    /// RL, Caputo, Jumarie or Grünwald-Letnikov.
    pub fn is_nonlocal_fractional(&self) -> bool {
        matches!(
            self,
            OperatorHandle::RlDerivative { .. }
                | OperatorHandle::Caputo { .. }
                | OperatorHandle::Jumarie(_)
                | OperatorHandle::GrunwaldLetnikov { .. }
        )
    }

    /// Operators evaluated by quadrature or sums over a grid.
    pub fn is_discretized(&self) -> bool {
        matches!(
            self,
            OperatorHandle::RlIntegral(_)
                | OperatorHandle::RlDerivative { .. }
                | OperatorHandle::Caputo { .. }
                | OperatorHandle::Jumarie(_)
                | OperatorHandle::GrunwaldLetnikov { .. }
                | OperatorHandle::KgLocal { .. }
        )
    }

    /// Short stable label, e.g. `rl-deriv(0.5,0)`.
    pub fn label(&self) -> String {
        match self {
            OperatorHandle::ClassicalDerivative => "classical".into(),
            OperatorHandle::RlIntegral(o) => format!("rl-int({})", o.value()),
            OperatorHandle::RlDerivative { alpha, base } => format!("rl-deriv({},{base})", alpha.value()),
            OperatorHandle::Caputo { alpha, base } => format!("caputo({},{base})", alpha.value()),
            OperatorHandle::Jumarie(a) => format!("jumarie({})", a.value()),
            OperatorHandle::GrunwaldLetnikov { alpha, base } => format!("gl({},{base})", alpha.value()),
            OperatorHandle::BcLocal { alpha, sigma } => format!("bc-lfd({},{sigma})", alpha.value()),
            OperatorHandle::KgLocal { alpha, sigma } => format!("kg-lfd({},{sigma})", alpha.value()),
            OperatorHandle::Entropy { d } => format!("entropy({d})"),
            OperatorHandle::KonigMilman { c, d } => format!("konig-milman({c}; {d})"),
        }
    }
}

fn converged(est: crate::numerics::LimitEstimate, op: &OperatorHandle, t: f64) -> Result<(f64, f64)> {
    if est.is_converged() {
        Ok((est.value, est.error_bar))
    } else {
        Err(Error::NotConverged(format!("{} at {t}: status {}", op.label(), est.status)))
    }
}

impl fmt::Display for OperatorHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_applies() {
        let res = Resolution::default();
        let half = FracOrder::new(0.5).unwrap();
        let t1 = FuncExpr::power(1.0);
        let two_over_sqrt_pi = std::f64::consts::FRAC_2_SQRT_PI;
        for op in [
            OperatorHandle::RlDerivative { alpha: half, base: 0.0 },
            OperatorHandle::Caputo { alpha: half, base: 0.0 },
            OperatorHandle::Jumarie(half),
            OperatorHandle::GrunwaldLetnikov { alpha: half, base: 0.0 },
        ] {
            let v = op.apply(&t1, 1.0, &res).unwrap();
            assert!((v - two_over_sqrt_pi).abs() < 5e-3, "{op}: {v}");
        }
        assert_eq!(OperatorHandle::ClassicalDerivative.apply(&FuncExpr::power(2.0), 3.0, &res).unwrap(), 6.0);
        let e = OperatorHandle::Entropy { d: FuncExpr::constant(1.0) };
        assert!((e.apply(&FuncExpr::constant(std::f64::consts::E), 0.4, &res).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(e.apply(&FuncExpr::constant(0.0), 0.4, &res).unwrap(), 0.0);
    }

    #[test]
    fn local_handles_require_convergence() {
        let res = Resolution::default();
        let half = FracOrder::new(0.5).unwrap();
        let bc = OperatorHandle::BcLocal { alpha: half, sigma: Direction::Plus };
        assert_eq!(bc.apply(&FuncExpr::constant(2.0), 0.5, &res).unwrap(), 0.0);
        let w = FuncExpr::weierstrass(0.5, 2.0, 24).unwrap();
        assert!(matches!(bc.apply(&w, 0.3, &res), Err(Error::NotConverged(_))));
    }

    #[test]
    fn direction_parses() {
        assert_eq!("+".parse::<Direction>().unwrap(), Direction::Plus);
        assert_eq!("minus".parse::<Direction>().unwrap().sign(), -1.0);
        assert!("up".parse::<Direction>().is_err());
    }
}
