//! Residual checks for algebraic laws (linearity, Leibniz, chain rule,
//! constant annihilation) against any catalogued operator, plus the entropy
//! and König-Milman operators.
//!
//! Every residual is computed twice, at the requested resolution and at
//! double resolution. Twice the observed shift, floored at a round-off level,
//! is the error estimate the verdict is measured against.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{sample, FuncExpr, GridFunction, Interval};
use crate::error::{Error, Result};
use crate::frac_ops::{caputo, jumarie, FracOrder, OperatorHandle, Resolution};

/// Violated requires `max_abs > SEPARATION_FACTOR × error estimate`.
pub const SEPARATION_FACTOR: f64 = 10.0;

/// Relative round-off floor for operators evaluated pointwise in closed form.
pub const POINTWISE_FLOOR: f64 = 1e-12;
/// Relative round-off floor for quadrature- and sum-based operators.
pub const DISCRETIZED_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Satisfied,
    Violated,
    Indeterminate,
}

impl Verdict {
    pub fn classify(max_abs: f64, error_estimate: f64) -> Verdict {
        if !max_abs.is_finite() || !error_estimate.is_finite() {
            Verdict::Indeterminate
        } else if max_abs <= error_estimate {
            Verdict::Satisfied
        } else if max_abs > SEPARATION_FACTOR * error_estimate {
            Verdict::Violated
        } else {
            Verdict::Indeterminate
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualProfile {
    pub property: String,
    pub operator: String,
    pub corpus: Vec<String>,
    pub probes: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_abs: f64,
    #[serde(rename = "error_estimate")]
    pub numerical_error_estimate: f64,
    pub separation_factor: f64,
    pub verdict: Verdict,
}

impl ResidualProfile {
    pub fn from_parts(
        property: impl Into<String>,
        operator: impl Into<String>,
        corpus: Vec<String>,
        probes: Vec<f64>,
        residuals: Vec<f64>,
        numerical_error_estimate: f64,
    ) -> Self {
        let max_abs = residuals.iter().fold(0.0_f64, |m, r| if r.is_nan() { f64::NAN } else { m.max(r.abs()) });
        ResidualProfile {
            property: property.into(),
            operator: operator.into(),
            corpus,
            probes,
            residuals,
            max_abs,
            numerical_error_estimate,
            separation_factor: SEPARATION_FACTOR,
            verdict: Verdict::classify(max_abs, numerical_error_estimate),
        }
    }
}

/// `u ln|u|` extended continuously by 0 at `u = 0`.
pub fn u_ln_abs_u(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u.abs().ln()
    }
}

/// Default probe set: 8 points equispaced in `[0.1, 0.9]`.
pub fn default_probes() -> Vec<f64> {
    Interval { a: 0.1, b: 0.9 }.equispaced(8)
}

/// One residual evaluation.
struct Terms {
    residual: f64,
    /// Sum of the magnitudes of the terms, for the round-off floor.
    magnitude: f64,
    /// Error already known a priori (limit-estimate error bars).
    known_error: f64,
}

fn floor_for(op: &OperatorHandle) -> f64 {
    if op.is_discretized() {
        DISCRETIZED_FLOOR
    } else {
        POINTWISE_FLOOR
    }
}

fn profile<F>(
    property: &str,
    op: &OperatorHandle,
    corpus: Vec<String>,
    probes: &[f64],
    res: &Resolution,
    eval: F,
) -> Result<ResidualProfile>
where
    F: Fn(f64, &Resolution) -> Result<Terms> + Sync,
{
    if probes.is_empty() {
        return Err(Error::argument("no probe points"));
    }
    let fine = res.refined();
    let floor = floor_for(op);
    let rows = probes
        .par_iter()
        .map(|&t| {
            let coarse = eval(t, res)?;
            let refined = eval(t, &fine)?;
            let err = (2.0 * (coarse.residual - refined.residual).abs())
                .max(floor * (1.0 + coarse.magnitude))
                .max(coarse.known_error + refined.known_error);
            Ok((coarse.residual, err))
        })
        .collect::<Result<Vec<_>>>()?;
    let err = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(ResidualProfile::from_parts(
        property,
        op.label(),
        corpus,
        probes.to_vec(),
        rows.into_iter().map(|r| r.0).collect(),
        err,
    ))
}

/// `D(f·g) − D(f)·g − f·D(g)` at each probe.
pub fn leibniz_residual(
    op: &OperatorHandle,
    f: &FuncExpr,
    g: &FuncExpr,
    probes: &[f64],
    res: &Resolution,
) -> Result<ResidualProfile> {
    let fg = FuncExpr::product(f.clone(), g.clone());
    profile("leibniz", op, vec![f.to_string(), g.to_string()], probes, res, |t, r| {
        let (dfg, e0) = op.apply_with_error(&fg, t, r)?;
        let (df, e1) = op.apply_with_error(f, t, r)?;
        let (dg, e2) = op.apply_with_error(g, t, r)?;
        let (ft, gt) = (f.eval(t)?, g.eval(t)?);
        Ok(Terms {
            residual: dfg - df * gt - ft * dg,
            magnitude: dfg.abs() + (df * gt).abs() + (ft * dg).abs(),
            known_error: e0 + e1 * gt.abs() + e2 * ft.abs(),
        })
    })
}

/// `D(f∘g) − D(f)(g(t))·D(g)` at each probe.
pub fn chain_residual(
    op: &OperatorHandle,
    f: &FuncExpr,
    g: &FuncExpr,
    probes: &[f64],
    res: &Resolution,
) -> Result<ResidualProfile> {
    let fog = FuncExpr::compose(f.clone(), g.clone());
    profile("chain", op, vec![f.to_string(), g.to_string()], probes, res, |t, r| {
        let (dfog, e0) = op.apply_with_error(&fog, t, r)?;
        let (df, e1) = op.apply_with_error(f, g.eval(t)?, r)?;
        let (dg, e2) = op.apply_with_error(g, t, r)?;
        Ok(Terms {
            residual: dfog - df * dg,
            magnitude: dfog.abs() + (df * dg).abs(),
            known_error: e0 + e1 * dg.abs() + e2 * df.abs(),
        })
    })
}

/// `D(λf+μg) − λD(f) − μD(g)` at each probe.
pub fn linearity_residual(
    op: &OperatorHandle,
    f: &FuncExpr,
    g: &FuncExpr,
    lambda: f64,
    mu: f64,
    probes: &[f64],
    res: &Resolution,
) -> Result<ResidualProfile> {
    let combo = FuncExpr::linear_combination(lambda, f, mu, g);
    profile("linearity", op, vec![f.to_string(), g.to_string()], probes, res, |t, r| {
        let (dc, e0) = op.apply_with_error(&combo, t, r)?;
        let (df, e1) = op.apply_with_error(f, t, r)?;
        let (dg, e2) = op.apply_with_error(g, t, r)?;
        Ok(Terms {
            residual: dc - lambda * df - mu * dg,
            magnitude: dc.abs() + (lambda * df).abs() + (mu * dg).abs(),
            known_error: e0 + lambda.abs() * e1 + mu.abs() * e2,
        })
    })
}

/// `D(c)` at every probe, for every constant `c`. Probes are repeated once
/// per constant in the returned profile.
pub fn constant_annihilation_check(
    op: &OperatorHandle,
    constants: &[f64],
    probes: &[f64],
    res: &Resolution,
) -> Result<ResidualProfile> {
    if constants.is_empty() {
        return Err(Error::argument("no constants to check"));
    }
    let cases: Vec<(f64, f64)> = constants.iter().flat_map(|&c| probes.iter().map(move |&t| (c, t))).collect();
    // encode the constant index into a synthetic probe list, then map back
    let idx: Vec<f64> = (0..cases.len()).map(|i| i as f64).collect();
    let corpus = constants.iter().map(|&c| FuncExpr::constant(c).to_string()).collect();
    let mut p = profile("constant-annihilation", op, corpus, &idx, res, |i, r| {
        let (c, t) = cases[i as usize];
        let (v, e) = op.apply_with_error(&FuncExpr::constant(c), t, r)?;
        Ok(Terms { residual: v, magnitude: c.abs(), known_error: e })
    })?;
    p.probes = cases.iter().map(|&(_, t)| t).collect();
    Ok(p)
}

/// How [`caputo_jumarie_gap`] feeds `f` to the operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapPath {
    /// Both operators evaluate the closed form.
    ClosedForm,
    /// Both operators see only samples of `f` on `[0, 1]` (`nodes + 1` points).
    Grid,
}

/// `jumarie(f) − caputo(f, base 0)` at each probe.
pub fn caputo_jumarie_gap(
    f: &FuncExpr,
    alpha: FracOrder,
    probes: &[f64],
    path: GapPath,
    res: &Resolution,
) -> Result<ResidualProfile> {
    let op = OperatorHandle::Jumarie(alpha);
    let label = format!("jumarie({0}) - caputo({0},0) [{path:?}]", alpha.value());
    let grid_for = |r: &Resolution| -> Result<Option<GridFunction>> {
        match path {
            GapPath::ClosedForm => Ok(None),
            GapPath::Grid => Ok(Some(sample(f, 0.0, 1.0, r.nodes + 1)?)),
        }
    };
    let coarse_grid = grid_for(res)?;
    let fine_grid = grid_for(&res.refined())?;
    let mut p = profile("caputo-jumarie", &op, vec![f.to_string()], probes, res, |t, r| {
        let scheme = r.scheme()?;
        let grid = if r.nodes == res.nodes { &coarse_grid } else { &fine_grid };
        let (j, c) = match grid {
            Some(g) => (jumarie(g, alpha, t, scheme)?, caputo(g, alpha, 0.0, t, scheme)?),
            None => (jumarie(f, alpha, t, scheme)?, caputo(f, alpha, 0.0, t, scheme)?),
        };
        Ok(Terms { residual: j - c, magnitude: j.abs() + c.abs(), known_error: 0.0 })
    })?;
    p.operator = label;
    Ok(p)
}

/// `T(f)(x) = d(x)·f(x)·ln|f(x)|` on the nodes of `f`.
pub fn entropy_operator(d: &FuncExpr, f: &GridFunction) -> Result<GridFunction> {
    let dv: Vec<f64> = f.nodes().map(|t| d.eval(t)).collect::<Result<_>>()?;
    let mut i = 0;
    f.map(|_, u| {
        let v = dv[i] * u_ln_abs_u(u);
        i += 1;
        v
    })
}

/// `T(f)(t)` for a closed-form `f`.
pub fn entropy_value(d: &FuncExpr, f: &FuncExpr, t: f64) -> Result<f64> {
    Ok(d.eval(t)? * u_ln_abs_u(f.eval(t)?))
}

/// `T(f)(x) = c(x)·f'(x) + d(x)·f(x)·ln|f(x)|` sampled at `n` nodes of `interval`.
pub fn konig_milman_operator(
    c: &FuncExpr,
    d: &FuncExpr,
    f: &FuncExpr,
    interval: Interval,
    n: usize,
) -> Result<GridFunction> {
    if !f.has_symbolic_derivative() {
        return Err(Error::Unsupported(format!("{f} has no symbolic derivative")));
    }
    let op = OperatorHandle::KonigMilman { c: c.clone(), d: d.clone() };
    let res = Resolution::default();
    let values = interval
        .equispaced(n)
        .into_iter()
        .map(|t| op.apply(f, t, &res))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(interval.a, interval.b, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_ops::Direction;

    fn half() -> FracOrder {
        FracOrder::new(0.5).unwrap()
    }

    fn rl() -> OperatorHandle {
        OperatorHandle::RlDerivative { alpha: half(), base: 0.0 }
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(Verdict::classify(0.0, 0.0), Verdict::Satisfied);
        assert_eq!(Verdict::classify(1e-3, 1e-3), Verdict::Satisfied);
        assert_eq!(Verdict::classify(1e-2, 1e-3), Verdict::Indeterminate);
        assert_eq!(Verdict::classify(1.1e-2, 1e-3), Verdict::Violated);
        assert_eq!(Verdict::classify(f64::NAN, 1e-3), Verdict::Indeterminate);
    }

    #[test]
    fn classical_leibniz_and_chain() {
        let res = Resolution::default();
        let p = FuncExpr::sum(vec![FuncExpr::constant(1.0), FuncExpr::power(2.0)]);
        let q = FuncExpr::power(3.0);
        let op = OperatorHandle::ClassicalDerivative;
        let l = leibniz_residual(&op, &p, &q, &default_probes(), &res).unwrap();
        assert_eq!(l.verdict, Verdict::Satisfied);
        assert!(l.max_abs <= 1e-12);
        let c = chain_residual(&op, &FuncExpr::power(2.0), &q, &default_probes(), &res).unwrap();
        assert_eq!(c.verdict, Verdict::Satisfied);
        assert!(c.max_abs <= 1e-12);
    }

    #[test]
    fn rl_and_jumarie_leibniz_violated() {
        let res = Resolution::default();
        let t = FuncExpr::power(1.0);
        for op in [rl(), OperatorHandle::Jumarie(half())] {
            let p = leibniz_residual(&op, &t, &t, &[1.0], &res).unwrap();
            assert!((p.residuals[0] + 0.752_252_778_063_675).abs() < 5e-3, "{op}: {p:?}");
            assert_eq!(p.verdict, Verdict::Violated);
        }
    }

    #[test]
    fn rl_chain_violated() {
        let t2 = FuncExpr::power(2.0);
        let p = chain_residual(&rl(), &t2, &t2, &[1.0], &Resolution::default()).unwrap();
        assert!((p.residuals[0] + 0.200_215_062_871_986_9).abs() < 5e-3, "{p:?}");
        assert_eq!(p.verdict, Verdict::Violated);
    }

    #[test]
    fn entropy_chain_violated() {
        let op = OperatorHandle::Entropy { d: FuncExpr::constant(1.0) };
        let p = chain_residual(&op, &FuncExpr::exp(1.0), &FuncExpr::power(1.0), &default_probes(), &Resolution::default())
            .unwrap();
        assert_eq!(p.verdict, Verdict::Violated);
    }

    #[test]
    fn linearity() {
        let res = Resolution::default();
        let p = linearity_residual(&rl(), &FuncExpr::exp(1.0), &FuncExpr::power(1.5), 2.0, -3.0, &default_probes(), &res)
            .unwrap();
        assert_eq!(p.verdict, Verdict::Satisfied, "{p:?}");
        let op = OperatorHandle::Entropy { d: FuncExpr::constant(1.0) };
        let p = linearity_residual(&op, &FuncExpr::constant(2.0), &FuncExpr::constant(3.0), 1.0, 1.0, &[0.5], &res).unwrap();
        assert!((p.residuals[0] - 3.365_058_335_046_28).abs() < 1e-12);
        assert_eq!(p.verdict, Verdict::Violated);
        let p = linearity_residual(
            &OperatorHandle::ClassicalDerivative,
            &FuncExpr::power(2.0),
            &FuncExpr::cos(3.0),
            2.0,
            -3.0,
            &default_probes(),
            &res,
        )
        .unwrap();
        assert!(p.max_abs <= 1e-12);
        assert_eq!(p.verdict, Verdict::Satisfied);
    }

    #[test]
    fn constant_annihilation() {
        let res = Resolution::default();
        let cs = [1.0, -2.5, 7.0];
        let p = constant_annihilation_check(&OperatorHandle::Caputo { alpha: half(), base: 0.0 }, &cs, &default_probes(), &res)
            .unwrap();
        assert_eq!(p.verdict, Verdict::Satisfied);
        assert_eq!(p.max_abs, 0.0);
        assert_eq!(p.probes.len(), 24);
        let p = constant_annihilation_check(&rl(), &[1.0], &[1.0], &res).unwrap();
        assert!((p.residuals[0] - 0.564_189_583_547_756_3).abs() < 5e-3);
        assert_eq!(p.verdict, Verdict::Violated);
        let bc = OperatorHandle::BcLocal { alpha: half(), sigma: Direction::Plus };
        let p = constant_annihilation_check(&bc, &cs, &default_probes(), &res).unwrap();
        assert_eq!(p.verdict, Verdict::Satisfied);
    }

    #[test]
    fn gap_examples() {
        let res = Resolution::default();
        let p = caputo_jumarie_gap(&FuncExpr::power(1.0), half(), &default_probes(), GapPath::ClosedForm, &res).unwrap();
        assert!(p.max_abs <= 1e-6, "{p:?}");
        assert_eq!(p.verdict, Verdict::Satisfied);
        let p = caputo_jumarie_gap(&FuncExpr::constant(7.0), half(), &default_probes(), GapPath::ClosedForm, &res).unwrap();
        assert_eq!(p.max_abs, 0.0);
        assert_eq!(p.verdict, Verdict::Satisfied);
        let a = FracOrder::new(0.3).unwrap();
        let p = caputo_jumarie_gap(&FuncExpr::exp(1.0), a, &default_probes(), GapPath::Grid, &res).unwrap();
        assert!(p.max_abs <= 5e-3, "{p:?}");
    }

    #[test]
    fn entropy_operator_values() {
        let d = FuncExpr::constant(1.0);
        let one = sample(&FuncExpr::constant(1.0), 0.0, 1.0, 5).unwrap();
        assert!(entropy_operator(&d, &one).unwrap().samples().iter().all(|&v| v == 0.0));
        let e = sample(&FuncExpr::constant(std::f64::consts::E), 0.0, 1.0, 5).unwrap();
        for v in entropy_operator(&d, &e).unwrap().samples() {
            assert!((v - std::f64::consts::E).abs() < 1e-15);
        }
        let lin = sample(&FuncExpr::power(1.0), 0.0, 1.0, 3).unwrap();
        assert_eq!(entropy_operator(&d, &lin).unwrap().samples()[0], 0.0);
    }

    #[test]
    fn entropy_and_konig_milman_are_derivations() {
        let res = Resolution::default();
        let f = FuncExpr::exp(1.0) + FuncExpr::constant(0.5);
        let g = FuncExpr::power(2.0) + FuncExpr::constant(1.0);
        let ent = OperatorHandle::Entropy { d: FuncExpr::cos(1.0) };
        let p = leibniz_residual(&ent, &f, &g, &default_probes(), &res).unwrap();
        assert_eq!(p.verdict, Verdict::Satisfied);
        let km = OperatorHandle::KonigMilman { c: FuncExpr::power(1.0), d: FuncExpr::constant(2.0) };
        let p = leibniz_residual(&km, &f, &g, &default_probes(), &res).unwrap();
        assert_eq!(p.verdict, Verdict::Satisfied, "{p:?}");
    }

    #[test]
    fn konig_milman_reductions() {
        let f = FuncExpr::exp(2.0);
        let iv = Interval::default();
        let classical = konig_milman_operator(&FuncExpr::constant(1.0), &FuncExpr::constant(0.0), &f, iv, 5).unwrap();
        for (t, v) in classical.nodes().zip(classical.samples()) {
            assert!((v - 2.0 * (2.0 * t).exp()).abs() < 1e-12);
        }
        let ent = konig_milman_operator(&FuncExpr::constant(0.0), &FuncExpr::constant(1.0), &f, iv, 5).unwrap();
        let want = entropy_operator(&FuncExpr::constant(1.0), &sample(&f, 0.0, 1.0, 5).unwrap()).unwrap();
        for (a, b) in ent.samples().iter().zip(want.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
        let w = FuncExpr::weierstrass(0.5, 2.0, 4).unwrap();
        assert!(matches!(
            konig_milman_operator(&FuncExpr::constant(1.0), &FuncExpr::constant(0.0), &w, iv, 5),
            Err(Error::Unsupported(_))
        ));
    }
}
