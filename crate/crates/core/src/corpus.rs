//! Closed-form test functions, their exact evaluation, and uniform-grid sampling.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::argument(format!("invalid interval [{a}, {b}]")));
        }
        Ok(Interval { a, b })
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (self.b - self.a);
        t >= self.a - slack && t <= self.b + slack
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// `m` equispaced points including both endpoints.
    pub fn equispaced(&self, m: usize) -> Vec<f64> {
        match m {
            0 => Vec::new(),
            1 => vec![0.5 * (self.a + self.b)],
            _ => (0..m).map(|i| self.grid_point(i, m)).collect(),
        }
    }
}

impl Interval {
    /// Node `i` of an `m`-point grid; the last node is `b` exactly.
    fn grid_point(&self, i: usize, m: usize) -> f64 {
        if i + 1 == m {
            self.b
        } else {
            self.a + (self.b - self.a) * i as f64 / (m - 1) as f64
        }
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval { a: 0.0, b: 1.0 }
    }
}

/// Truncated Weierstrass function `Σ_{n=0}^{N} q^{-αn} cos(q^n t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weierstrass {
    pub alpha: f64,
    pub q: f64,
    pub terms: u32,
}

impl Weierstrass {
    pub const DEFAULT_Q: f64 = 2.0;
    pub const DEFAULT_TERMS: u32 = 24;

    pub fn new(alpha: f64, q: f64, terms: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::argument(format!("Weierstrass order must lie in (0,1), got {alpha}")));
        }
        if !(q > 1.0 && q.is_finite()) {
            return Err(Error::argument(format!("Weierstrass base must exceed 1, got {q}")));
        }
        if terms == 0 {
            return Err(Error::argument("Weierstrass truncation needs N >= 1"));
        }
        Ok(Weierstrass { alpha, q, terms })
    }

    /// Sup-norm bound on everything dropped after index `terms`.
    pub fn tail_bound(&self) -> f64 {
        let r = self.q.powf(-self.alpha);
        r.powf(self.terms as f64 + 1.0) / (1.0 - r)
    }

    /// Finest oscillation scale still represented, `q^{-N}`.
    pub fn resolution_scale(&self) -> f64 {
        self.q.powf(-(self.terms as f64))
    }

    fn eval(&self, t: f64) -> f64 {
        let damping = self.q.powf(-self.alpha);
        let mut amp = 1.0;
        let mut freq = 1.0;
        let mut sum = 0.0;
        for _ in 0..=self.terms {
            sum += amp * (freq * t).cos();
            amp *= damping;
            freq *= self.q;
        }
        sum
    }
}

/// Symbolic function descriptor with exact pointwise evaluation.
///
/// `Sin` is not a corpus constructor; it only appears as the derivative of
/// `Cos`. Monomials built through [`FuncExpr::monomial`] have exponent ≥ 0,
/// while symbolic derivatives may carry negative exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FuncExpr {
    Constant(f64),
    Monomial { coef: f64, exponent: f64 },
    Exp { rate: f64 },
    Cos { freq: f64 },
    Sin { freq: f64 },
    Sum(Vec<FuncExpr>),
    Product(Box<FuncExpr>, Box<FuncExpr>),
    Compose { outer: Box<FuncExpr>, inner: Box<FuncExpr> },
    /// `inner(t) - inner(base)`.
    ShiftByValueAt { inner: Box<FuncExpr>, base: f64 },
    Weierstrass(Weierstrass),
}

impl FuncExpr {
    pub fn constant(c: f64) -> Self {
        FuncExpr::Constant(c)
    }

    pub fn monomial(coef: f64, exponent: f64) -> Result<Self> {
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(Error::argument(format!("monomial exponent must be >= 0, got {exponent}")));
        }
        Ok(FuncExpr::Monomial { coef, exponent })
    }

    /// `t^exponent`, panicking on a negative exponent. Meant for literals.
    pub fn power(exponent: f64) -> Self {
        Self::monomial(1.0, exponent).expect("non-negative exponent")
    }

    pub fn exp(rate: f64) -> Self {
        FuncExpr::Exp { rate }
    }

    pub fn cos(freq: f64) -> Self {
        FuncExpr::Cos { freq }
    }

    pub fn weierstrass(alpha: f64, q: f64, terms: u32) -> Result<Self> {
        Ok(FuncExpr::Weierstrass(Weierstrass::new(alpha, q, terms)?))
    }

    pub fn sum(parts: Vec<FuncExpr>) -> Self {
        FuncExpr::Sum(parts)
    }

    pub fn product(f: FuncExpr, g: FuncExpr) -> Self {
        FuncExpr::Product(Box::new(f), Box::new(g))
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: FuncExpr, inner: FuncExpr) -> Self {
        FuncExpr::Compose { outer: Box::new(outer), inner: Box::new(inner) }
    }

    pub fn shifted(self, base: f64) -> Self {
        FuncExpr::ShiftByValueAt { inner: Box::new(self), base }
    }

    pub fn scaled(self, factor: f64) -> Self {
        FuncExpr::product(FuncExpr::Constant(factor), self)
    }

    /// `λ·f + μ·g`.
    pub fn linear_combination(lambda: f64, f: &FuncExpr, mu: f64, g: &FuncExpr) -> Self {
        FuncExpr::Sum(vec![f.clone().scaled(lambda), g.clone().scaled(mu)])
    }

    /// Pointwise value; a domain error when the expression is not a finite
    /// real number at `t` (negative base under a fractional power, pole of a
    /// derivative monomial).
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = self.eval_raw(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("{self} is not finite at t = {t}")))
        }
    }

    /// As [`FuncExpr::eval`], additionally requiring `t ∈ domain`.
    pub fn eval_in(&self, t: f64, domain: &Interval) -> Result<f64> {
        if !domain.contains(t) {
            return Err(Error::domain(format!(
                "t = {t} outside [{}, {}]",
                domain.a, domain.b
            )));
        }
        self.eval(t)
    }

    fn eval_raw(&self, t: f64) -> Result<f64> {
        Ok(match self {
            FuncExpr::Constant(c) => *c,
            FuncExpr::Monomial { coef, exponent } => coef * power_of(t, *exponent)?,
            FuncExpr::Exp { rate } => (rate * t).exp(),
            FuncExpr::Cos { freq } => (freq * t).cos(),
            FuncExpr::Sin { freq } => (freq * t).sin(),
            FuncExpr::Sum(parts) => {
                let mut s = 0.0;
                for p in parts {
                    s += p.eval_raw(t)?;
                }
                s
            }
            FuncExpr::Product(f, g) => f.eval_raw(t)? * g.eval_raw(t)?,
            FuncExpr::Compose { outer, inner } => outer.eval_raw(inner.eval_raw(t)?)?,
            FuncExpr::ShiftByValueAt { inner, base } => {
                if t == *base {
                    0.0
                } else {
                    inner.eval_raw(t)? - inner.eval_raw(*base)?
                }
            }
            FuncExpr::Weierstrass(w) => w.eval(t),
        })
    }

    /// Hölder exponent implied by the constructors, on bounded subsets of
    /// `[0, ∞)`. Compositions are left undeclared.
    pub fn declared_holder(&self) -> Option<f64> {
        match self {
            FuncExpr::Constant(_) | FuncExpr::Exp { .. } | FuncExpr::Cos { .. } | FuncExpr::Sin { .. } => {
                Some(1.0)
            }
            FuncExpr::Monomial { exponent, .. } => {
                if *exponent == 0.0 || *exponent >= 1.0 {
                    Some(1.0)
                } else if *exponent > 0.0 {
                    Some(*exponent)
                } else {
                    None
                }
            }
            FuncExpr::Sum(parts) => parts
                .iter()
                .map(FuncExpr::declared_holder)
                .try_fold(1.0_f64, |acc, h| h.map(|h| acc.min(h))),
            FuncExpr::Product(f, g) => Some(f.declared_holder()?.min(g.declared_holder()?)),
            FuncExpr::Compose { .. } => None,
            FuncExpr::ShiftByValueAt { inner, .. } => inner.declared_holder(),
            FuncExpr::Weierstrass(w) => Some(w.alpha),
        }
    }

    /// Finest length scale resolved by the expression, if it has one.
    pub fn resolution_scale(&self) -> Option<f64> {
        match self {
            FuncExpr::Weierstrass(w) => Some(w.resolution_scale()),
            FuncExpr::Sum(parts) => parts.iter().filter_map(FuncExpr::resolution_scale).reduce(f64::min),
            FuncExpr::Product(f, g) | FuncExpr::Compose { outer: f, inner: g } => {
                match (f.resolution_scale(), g.resolution_scale()) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                }
            }
            FuncExpr::ShiftByValueAt { inner, .. } => inner.resolution_scale(),
            _ => None,
        }
    }

    /// Sum of the sup-norm tail bounds of every truncated series inside.
    pub fn truncation_tail_bound(&self) -> Option<f64> {
        match self {
            FuncExpr::Weierstrass(w) => Some(w.tail_bound()),
            FuncExpr::Sum(parts) => parts.iter().filter_map(FuncExpr::truncation_tail_bound).reduce(|x, y| x + y),
            FuncExpr::Product(f, g) | FuncExpr::Compose { outer: f, inner: g } => {
                match (f.truncation_tail_bound(), g.truncation_tail_bound()) {
                    (Some(x), Some(y)) => Some(x + y),
                    (x, y) => x.or(y),
                }
            }
            FuncExpr::ShiftByValueAt { inner, .. } => inner.truncation_tail_bound(),
            _ => None,
        }
    }

    /// Symbolic derivative.
    pub fn derivative(&self) -> Result<FuncExpr> {
        Ok(match self {
            FuncExpr::Constant(_) => FuncExpr::Constant(0.0),
            FuncExpr::Monomial { coef, exponent } => {
                if *exponent == 0.0 {
                    FuncExpr::Constant(0.0)
                } else {
                    FuncExpr::Monomial { coef: coef * exponent, exponent: exponent - 1.0 }
                }
            }
            FuncExpr::Exp { rate } => FuncExpr::Exp { rate: *rate }.scaled(*rate),
            FuncExpr::Cos { freq } => FuncExpr::Sin { freq: *freq }.scaled(-freq),
            FuncExpr::Sin { freq } => FuncExpr::Cos { freq: *freq }.scaled(*freq),
            FuncExpr::Sum(parts) => {
                FuncExpr::Sum(parts.iter().map(FuncExpr::derivative).collect::<Result<_>>()?)
            }
            FuncExpr::Product(f, g) => FuncExpr::Sum(vec![
                FuncExpr::product(f.derivative()?, (**g).clone()),
                FuncExpr::product((**f).clone(), g.derivative()?),
            ]),
            FuncExpr::Compose { outer, inner } => FuncExpr::product(
                FuncExpr::compose(outer.derivative()?, (**inner).clone()),
                inner.derivative()?,
            ),
            FuncExpr::ShiftByValueAt { inner, .. } => inner.derivative()?,
            FuncExpr::Weierstrass(_) => {
                return Err(Error::Unsupported(format!("{self} has no symbolic derivative")))
            }
        })
    }

    pub fn has_symbolic_derivative(&self) -> bool {
        self.derivative().is_ok()
    }
}

fn power_of(t: f64, exponent: f64) -> Result<f64> {
    if exponent == 0.0 {
        return Ok(1.0);
    }
    if exponent.fract() == 0.0 && exponent.abs() < i32::MAX as f64 {
        return Ok(t.powi(exponent as i32));
    }
    if t < 0.0 {
        return Err(Error::domain(format!(
            "fractional power {exponent} of negative argument {t}"
        )));
    }
    Ok(t.powf(exponent))
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncExpr::Constant(c) => write!(f, "const:{c}"),
            FuncExpr::Monomial { coef, exponent } => write!(f, "monomial:{coef},{exponent}"),
            FuncExpr::Exp { rate } => write!(f, "exp:{rate}"),
            FuncExpr::Cos { freq } => write!(f, "cos:{freq}"),
            FuncExpr::Sin { freq } => write!(f, "sin:{freq}"),
            FuncExpr::Sum(parts) => {
                f.write_str("sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            FuncExpr::Product(a, b) => write!(f, "mul({a}, {b})"),
            FuncExpr::Compose { outer, inner } => write!(f, "compose({outer}, {inner})"),
            FuncExpr::ShiftByValueAt { inner, base } => write!(f, "shift({inner}, {base})"),
            FuncExpr::Weierstrass(w) => write!(f, "weierstrass:{},{},{}", w.alpha, w.q, w.terms),
        }
    }
}

impl std::str::FromStr for FuncExpr {
    type Err = Error;

    /// Parses the atomic constructors: `const:c`, `monomial:coef,exponent`,
    /// `exp:rate`, `cos:freq`, `weierstrass:alpha,q,N`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `kind:args`, got `{s}`")))?;
        let nums = args
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{a}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        let want = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("`{kind}` takes {n} argument(s), got {}", nums.len())))
            }
        };
        match kind.trim() {
            "const" => {
                want(1)?;
                Ok(FuncExpr::Constant(nums[0]))
            }
            "monomial" => {
                want(2)?;
                FuncExpr::monomial(nums[0], nums[1]).map_err(|e| Error::Parse(e.to_string()))
            }
            "exp" => {
                want(1)?;
                Ok(FuncExpr::exp(nums[0]))
            }
            "cos" => {
                want(1)?;
                Ok(FuncExpr::cos(nums[0]))
            }
            "weierstrass" => {
                want(3)?;
                if nums[2].fract() != 0.0 || nums[2] < 1.0 {
                    return Err(Error::Parse(format!("truncation must be a positive integer, got {}", nums[2])));
                }
                FuncExpr::weierstrass(nums[0], nums[1], nums[2] as u32)
                    .map_err(|e| Error::Parse(e.to_string()))
            }
            other => Err(Error::Parse(format!("unknown function kind `{other}`"))),
        }
    }
}

impl std::ops::Add for FuncExpr {
    type Output = FuncExpr;

    fn add(self, rhs: FuncExpr) -> FuncExpr {
        FuncExpr::Sum(vec![self, rhs])
    }
}

impl std::ops::Mul for FuncExpr {
    type Output = FuncExpr;

    fn mul(self, rhs: FuncExpr) -> FuncExpr {
        FuncExpr::product(self, rhs)
    }
}

/// A continuous witness `g` with `g³ = f`.
///
/// Only constructors whose cube root is again closed-form are handled; for
/// anything else sample first and use [`GridFunction::cube_root`].
pub fn cube_root_witness(f: &FuncExpr) -> Result<FuncExpr> {
    Ok(match f {
        FuncExpr::Constant(c) => FuncExpr::Constant(c.cbrt()),
        FuncExpr::Monomial { coef, exponent } => {
            FuncExpr::Monomial { coef: coef.cbrt(), exponent: exponent / 3.0 }
        }
        FuncExpr::Exp { rate } => FuncExpr::Exp { rate: rate / 3.0 },
        FuncExpr::Product(a, b) => FuncExpr::product(cube_root_witness(a)?, cube_root_witness(b)?),
        FuncExpr::Compose { outer, inner } => {
            FuncExpr::compose(cube_root_witness(outer)?, (**inner).clone())
        }
        other => {
            return Err(Error::Unsupported(format!(
                "no closed-form cube root for {other}; sample it and take the nodewise root"
            )))
        }
    })
}

/// Samples on the uniform grid `t_i = a + i·(b-a)/(n-1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    a: f64,
    b: f64,
    samples: Vec<f64>,
}

impl GridFunction {
    pub fn new(a: f64, b: f64, samples: Vec<f64>) -> Result<Self> {
        Interval::new(a, b)?;
        if samples.len() < 2 {
            return Err(Error::argument(format!("grid needs at least 2 nodes, got {}", samples.len())));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::argument(format!("sample {i} is not finite")));
        }
        Ok(GridFunction { a, b, samples })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn interval(&self) -> Interval {
        Interval { a: self.a, b: self.b }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.samples.len() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.interval().grid_point(i, self.samples.len())
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(move |i| self.node(i))
    }

    /// Piecewise-linear interpolant; a domain error outside `[a, b]`.
    pub fn interpolate(&self, t: f64) -> Result<f64> {
        if !self.interval().contains(t) {
            return Err(Error::domain(format!("t = {t} outside grid [{}, {}]", self.a, self.b)));
        }
        let last = self.samples.len() - 1;
        let x = ((t - self.a) / self.spacing()).clamp(0.0, last as f64);
        let i = (x.floor() as usize).min(last - 1);
        // nodes return their sample exactly, whatever the rounding of x
        for k in [i, i + 1] {
            if t == self.node(k) {
                return Ok(self.samples[k]);
            }
        }
        let w = x - i as f64;
        Ok(self.samples[i] * (1.0 - w) + self.samples[i + 1] * w)
    }

    /// Nodewise signed cube root.
    pub fn cube_root(&self) -> GridFunction {
        GridFunction { a: self.a, b: self.b, samples: self.samples.iter().map(|v| v.cbrt()).collect() }
    }

    pub fn map(&self, mut f: impl FnMut(f64, f64) -> f64) -> Result<GridFunction> {
        let samples = self.nodes().zip(&self.samples).map(|(t, &v)| f(t, v)).collect();
        GridFunction::new(self.a, self.b, samples)
    }

    /// CSV with header `t,value` and 17 significant digits per number.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "value"])?;
        for (t, v) in self.nodes().zip(&self.samples) {
            w.write_record([format!("{t:.16e}"), format!("{v:.16e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads the `t,value` format back, checking that the nodes are uniform.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        if headers.len() < 2 || &headers[0] != "t" || &headers[1] != "value" {
            return Err(Error::Parse(format!("expected header `t,value`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
            ts.push(parse(&rec[0])?);
            vs.push(parse(&rec[1])?);
        }
        if ts.len() < 2 {
            return Err(Error::Parse("grid CSV needs at least two rows".into()));
        }
        let (a, b) = (ts[0], ts[ts.len() - 1]);
        let h = (b - a) / (ts.len() - 1) as f64;
        for (i, t) in ts.iter().enumerate() {
            if (t - (a + i as f64 * h)).abs() > 1e-9 * (b - a).abs().max(1.0) {
                return Err(Error::Parse(format!("row {i}: node {t} breaks the uniform spacing")));
            }
        }
        GridFunction::new(a, b, vs)
    }
}

/// `samples[i] = f(t_i)` on `n` uniform nodes of `[a, b]`.
pub fn sample(f: &FuncExpr, a: f64, b: f64, n: usize) -> Result<GridFunction> {
    let interval = Interval::new(a, b)?;
    if n < 2 {
        return Err(Error::argument(format!("grid needs at least 2 nodes, got {n}")));
    }
    let samples = interval
        .equispaced(n)
        .into_iter()
        .map(|t| f.eval(t))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(a, b, samples)
}

/// A named member of the test corpus with the regularity facts the checks
/// rely on.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub f: FuncExpr,
    /// Absolutely continuous on `[0, 1]`.
    pub absolutely_continuous: bool,
    /// Continuously differentiable on `[0, 1]`, including the base point.
    pub c1: bool,
    pub polynomial: bool,
}

/// Default corpus on `[0, 1]`.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let entry = |id, f, ac, c1, poly| CorpusEntry { id, f, absolutely_continuous: ac, c1, polynomial: poly };
    vec![
        entry("const-7", FuncExpr::constant(7.0), true, true, true),
        entry("t", FuncExpr::power(1.0), true, true, true),
        entry("t^2", FuncExpr::power(2.0), true, true, true),
        entry("2t^3", FuncExpr::Monomial { coef: 2.0, exponent: 3.0 }, true, true, true),
        entry("5+t", FuncExpr::constant(5.0) + FuncExpr::power(1.0), true, true, true),
        entry("1+t+t^2", FuncExpr::sum(vec![FuncExpr::constant(1.0), FuncExpr::power(1.0), FuncExpr::power(2.0)]), true, true, true),
        entry("t^1.5", FuncExpr::power(1.5), true, true, false),
        entry("t^0.5", FuncExpr::power(0.5), true, false, false),
        entry("exp(t)", FuncExpr::exp(1.0), true, true, false),
        entry("cos(3t)", FuncExpr::cos(3.0), true, true, false),
        entry("exp(t)cos(2t)", FuncExpr::exp(1.0) * FuncExpr::cos(2.0), true, true, false),
        entry("W(0.5,2,24)", FuncExpr::weierstrass(0.5, 2.0, 24).expect("valid"), false, false, false),
    ]
}
