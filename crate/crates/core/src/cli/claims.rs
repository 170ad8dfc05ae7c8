//! Registry of checkable claims. Each claim runs a fixed computation and
//! reports a verdict that is compared against the expected one.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{
    caputo_jumarie_gap, chain_residual, constant_annihilation_check, default_probes, leibniz_residual,
    linearity_residual, GapPath, ResidualProfile, Verdict,
};
use crate::corpus::{default_corpus, CorpusEntry, FuncExpr, Interval};
use crate::derivations::{
    cube_root_annihilation_check, factor_through_derivative, solve_derivation_space, FiniteAlgebra, Matrix, Q,
};
use crate::error::Result;
use crate::frac_ops::{gl_derivative, power_rule_oracle, rl_derivative, Direction, FracOrder, OperatorHandle, Resolution};
use crate::local_ops::{kg_bc_agreement, probe, triviality_sweep, Estimator};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimVerdict {
    Satisfied,
    Violated,
    Indeterminate,
    Divergent,
}

impl From<Verdict> for ClaimVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Satisfied => ClaimVerdict::Satisfied,
            Verdict::Violated => ClaimVerdict::Violated,
            Verdict::Indeterminate => ClaimVerdict::Indeterminate,
        }
    }
}

impl std::fmt::Display for ClaimVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

/// Settings shared by every claim run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CheckConfig {
    pub resolution: Resolution,
    /// Seeds the order in which corpus members are visited.
    pub seed: u64,
}

struct Outcome {
    verdict: ClaimVerdict,
    inputs: Value,
    metrics: Value,
}

pub struct Claim {
    pub id: &'static str,
    /// The formula the claim is about.
    pub anchor: &'static str,
    pub expected: ClaimVerdict,
    run: fn(&CheckConfig) -> Result<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub schema: u32,
    pub claim: String,
    pub anchor: String,
    pub inputs: Value,
    pub expected: ClaimVerdict,
    pub verdict: ClaimVerdict,
    pub matched: bool,
    pub metrics: Value,
    pub runtime_ms: u64,
}

impl Claim {
    pub fn run(&self, cfg: &CheckConfig) -> ClaimReport {
        let start = Instant::now();
        let outcome = (self.run)(cfg).unwrap_or_else(|e| Outcome {
            verdict: ClaimVerdict::Indeterminate,
            inputs: Value::Null,
            metrics: json!({ "error": e.to_string() }),
        });
        ClaimReport {
            schema: SCHEMA_VERSION,
            claim: self.id.to_string(),
            anchor: self.anchor.to_string(),
            inputs: outcome.inputs,
            expected: self.expected,
            verdict: outcome.verdict,
            matched: outcome.verdict == self.expected,
            metrics: outcome.metrics,
            runtime_ms: start.elapsed().as_millis() as u64,
        }
    }
}

pub fn find(id: &str) -> Option<&'static Claim> {
    REGISTRY.iter().find(|c| c.id == id)
}

pub fn registry() -> &'static [Claim] {
    REGISTRY
}

/// Run claims in parallel; reports come back in the order given.
pub fn run_claims(claims: &[&Claim], cfg: &CheckConfig) -> Vec<ClaimReport> {
    claims.par_iter().map(|c| c.run(cfg)).collect()
}

/// Two-column table of claim ids and anchors, used by `--help` and the README.
pub fn claim_table() -> String {
    let width = REGISTRY.iter().map(|c| c.id.len()).max().unwrap_or(0);
    let mut s = String::from("Claims:\n");
    for c in REGISTRY {
        s.push_str(&format!("  {:width$}  {}  [expect {}]\n", c.id, c.anchor, c.expected));
    }
    s
}

static REGISTRY: &[Claim] = &[
    Claim {
        id: "oracle-agreement",
        anchor: "D^α t^γ = Γ(γ+1)/Γ(γ+1-α) · t^(γ-α)",
        expected: ClaimVerdict::Satisfied,
        run: oracle_agreement,
    },
    Claim {
        id: "caputo-jumarie-identity",
        anchor: "D_J^α[x] = cD^α_{0+}[x] = D^α_{0+}[x - x(0)]",
        expected: ClaimVerdict::Satisfied,
        run: caputo_jumarie_identity,
    },
    Claim {
        id: "rl-leibniz",
        anchor: "D(x·y) = Dx·y + x·Dy",
        expected: ClaimVerdict::Violated,
        run: rl_leibniz,
    },
    Claim {
        id: "jumarie-leibniz",
        anchor: "D_J^α(x·y) = D_J^α(x)·y + x·D_J^α(y)",
        expected: ClaimVerdict::Violated,
        run: jumarie_leibniz,
    },
    Claim {
        id: "rl-chain-rule",
        anchor: "T(f∘g) = (Tf)∘g · Tg",
        expected: ClaimVerdict::Violated,
        run: rl_chain_rule,
    },
    Claim {
        id: "fractional-leibniz-chain-violation",
        anchor: "T(f∘g) = (Tf)∘g · Tg and D(x·y) = Dx·y + x·Dy for RL, Caputo, Jumarie, GL",
        expected: ClaimVerdict::Violated,
        run: fractional_violations,
    },
    Claim {
        id: "classical-laws",
        anchor: "Tf = f'",
        expected: ClaimVerdict::Satisfied,
        run: classical_laws,
    },
    Claim {
        id: "fractional-linearity",
        anchor: "D(λf + μg) = λDf + μDg",
        expected: ClaimVerdict::Satisfied,
        run: fractional_linearity,
    },
    Claim {
        id: "rl-constant-nonzero",
        anchor: "D^α_{0+}[1](t) = t^(-α)/Γ(1-α)",
        expected: ClaimVerdict::Violated,
        run: rl_constant_nonzero,
    },
    Claim {
        id: "caputo-constant-annihilation",
        anchor: "D(C_c) = c·D(C_1) = 0",
        expected: ClaimVerdict::Satisfied,
        run: caputo_constants,
    },
    Claim {
        id: "jumarie-constant-annihilation",
        anchor: "D_J^α[x] = d/dt I^(1-α)_{0+}[x - x(0)]",
        expected: ClaimVerdict::Satisfied,
        run: jumarie_constants,
    },
    Claim {
        id: "local-constant-annihilation",
        anchor: "D^α_{KG,σ}[c] = D^α_{BC,σ}[c] = 0",
        expected: ClaimVerdict::Satisfied,
        run: local_constants,
    },
    Claim {
        id: "entropy-leibniz",
        anchor: "T(f)(x) = d(x)·f(x)·ln|f(x)|",
        expected: ClaimVerdict::Satisfied,
        run: entropy_leibniz,
    },
    Claim {
        id: "entropy-nonlinear",
        anchor: "T(f + g) ≠ T(f) + T(g) for T(f) = f·ln|f|",
        expected: ClaimVerdict::Violated,
        run: entropy_nonlinear,
    },
    Claim {
        id: "entropy-chain-rule",
        anchor: "T(f∘g) = (Tf)∘g · Tg for T(f) = f·ln|f|",
        expected: ClaimVerdict::Violated,
        run: entropy_chain,
    },
    Claim {
        id: "konig-milman-leibniz",
        anchor: "T(f)(x) = c(x)·f'(x) + d(x)·f(x)·ln|f(x)|",
        expected: ClaimVerdict::Satisfied,
        run: konig_milman_leibniz,
    },
    Claim {
        id: "obstruction-pointwise",
        anchor: "D(C_1) = D(C_1·C_1) = 2·C_1·D(C_1)",
        expected: ClaimVerdict::Satisfied,
        run: obstruction_pointwise,
    },
    Claim {
        id: "cube-root-annihilation",
        anchor: "D(f) = D(g^3) = 3g^2·D(g)",
        expected: ClaimVerdict::Satisfied,
        run: cube_root_annihilation,
    },
    Claim {
        id: "rigidity-polynomial",
        anchor: "D(P) = D(x)·P'(x)",
        expected: ClaimVerdict::Satisfied,
        run: rigidity_polynomial,
    },
    Claim {
        id: "kg-bc-equivalence",
        anchor: "D^α_{KG,σ}[f](y) = D^α_{BC,σ}[f](y)",
        expected: ClaimVerdict::Satisfied,
        run: kg_bc_equivalence,
    },
    Claim {
        id: "kg-holder-triviality",
        anchor: "f ∈ H^λ, λ > α ⇒ D^α_{KG,+}[f](x) = 0 on [a,b]",
        expected: ClaimVerdict::Satisfied,
        run: kg_holder_triviality,
    },
    Claim {
        id: "local-leibniz",
        anchor: "D^α_{KG,σ}[f·g] = D^α_{KG,σ}[f]·g + f·D^α_{KG,σ}[g]",
        expected: ClaimVerdict::Satisfied,
        run: local_leibniz,
    },
    Claim {
        id: "weierstrass-nonconvergence",
        anchor: "W_α(x) = Σ q^(-αn) cos(q^n x)",
        expected: ClaimVerdict::Divergent,
        run: weierstrass_nonconvergence,
    },
];

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).expect("registry orders lie in (0, 1)")
}

fn half() -> FracOrder {
    order(0.5)
}

const ORDERS: [f64; 3] = [0.25, 0.5, 0.75];

/// Corpus in a seed-dependent order.
fn shuffled_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut c = default_corpus();
    c.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    c
}

fn ids(entries: &[CorpusEntry]) -> Vec<&'static str> {
    entries.iter().map(|e| e.id).collect()
}

/// Worst verdict across profiles: any Violated wins, then Indeterminate.
fn combine(profiles: &[ResidualProfile]) -> Verdict {
    if profiles.iter().any(|p| p.verdict == Verdict::Violated) {
        Verdict::Violated
    } else if profiles.iter().any(|p| p.verdict == Verdict::Indeterminate) {
        Verdict::Indeterminate
    } else {
        Verdict::Satisfied
    }
}

fn max_abs(profiles: &[ResidualProfile]) -> f64 {
    profiles.iter().map(|p| p.max_abs).fold(0.0, f64::max)
}

fn max_err(profiles: &[ResidualProfile]) -> f64 {
    profiles.iter().map(|p| p.numerical_error_estimate).fold(0.0, f64::max)
}

fn single(profile: ResidualProfile, inputs: Value) -> Outcome {
    Outcome {
        verdict: profile.verdict.into(),
        metrics: json!({
            "residuals": profile.residuals,
            "max_abs": profile.max_abs,
            "error_estimate": profile.numerical_error_estimate,
            "separation_factor": profile.separation_factor,
        }),
        inputs,
    }
}

fn oracle_agreement(cfg: &CheckConfig) -> Result<Outcome> {
    const TOL: f64 = 5e-3;
    let scheme = cfg.resolution.scheme()?;
    let cases: Vec<(f64, f64, f64)> = [0.5, 1.0, 2.0, 3.0]
        .iter()
        .flat_map(|&g| ORDERS.iter().flat_map(move |&a| [0.25, 0.5, 1.0].map(|t| (g, a, t))))
        .collect();
    let devs = cases
        .par_iter()
        .map(|&(g, a, t)| {
            let f = FuncExpr::power(g);
            let exact = power_rule_oracle(g, order(a), t)?;
            let rl = rl_derivative(&f, order(a), 0.0, t, scheme)?;
            let gl = gl_derivative(&f, order(a), 0.0, t, cfg.resolution.gl_nodes)?;
            Ok(((rl - exact).abs(), (gl - exact).abs(), (rl - gl).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let fold = |sel: fn(&(f64, f64, f64)) -> f64| devs.iter().map(sel).fold(0.0, f64::max);
    let (rl, gl, pair) = (fold(|d| d.0), fold(|d| d.1), fold(|d| d.2));
    let worst = rl.max(gl).max(pair);
    Ok(Outcome {
        verdict: if worst <= TOL { ClaimVerdict::Satisfied } else { ClaimVerdict::Violated },
        inputs: json!({
            "gammas": [0.5, 1.0, 2.0, 3.0], "alphas": ORDERS, "points": [0.25, 0.5, 1.0],
            "nodes": cfg.resolution.nodes, "gl_nodes": cfg.resolution.gl_nodes,
        }),
        metrics: json!({ "max_rl_vs_oracle": rl, "max_gl_vs_oracle": gl, "max_rl_vs_gl": pair, "tolerance": TOL }),
    })
}

fn caputo_jumarie_identity(cfg: &CheckConfig) -> Result<Outcome> {
    const CLOSED_TOL: f64 = 1e-6;
    const GRID_TOL: f64 = 5e-3;
    let corpus: Vec<CorpusEntry> = shuffled_corpus(cfg.seed).into_iter().filter(|e| e.absolutely_continuous).collect();
    let probes = default_probes();
    let mut jobs = Vec::new();
    for e in &corpus {
        for a in ORDERS {
            jobs.push((e, a, GapPath::ClosedForm));
            jobs.push((e, a, GapPath::Grid));
        }
    }
    let profiles = jobs
        .par_iter()
        .map(|&(e, a, path)| Ok((path, caputo_jumarie_gap(&e.f, order(a), &probes, path, &cfg.resolution)?)))
        .collect::<Result<Vec<_>>>()?;
    let of = |p: GapPath| profiles.iter().filter(|x| x.0 == p).map(|x| x.1.clone()).collect::<Vec<_>>();
    let (closed, grid) = (of(GapPath::ClosedForm), of(GapPath::Grid));
    let verdict = combine(&[closed.clone(), grid.clone()].concat());
    let (cmax, gmax) = (max_abs(&closed), max_abs(&grid));
    let verdict = if verdict == Verdict::Satisfied && (cmax > CLOSED_TOL || gmax > GRID_TOL) {
        Verdict::Indeterminate
    } else {
        verdict
    };
    Ok(Outcome {
        verdict: verdict.into(),
        inputs: json!({
            "corpus": ids(&corpus),
            "alphas": ORDERS, "probes": probes, "nodes": cfg.resolution.nodes,
        }),
        metrics: json!({
            "closed_form_max_gap": cmax, "closed_form_tolerance": CLOSED_TOL,
            "grid_max_gap": gmax, "grid_tolerance": GRID_TOL,
            "max_error_estimate": max_err(&[closed, grid].concat()),
        }),
    })
}

fn rl_leibniz(cfg: &CheckConfig) -> Result<Outcome> {
    let op = OperatorHandle::RlDerivative { alpha: half(), base: 0.0 };
    let t = FuncExpr::power(1.0);
    let p = leibniz_residual(&op, &t, &t, &[1.0], &cfg.resolution)?;
    Ok(single(p, json!({ "operator": op.label(), "f": "t", "g": "t", "probes": [1.0] })))
}

fn jumarie_leibniz(cfg: &CheckConfig) -> Result<Outcome> {
    let op = OperatorHandle::Jumarie(half());
    let t = FuncExpr::power(1.0);
    let p = leibniz_residual(&op, &t, &t, &[1.0], &cfg.resolution)?;
    Ok(single(p, json!({ "operator": op.label(), "f": "t", "g": "t", "probes": [1.0] })))
}

fn rl_chain_rule(cfg: &CheckConfig) -> Result<Outcome> {
    let op = OperatorHandle::RlDerivative { alpha: half(), base: 0.0 };
    let t2 = FuncExpr::power(2.0);
    let p = chain_residual(&op, &t2, &t2, &[1.0], &cfg.resolution)?;
    Ok(single(p, json!({ "operator": op.label(), "f": "t^2", "g": "t^2", "probes": [1.0] })))
}

fn fractional_ops(alpha: FracOrder) -> Vec<OperatorHandle> {
    vec![
        OperatorHandle::RlDerivative { alpha, base: 0.0 },
        OperatorHandle::Caputo { alpha, base: 0.0 },
        OperatorHandle::Jumarie(alpha),
        OperatorHandle::GrunwaldLetnikov { alpha, base: 0.0 },
    ]
}

/// Every nonlocal fractional operator fails Leibniz and the chain rule on
/// some pair of corpus members.
fn fractional_violations(cfg: &CheckConfig) -> Result<Outcome> {
    let corpus: Vec<CorpusEntry> = shuffled_corpus(cfg.seed).into_iter().filter(|e| e.polynomial).collect();
    let probes = default_probes();
    let ops = fractional_ops(half());
    let found = ops
        .par_iter()
        .map(|op| {
            let mut leibniz = None;
            let mut chain = None;
            'pairs: for f in &corpus {
                for g in &corpus {
                    if leibniz.is_none() && leibniz_residual(op, &f.f, &g.f, &probes, &cfg.resolution)?.verdict == Verdict::Violated {
                        leibniz = Some(format!("{},{}", f.id, g.id));
                    }
                    if chain.is_none() && chain_residual(op, &f.f, &g.f, &probes, &cfg.resolution)?.verdict == Verdict::Violated {
                        chain = Some(format!("{},{}", f.id, g.id));
                    }
                    if leibniz.is_some() && chain.is_some() {
                        break 'pairs;
                    }
                }
            }
            Ok((op.label(), leibniz, chain))
        })
        .collect::<Result<Vec<_>>>()?;
    let all = found.iter().all(|(_, l, c)| l.is_some() && c.is_some());
    let witnesses: Vec<Value> = found
        .iter()
        .map(|(op, l, c)| json!({ "operator": op, "leibniz_pair": l, "chain_pair": c }))
        .collect();
    Ok(Outcome {
        verdict: if all { ClaimVerdict::Violated } else { ClaimVerdict::Indeterminate },
        inputs: json!({ "corpus": ids(&corpus), "probes": probes, "alpha": 0.5 }),
        metrics: json!({ "witnesses": witnesses }),
    })
}

fn pairs(corpus: &[CorpusEntry]) -> Vec<(&CorpusEntry, &CorpusEntry)> {
    corpus.iter().flat_map(|f| corpus.iter().map(move |g| (f, g))).collect()
}

fn classical_laws(cfg: &CheckConfig) -> Result<Outcome> {
    const TOL: f64 = 1e-10;
    let corpus: Vec<CorpusEntry> = shuffled_corpus(cfg.seed).into_iter().filter(|e| e.polynomial).collect();
    let probes = default_probes();
    let op = OperatorHandle::ClassicalDerivative;
    let profiles = pairs(&corpus)
        .par_iter()
        .map(|(f, g)| {
            Ok(vec![
                linearity_residual(&op, &f.f, &g.f, 2.0, -3.0, &probes, &cfg.resolution)?,
                leibniz_residual(&op, &f.f, &g.f, &probes, &cfg.resolution)?,
                chain_residual(&op, &f.f, &g.f, &probes, &cfg.resolution)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    let worst = max_abs(&profiles);
    let verdict = match combine(&profiles) {
        Verdict::Satisfied if worst > TOL => Verdict::Indeterminate,
        v => v,
    };
    Ok(Outcome {
        verdict: verdict.into(),
        inputs: json!({ "corpus": ids(&corpus), "probes": probes, "laws": ["linearity", "leibniz", "chain"] }),
        metrics: json!({ "max_abs": worst, "tolerance": TOL, "profiles": profiles.len() }),
    })
}

fn fractional_linearity(cfg: &CheckConfig) -> Result<Outcome> {
    let corpus: Vec<CorpusEntry> = shuffled_corpus(cfg.seed).into_iter().filter(|e| e.absolutely_continuous).collect();
    let probes = default_probes();
    let mut ops = fractional_ops(half());
    ops.push(OperatorHandle::RlIntegral(half()));
    // consecutive pairs keep the run short while touching every member
    let jobs: Vec<(OperatorHandle, &CorpusEntry, &CorpusEntry)> = ops
        .iter()
        .flat_map(|op| corpus.iter().zip(corpus.iter().cycle().skip(1)).map(move |(f, g)| (op.clone(), f, g)))
        .collect();
    let profiles = jobs
        .par_iter()
        .map(|(op, f, g)| linearity_residual(op, &f.f, &g.f, 2.0, -3.0, &probes, &cfg.resolution))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        verdict: combine(&profiles).into(),
        inputs: json!({
            "operators": ops.iter().map(OperatorHandle::label).collect::<Vec<_>>(),
            "corpus": ids(&corpus), "lambda": 2.0, "mu": -3.0, "probes": probes,
        }),
        metrics: json!({ "max_abs": max_abs(&profiles), "max_error_estimate": max_err(&profiles) }),
    })
}

const CONSTANTS: [f64; 4] = [1.0, -2.5, 7.0, 0.0];

fn constants_outcome(op: OperatorHandle, probes: Vec<f64>, cfg: &CheckConfig) -> Result<Outcome> {
    let p = constant_annihilation_check(&op, &CONSTANTS, &probes, &cfg.resolution)?;
    Ok(single(p, json!({ "operator": op.label(), "constants": CONSTANTS, "probes": probes })))
}

fn rl_constant_nonzero(cfg: &CheckConfig) -> Result<Outcome> {
    let op = OperatorHandle::RlDerivative { alpha: half(), base: 0.0 };
    let p = constant_annihilation_check(&op, &[1.0], &[1.0], &cfg.resolution)?;
    let exact = 1.0 / crate::numerics::gamma(0.5)?;
    let mut out = single(p, json!({ "operator": op.label(), "constants": [1.0], "probes": [1.0] }));
    out.metrics["closed_form"] = json!(exact);
    Ok(out)
}

fn caputo_constants(cfg: &CheckConfig) -> Result<Outcome> {
    constants_outcome(OperatorHandle::Caputo { alpha: half(), base: 0.0 }, default_probes(), cfg)
}

fn jumarie_constants(cfg: &CheckConfig) -> Result<Outcome> {
    constants_outcome(OperatorHandle::Jumarie(half()), default_probes(), cfg)
}

fn local_constants(cfg: &CheckConfig) -> Result<Outcome> {
    let probes = default_probes();
    let mut profiles = Vec::new();
    for sigma in [Direction::Plus, Direction::Minus] {
        for op in [OperatorHandle::BcLocal { alpha: half(), sigma }, OperatorHandle::KgLocal { alpha: half(), sigma }] {
            profiles.push(constant_annihilation_check(&op, &CONSTANTS, &probes, &cfg.resolution)?);
        }
    }
    Ok(Outcome {
        verdict: combine(&profiles).into(),
        inputs: json!({
            "operators": profiles.iter().map(|p| p.operator.clone()).collect::<Vec<_>>(),
            "constants": CONSTANTS, "probes": probes,
        }),
        metrics: json!({ "max_abs": max_abs(&profiles) }),
    })
}

/// Corpus members bounded away from zero on `[0.1, 0.9]`.
fn nonvanishing(seed: u64) -> Vec<CorpusEntry> {
    shuffled_corpus(seed)
        .into_iter()
        .filter(|e| default_probes().iter().all(|&t| e.f.eval(t).map(|v| v.abs() >= 1e-6).unwrap_or(false)))
        .collect()
}

fn entropy_leibniz(cfg: &CheckConfig) -> Result<Outcome> {
    let corpus = nonvanishing(cfg.seed);
    let probes = default_probes();
    let coeffs = [FuncExpr::constant(1.0), FuncExpr::cos(1.0)];
    let jobs: Vec<_> = coeffs.iter().flat_map(|d| pairs(&corpus).into_iter().map(move |p| (d, p))).collect();
    let profiles = jobs
        .par_iter()
        .map(|(d, (f, g))| leibniz_residual(&OperatorHandle::Entropy { d: (*d).clone() }, &f.f, &g.f, &probes, &cfg.resolution))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        verdict: combine(&profiles).into(),
        inputs: json!({
            "coefficients": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "corpus": ids(&corpus), "probes": probes,
        }),
        metrics: json!({ "max_abs": max_abs(&profiles), "max_error_estimate": max_err(&profiles) }),
    })
}

fn entropy_nonlinear(cfg: &CheckConfig) -> Result<Outcome> {
    let op = OperatorHandle::Entropy { d: FuncExpr::constant(1.0) };
    let p = linearity_residual(&op, &FuncExpr::constant(2.0), &FuncExpr::constant(3.0), 1.0, 1.0, &[0.5], &cfg.resolution)?;
    Ok(single(p, json!({ "operator": op.label(), "f": "const:2", "g": "const:3", "lambda": 1.0, "mu": 1.0 })))
}

fn entropy_chain(cfg: &CheckConfig) -> Result<Outcome> {
    let op = OperatorHandle::Entropy { d: FuncExpr::constant(1.0) };
    let probes = default_probes();
    let p = chain_residual(&op, &FuncExpr::exp(1.0), &FuncExpr::power(1.0), &probes, &cfg.resolution)?;
    Ok(single(p, json!({ "operator": op.label(), "f": "exp(t)", "g": "t", "probes": probes })))
}

fn konig_milman_leibniz(cfg: &CheckConfig) -> Result<Outcome> {
    let corpus: Vec<CorpusEntry> = nonvanishing(cfg.seed).into_iter().filter(|e| e.c1).collect();
    let probes = default_probes();
    let coeffs = [
        (FuncExpr::constant(1.0), FuncExpr::constant(0.0)),
        (FuncExpr::power(1.0), FuncExpr::constant(2.0)),
        (FuncExpr::exp(-1.0), FuncExpr::cos(2.0)),
    ];
    let jobs: Vec<_> = coeffs.iter().flat_map(|cd| pairs(&corpus).into_iter().map(move |p| (cd, p))).collect();
    let profiles = jobs
        .par_iter()
        .map(|((c, d), (f, g))| {
            let op = OperatorHandle::KonigMilman { c: c.clone(), d: d.clone() };
            leibniz_residual(&op, &f.f, &g.f, &probes, &cfg.resolution)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        verdict: combine(&profiles).into(),
        inputs: json!({
            "coefficients": coeffs.iter().map(|(c, d)| format!("c={c}; d={d}")).collect::<Vec<_>>(),
            "corpus": ids(&corpus), "probes": probes,
        }),
        metrics: json!({ "max_abs": max_abs(&profiles), "max_error_estimate": max_err(&profiles) }),
    })
}

fn obstruction_pointwise(_: &CheckConfig) -> Result<Outcome> {
    let sizes: Vec<usize> = (2..=crate::derivations::MAX_POINTWISE).collect();
    let dims = sizes
        .par_iter()
        .map(|&n| Ok(solve_derivation_space(&FiniteAlgebra::pointwise(n)?)?.dimension))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        verdict: if dims.iter().all(|&d| d == 0) { ClaimVerdict::Satisfied } else { ClaimVerdict::Violated },
        inputs: json!({ "algebra": "pointwise", "sizes": sizes }),
        metrics: json!({ "dimensions": dims }),
    })
}

fn cube_root_annihilation(_: &CheckConfig) -> Result<Outcome> {
    let a = FiniteAlgebra::pointwise(4)?;
    let v: Vec<Q> = [0, 1, 2, 0].iter().map(|&x| Q::from_integer(x.into())).collect();
    let space = solve_derivation_space(&a)?;
    let mut candidates = space.basis.clone();
    candidates.push(Matrix::zeros(4));
    let ok = candidates.iter().map(|d| cube_root_annihilation_check(&a, d, &v)).collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        verdict: if ok.iter().all(|&b| b) { ClaimVerdict::Satisfied } else { ClaimVerdict::Violated },
        inputs: json!({ "algebra": "pointwise", "size": 4, "v": ["0/1", "1/1", "2/1", "0/1"] }),
        metrics: json!({ "candidates": candidates.len(), "space_dimension": space.dimension }),
    })
}

fn rigidity_polynomial(_: &CheckConfig) -> Result<Outcome> {
    let degrees: Vec<usize> = (2..=crate::derivations::MAX_DEGREE).collect();
    let rows = degrees
        .par_iter()
        .map(|&d| {
            let space = solve_derivation_space(&FiniteAlgebra::truncated_polynomial(d)?)?;
            let exact = factor_through_derivative(&space)?.iter().all(|f| f.is_exact());
            Ok((space.dimension, exact && space.verify()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        verdict: if rows.iter().all(|r| r.1) { ClaimVerdict::Satisfied } else { ClaimVerdict::Violated },
        inputs: json!({ "algebra": "truncated-poly", "degrees": degrees }),
        metrics: json!({
            "dimensions": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
            "all_residuals_zero": rows.iter().all(|r| r.1),
        }),
    })
}

fn kg_bc_equivalence(cfg: &CheckConfig) -> Result<Outcome> {
    const TOL: f64 = 1e-2;
    let local = cfg.resolution.local;
    let alpha = half();
    let corpus: Vec<CorpusEntry> = shuffled_corpus(cfg.seed).into_iter().filter(|e| e.absolutely_continuous).collect();
    let mut jobs: Vec<(FuncExpr, &str, f64, Direction)> = vec![(FuncExpr::power(0.5), "t^0.5", 0.0, Direction::Plus)];
    for e in &corpus {
        for y in [0.25, 0.5, 0.75] {
            for s in [Direction::Plus, Direction::Minus] {
                jobs.push((e.f.clone(), e.id, y, s));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|(f, id, y, s)| Ok((*id, *y, *s, kg_bc_agreement(f, alpha, *y, *s, &local)?)))
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.3.gap).collect();
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    let anchor = &rows[0].3;
    let anchor_ok = anchor.gap.is_some_and(|g| g <= TOL);
    Ok(Outcome {
        verdict: if worst <= TOL && anchor_ok { ClaimVerdict::Satisfied } else { ClaimVerdict::Violated },
        inputs: json!({ "alpha": 0.5, "corpus": ids(&corpus), "points": [0.25, 0.5, 0.75], "extra": "t^0.5 at y=0, σ=+" }),
        metrics: json!({
            "both_converged": gaps.len(), "probes": rows.len(), "max_gap": worst, "tolerance": TOL,
            "sqrt_at_zero": { "kg": anchor.kg.value, "bc": anchor.bc.value, "gap": anchor.gap },
        }),
    })
}

/// `(λ, α)` pairs with `λ > α`.
pub const TRIVIALITY_CASES: [(f64, f64); 4] = [(0.8, 0.5), (0.9, 0.5), (0.6, 0.25), (1.0, 0.5)];

fn kg_holder_triviality(cfg: &CheckConfig) -> Result<Outcome> {
    const TOL: f64 = 1e-3;
    let interval = Interval { a: 0.1, b: 0.9 };
    let sweeps = TRIVIALITY_CASES
        .par_iter()
        .map(|&(lambda, a)| {
            let f = FuncExpr::power(lambda);
            triviality_sweep(&f, order(a), interval, 64, Estimator::Kg, TOL, &cfg.resolution.local)
        })
        .collect::<Result<Vec<_>>>()?;
    let fractions: Vec<f64> = sweeps.iter().map(|s| s.fraction).collect();
    Ok(Outcome {
        verdict: if fractions.iter().all(|&f| f == 1.0) { ClaimVerdict::Satisfied } else { ClaimVerdict::Violated },
        inputs: json!({ "cases": TRIVIALITY_CASES, "interval": [0.1, 0.9], "points": 64, "estimator": "kg", "tolerance": TOL }),
        metrics: json!({ "fractions": fractions }),
    })
}

fn local_leibniz(cfg: &CheckConfig) -> Result<Outcome> {
    let alpha = half();
    let f = FuncExpr::power(0.5);
    let g = FuncExpr::constant(1.0) + FuncExpr::power(1.0);
    let mut profiles = Vec::new();
    for op in [OperatorHandle::BcLocal { alpha, sigma: Direction::Plus }, OperatorHandle::KgLocal { alpha, sigma: Direction::Plus }] {
        profiles.push(leibniz_residual(&op, &f, &g, &[0.0], &cfg.resolution)?);
        profiles.push(leibniz_residual(&op, &FuncExpr::exp(1.0), &FuncExpr::power(2.0), &default_probes(), &cfg.resolution)?);
    }
    Ok(Outcome {
        verdict: combine(&profiles).into(),
        inputs: json!({
            "operators": ["bc-lfd(0.5,+)", "kg-lfd(0.5,+)"],
            "cases": ["t^0.5 · (1+t) at y=0", "exp(t) · t^2 at the default probes"],
        }),
        metrics: json!({ "max_abs": max_abs(&profiles), "max_error_estimate": max_err(&profiles) }),
    })
}

/// Points `0.1 + 0.8·frac(k·φ)`, avoiding any lattice alignment.
pub fn generic_points(count: usize) -> Vec<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    (1..=count).map(|k| 0.1 + 0.8 * (k as f64 * phi).fract()).collect()
}

fn weierstrass_nonconvergence(cfg: &CheckConfig) -> Result<Outcome> {
    const SHARE: f64 = 0.9;
    let w = FuncExpr::weierstrass(0.5, 2.0, 24)?;
    let points = generic_points(32);
    let probes = points
        .par_iter()
        .map(|&y| probe(&w, half(), y, Direction::Plus, Estimator::Bc, &cfg.resolution.local))
        .collect::<Result<Vec<_>>>()?;
    let not_converged = probes.iter().filter(|p| !p.result.is_converged()).count();
    let share = not_converged as f64 / probes.len() as f64;
    let divergent = probes.iter().filter(|p| p.result.status == crate::numerics::LimitStatus::Divergent).count();
    Ok(Outcome {
        verdict: if share >= SHARE { ClaimVerdict::Divergent } else { ClaimVerdict::Indeterminate },
        inputs: json!({ "f": w.to_string(), "alpha": 0.5, "points": points.len(), "estimator": "bc" }),
        metrics: json!({
            "not_converged_share": share, "required_share": SHARE, "divergent": divergent,
            "tail_bound": w.truncation_tail_bound(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_anchored() {
        let mut ids: Vec<_> = REGISTRY.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), REGISTRY.len());
        assert!(REGISTRY.iter().all(|c| !c.anchor.is_empty()));
        let table = claim_table();
        assert!(REGISTRY.iter().all(|c| table.contains(c.anchor)));
    }

    #[test]
    fn generic_points_are_interior() {
        let p = generic_points(32);
        assert!(p.iter().all(|&y| y > 0.1 && y < 0.9));
    }

    #[test]
    fn seeds_permute_the_corpus() {
        let ids = |seed| shuffled_corpus(seed).iter().map(|e| e.id).collect::<Vec<_>>();
        assert_eq!(ids(1), ids(1));
        assert_ne!(ids(1), ids(2));
        let mut sorted = ids(2);
        sorted.sort_unstable();
        let mut base: Vec<_> = crate::corpus::default_corpus().iter().map(|e| e.id).collect();
        base.sort_unstable();
        assert_eq!(sorted, base);
    }
}
