use fractalc::algebra::{
    entropy_operator, leibniz_residual, u_ln_abs_u, Verdict, POINTWISE_FLOOR,
};
use fractalc::corpus::{cube_root_witness, default_corpus, sample, CorpusEntry, FuncExpr};
use fractalc::derivations::{shifted_derivative, solve_derivation_space, FiniteAlgebra};
use fractalc::frac_ops::{
    caputo, gl_derivative, jumarie, power_rule_oracle, rl_derivative, rl_integral, Direction, FracOrder,
    OperatorHandle, Resolution, Scheme,
};
use fractalc::local_ops::{bc_lfd, bc_quotients, kg_bc_agreement, kg_lfd, LocalConfig};
use fractalc::numerics::{dyadic_ladder, extrapolate_limit, gamma, observed_order, LimitStatus};
use proptest::prelude::*;

fn corpus() -> Vec<CorpusEntry> {
    default_corpus()
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn alphas() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.25, 0.5, 0.75])
}

#[derive(Debug, Clone, Copy)]
enum Linear {
    RlIntegral,
    RlDerivative,
    Caputo,
    Jumarie,
    Gl,
}

fn apply(op: Linear, f: &FuncExpr, alpha: FracOrder, t: f64) -> f64 {
    let s = Scheme::new(2048).unwrap();
    match op {
        Linear::RlIntegral => rl_integral(f, alpha, 0.0, t, s),
        Linear::RlDerivative => rl_derivative(f, alpha, 0.0, t, s),
        Linear::Caputo => caputo(f, alpha, 0.0, t, s),
        Linear::Jumarie => jumarie(f, alpha, t, s),
        Linear::Gl => gl_derivative(f, alpha, 0.0, t, 8192),
    }
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_are_linear(
        op in prop::sample::select(vec![Linear::RlIntegral, Linear::RlDerivative, Linear::Caputo, Linear::Jumarie, Linear::Gl]),
        i in 0..12usize,
        j in 0..12usize,
        lambda in -3.0..3.0f64,
        mu in -3.0..3.0f64,
        a in alphas(),
        t in 0.1..1.0f64,
    ) {
        let c = corpus();
        let (f, g) = (&c[i].f, &c[j].f);
        let alpha = order(a);
        let combo = FuncExpr::linear_combination(lambda, f, mu, g);
        let (df, dg) = (apply(op, f, alpha, t), apply(op, g, alpha, t));
        let residual = apply(op, &combo, alpha, t) - lambda * df - mu * dg;
        prop_assert!(residual.abs() <= 1e-9 * (1.0 + df.abs() + dg.abs()), "{op:?} {} {}: {residual:e}", c[i].id, c[j].id);
    }

    #[test]
    fn weierstrass_tail_bound_holds(a in 0.1..0.9f64, q in 1.5..4.0f64, n in 4u32..20, lo in 0.0..2.0f64) {
        let short = FuncExpr::weierstrass(a, q, n).unwrap();
        let long = FuncExpr::weierstrass(a, q, n + 5).unwrap();
        let bound = short.truncation_tail_bound().unwrap();
        let r = q.powf(-a);
        prop_assert!((bound - r.powf(n as f64 + 1.0) / (1.0 - r)).abs() <= 1e-15 * bound);
        let gs = sample(&short, lo, lo + 1.0, 4001).unwrap();
        let gl = sample(&long, lo, lo + 1.0, 4001).unwrap();
        let gap = gs.samples().iter().zip(gl.samples()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= bound, "{gap} > {bound}");
    }

    #[test]
    fn cube_roots_recover_the_function(i in 0..12usize, n in 2usize..600) {
        let f = &corpus()[i].f;
        let grid = sample(f, 0.0, 1.0, n).unwrap();
        let root = grid.cube_root();
        for (g, v) in root.samples().iter().zip(grid.samples()) {
            prop_assert!((g.powi(3) - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
        if let Ok(w) = cube_root_witness(f) {
            for t in grid.nodes() {
                let v = f.eval(t).unwrap();
                prop_assert!((w.eval(t).unwrap().powi(3) - v).abs() <= 1e-12 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn sampling_reproduces_eval(i in 0..12usize, a in 0.0..0.5f64, width in 0.1..2.0f64, n in 2usize..300) {
        let f = &corpus()[i].f;
        let grid = sample(f, a, a + width, n).unwrap();
        for (k, t) in grid.nodes().enumerate() {
            prop_assert_eq!(grid.samples()[k], f.eval(t).unwrap());
            prop_assert_eq!(grid.interpolate(t).unwrap(), grid.samples()[k]);
        }
    }

    #[test]
    fn gamma_recurrence(x in 0.1..20.0f64) {
        let (g, g1) = (gamma(x).unwrap(), gamma(x + 1.0).unwrap());
        prop_assert!((g1 - x * g).abs() <= 1e-10 * g1);
    }

    #[test]
    fn extrapolation_recovers_power_laws(
        limit in -5.0..5.0f64,
        c in prop::sample::select(vec![-2.0, -0.5, 0.5, 1.0, 3.0]),
        p in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let samples: Vec<(f64, f64)> = dyadic_ladder(0.1, 10).into_iter().map(|h| (h, limit + c * h.powf(p))).collect();
        let est = extrapolate_limit(&samples, 1e-6).unwrap();
        prop_assert!(est.is_converged(), "{est:?}");
        prop_assert!((est.value - limit).abs() <= 1e-6, "{est:?}");
    }

    #[test]
    fn constant_sequences_are_exact(v in -1e6..1e6f64, scales in 4usize..14) {
        let samples: Vec<(f64, f64)> = dyadic_ladder(0.1, scales).into_iter().map(|h| (h, v)).collect();
        let est = extrapolate_limit(&samples, 1e-9).unwrap();
        prop_assert_eq!(est.status, LimitStatus::Converged);
        prop_assert_eq!(est.value, v);
        prop_assert_eq!(est.error_bar, 0.0);
    }

    #[test]
    fn verdict_is_a_function_of_the_profile(max_abs in 0.0..1.0f64, err in 1e-12..1.0f64) {
        let v = Verdict::classify(max_abs, err);
        prop_assert_eq!(v, Verdict::classify(max_abs, err));
        let expected = if max_abs <= err {
            Verdict::Satisfied
        } else if max_abs > 10.0 * err {
            Verdict::Violated
        } else {
            Verdict::Indeterminate
        };
        prop_assert_eq!(v, expected);
    }

    #[test]
    fn entropy_leibniz_on_random_samples(
        f in prop::collection::vec(prop_oneof![-100.0..-1e-6f64, 1e-6..100.0f64], 8),
        g in prop::collection::vec(prop_oneof![-100.0..-1e-6f64, 1e-6..100.0f64], 8),
    ) {
        let d = FuncExpr::constant(1.0);
        let grid = |v: &Vec<f64>| fractalc::corpus::GridFunction::new(0.0, 1.0, v.clone()).unwrap();
        let fg: Vec<f64> = f.iter().zip(&g).map(|(x, y)| x * y).collect();
        let t_fg = entropy_operator(&d, &grid(&fg)).unwrap();
        for k in 0..8 {
            let r = t_fg.samples()[k] - u_ln_abs_u(f[k]) * g[k] - f[k] * u_ln_abs_u(g[k]);
            prop_assert!(r.abs() <= 1e-12 * (1.0 + t_fg.samples()[k].abs()), "{r:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constants_are_annihilated(c in -50.0..50.0f64, a in alphas(), t in 0.05..1.0f64) {
        let k = FuncExpr::constant(c);
        let s = Scheme::new(4096).unwrap();
        prop_assert!(caputo(&k, order(a), 0.0, t, s).unwrap().abs() <= 1e-10);
        prop_assert!(jumarie(&k, order(a), t, s).unwrap().abs() <= 1e-10);
        let cfg = LocalConfig::default();
        for sigma in [Direction::Plus, Direction::Minus] {
            let y = t.clamp(0.1, 0.9);
            for est in [bc_lfd(&k, order(a), y, sigma, &cfg).unwrap(), kg_lfd(&k, order(a), y, sigma, &cfg).unwrap()] {
                prop_assert_eq!(est.status, LimitStatus::Converged);
                prop_assert_eq!(est.value, 0.0);
            }
        }
    }

    #[test]
    fn rl_of_one_matches_the_kernel(a in alphas(), base in -1.0..0.5f64, dt in 0.1..1.0f64) {
        let t = base + dt;
        let v = rl_derivative(&FuncExpr::constant(1.0), order(a), base, t, Scheme::new(4096).unwrap()).unwrap();
        let exact = dt.powf(-a) / gamma(1.0 - a).unwrap();
        prop_assert!((v - exact).abs() <= 5e-3, "{v} vs {exact}");
    }

    #[test]
    fn kg_and_bc_agree_where_both_converge(i in 0..11usize, y in 0.1..0.9f64, minus in any::<bool>(), a in alphas()) {
        let e = &corpus()[i];
        prop_assume!(e.absolutely_continuous);
        let sigma = if minus { Direction::Minus } else { Direction::Plus };
        let agreement = kg_bc_agreement(&e.f, order(a), y, sigma, &LocalConfig::default()).unwrap();
        if let Some(gap) = agreement.gap {
            prop_assert!(gap <= 1e-2, "{}: {gap}", e.id);
        }
    }

    #[test]
    fn local_leibniz_where_defined(i in 0..12usize, j in 0..12usize, y in 0.1..0.9f64) {
        let c = corpus();
        let (f, g) = (&c[i].f, &c[j].f);
        let cfg = LocalConfig::default();
        let alpha = order(0.5);
        let fg = FuncExpr::product(f.clone(), g.clone());
        let (bf, bg, bfg) = (
            bc_lfd(f, alpha, y, Direction::Plus, &cfg).unwrap(),
            bc_lfd(g, alpha, y, Direction::Plus, &cfg).unwrap(),
            bc_lfd(&fg, alpha, y, Direction::Plus, &cfg).unwrap(),
        );
        if bf.is_converged() && bg.is_converged() && bfg.is_converged() {
            let r = bfg.value - bf.value * g.eval(y).unwrap() - f.eval(y).unwrap() * bg.value;
            prop_assert!(r.abs() <= 2e-2, "{} {}: {r}", c[i].id, c[j].id);
        }
    }
}

#[test]
fn gamma_recurrence_on_quarter_grid() {
    for k in 1..=40 {
        let x = 0.25 * k as f64;
        let (g, g1) = (gamma(x).unwrap(), gamma(x + 1.0).unwrap());
        assert!((g1 - x * g).abs() <= 1e-10 * g1, "x = {x}");
    }
}

#[test]
fn gl_converges_at_first_order() {
    for gamma_exp in [1.0, 2.0, 3.0] {
        for a in [0.25, 0.5, 0.75] {
            let f = FuncExpr::power(gamma_exp);
            let v: Vec<f64> =
                (10..=14).map(|k| gl_derivative(&f, order(a), 0.0, 1.0, 1 << k).unwrap()).collect();
            for w in v.windows(3) {
                let p = observed_order(w[0], w[1], w[2]);
                assert!((p - 1.0).abs() <= 0.2, "t^{gamma_exp}, α = {a}: order {p}");
            }
            let exact = power_rule_oracle(gamma_exp, order(a), 1.0).unwrap();
            assert!((v[4] - exact).abs() < 5e-3);
        }
    }
}

#[test]
fn weierstrass_quotients_keep_oscillating() {
    let w = FuncExpr::weierstrass(0.5, 2.0, 24).unwrap();
    let cfg = LocalConfig::default();
    for y in fractalc::cli::claims::generic_points(32) {
        let q = bc_quotients(&w, order(0.5), y, Direction::Plus, &cfg).unwrap();
        let tail: Vec<f64> = q[q.len() - 3..].iter().map(|p| p.1).collect();
        let spread = tail.iter().cloned().fold(f64::MIN, f64::max) - tail.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread >= 0.1, "y = {y}: spread {spread}");
        assert!(!bc_lfd(&w, order(0.5), y, Direction::Plus, &cfg).unwrap().is_converged());
    }
}

#[test]
fn classical_derivative_passes_on_polynomials() {
    let res = Resolution::default();
    let polys: Vec<_> = corpus().into_iter().filter(|e| e.polynomial).collect();
    let probes = fractalc::algebra::default_probes();
    for f in &polys {
        for g in &polys {
            let p = leibniz_residual(&OperatorHandle::ClassicalDerivative, &f.f, &g.f, &probes, &res).unwrap();
            assert!(p.max_abs <= 1e-10 && p.verdict == Verdict::Satisfied, "{} {}", f.id, g.id);
            assert!(p.numerical_error_estimate >= POINTWISE_FLOOR);
        }
    }
}

#[test]
fn every_fractional_operator_breaks_leibniz_and_chain() {
    let res = Resolution::default();
    let half = order(0.5);
    let t = FuncExpr::power(1.0);
    let t2 = FuncExpr::power(2.0);
    for op in [
        OperatorHandle::RlDerivative { alpha: half, base: 0.0 },
        OperatorHandle::Caputo { alpha: half, base: 0.0 },
        OperatorHandle::Jumarie(half),
        OperatorHandle::GrunwaldLetnikov { alpha: half, base: 0.0 },
    ] {
        let l = leibniz_residual(&op, &t, &t, &[0.5, 1.0], &res).unwrap();
        let c = fractalc::algebra::chain_residual(&op, &t2, &t2, &[0.5, 1.0], &res).unwrap();
        assert_eq!(l.verdict, Verdict::Violated, "{op}");
        assert_eq!(c.verdict, Verdict::Violated, "{op}");
    }
}

#[test]
fn solver_finds_every_shifted_derivative() {
    for d in 1..=8 {
        let space = solve_derivation_space(&FiniteAlgebra::truncated_polynomial(d).unwrap()).unwrap();
        assert!(space.verify());
        for b in &space.basis {
            assert!(space.algebra.is_derivation(b));
        }
        for k in 1..=d {
            let m = shifted_derivative(d, k).unwrap();
            assert!(space.contains(&m), "d = {d}, k = {k}");
        }
        // x^0 · d/dx does not preserve the truncation ideal
        assert!(!space.contains(&shifted_derivative(d, 0).unwrap()));
    }
}

#[test]
fn exponential_gap_on_the_grid() {
    let p = fractalc::algebra::caputo_jumarie_gap(
        &FuncExpr::exp(1.0),
        order(0.3),
        &fractalc::algebra::default_probes(),
        fractalc::algebra::GapPath::Grid,
        &Resolution::default(),
    )
    .unwrap();
    assert!(p.max_abs <= 5e-3);
    assert_eq!(p.verdict, Verdict::Satisfied);
}

#[test]
fn matching_holder_order_escapes_triviality() {
    let sweep = fractalc::local_ops::triviality_sweep(
        &FuncExpr::power(0.5),
        order(0.5),
        fractalc::corpus::Interval::new(0.0, 0.9).unwrap(),
        10,
        fractalc::local_ops::Estimator::Bc,
        1e-3,
        &LocalConfig::default(),
    )
    .unwrap();
    assert!(sweep.fraction < 1.0);
    let at_zero = &sweep.probes[0];
    assert_eq!(at_zero.y, 0.0);
    assert!((at_zero.result.value - 0.886_226_925_452_758).abs() < 1e-6);
}
