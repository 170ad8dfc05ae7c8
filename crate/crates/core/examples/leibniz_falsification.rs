// Residuals of the Leibniz and chain rules for fractional, classical and
// entropy operators.
//
// `cargo run --example leibniz_falsification`

use fractalc::algebra::{caputo_jumarie_gap, chain_residual, default_probes, leibniz_residual, GapPath};
use fractalc::corpus::FuncExpr;
use fractalc::frac_ops::{FracOrder, OperatorHandle, Resolution};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let res = Resolution::default();
    let half = FracOrder::new(0.5)?;
    let t = FuncExpr::power(1.0);
    let t2 = FuncExpr::power(2.0);

    for op in [
        OperatorHandle::RlDerivative { alpha: half, base: 0.0 },
        OperatorHandle::Jumarie(half),
        OperatorHandle::ClassicalDerivative,
    ] {
        let l = leibniz_residual(&op, &t, &t, &[1.0], &res)?;
        let c = chain_residual(&op, &t2, &t2, &[1.0], &res)?;
        println!(
            "{:<16} leibniz {:>10.6} ({:?})  chain {:>10.6} ({:?})",
            op.label(),
            l.residuals[0],
            l.verdict,
            c.residuals[0],
            c.verdict
        );
    }

    let entropy = OperatorHandle::Entropy { d: FuncExpr::cos(1.0) };
    let p = leibniz_residual(&entropy, &FuncExpr::exp(1.0), &(FuncExpr::constant(2.0) + t.clone()), &default_probes(), &res)?;
    println!("{:<16} leibniz max {:.1e} ({:?})", entropy.label(), p.max_abs, p.verdict);

    let gap = caputo_jumarie_gap(&FuncExpr::cos(3.0), half, &default_probes(), GapPath::ClosedForm, &res)?;
    println!("\njumarie - caputo on cos(3t): max {:.1e}, error estimate {:.1e}, {:?}", gap.max_abs, gap.numerical_error_estimate, gap.verdict);
    println!("{}", serde_json::to_string(&gap)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
