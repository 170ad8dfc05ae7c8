// Riemann-Liouville, Caputo, Jumarie and Grünwald-Letnikov derivatives of
// `t^γ` against the power rule, and of a constant.
//
// `cargo run --example nonlocal_operators`

use fractalc::corpus::FuncExpr;
use fractalc::frac_ops::{
    caputo_with_route, gl_derivative, jumarie, power_rule_oracle, rl_derivative, FracOrder, Scheme,
    DEFAULT_NODES, ORACLE_NODES,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scheme = Scheme::new(DEFAULT_NODES)?;
    let alpha = FracOrder::new(0.5)?;
    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}", "γ", "oracle", "rl", "caputo", "jumarie", "gl");
    for gamma in [0.5, 1.0, 2.0, 3.0] {
        let f = FuncExpr::power(gamma);
        let (c, _) = caputo_with_route(&f, alpha, 0.0, 1.0, scheme)?;
        println!(
            "{gamma:>5} {:>12.7} {:>12.7} {:>12.7} {:>12.7} {:>12.7}",
            power_rule_oracle(gamma, alpha, 1.0)?,
            rl_derivative(&f, alpha, 0.0, 1.0, scheme)?,
            c,
            jumarie(&f, alpha, 1.0, scheme)?,
            gl_derivative(&f, alpha, 0.0, 1.0, ORACLE_NODES)?,
        );
    }

    let one = FuncExpr::constant(1.0);
    println!("\nD^0.5[1](1): rl {:.7}, caputo {:.1e}", rl_derivative(&one, alpha, 0.0, 1.0, scheme)?, caputo_with_route(&one, alpha, 0.0, 1.0, scheme)?.0);
    let (_, route) = caputo_with_route(&FuncExpr::power(0.5), alpha, 0.0, 1.0, scheme)?;
    println!("caputo route for t^0.5: {route:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
