// Local fractional derivatives: agreement of the two estimators, the
// triviality sweep on Hölder functions and the Weierstrass function.
//
// `cargo run --example local_derivatives`

use fractalc::corpus::{FuncExpr, Interval};
use fractalc::frac_ops::{Direction, FracOrder};
use fractalc::local_ops::{bc_lfd, kg_bc_agreement, triviality_sweep, Estimator, LocalConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = LocalConfig::default();
    let half = FracOrder::new(0.5)?;

    let a = kg_bc_agreement(&FuncExpr::power(0.5), half, 0.0, Direction::Plus, &cfg)?;
    println!("t^0.5 at 0: kg {:.6} ({}), bc {:.6} ({}), gap {:?}", a.kg.value, a.kg.status, a.bc.value, a.bc.status, a.gap);

    let sweep = triviality_sweep(&FuncExpr::power(0.8), half, Interval::new(0.1, 0.9)?, 16, Estimator::Kg, 1e-3, &cfg)?;
    println!("t^0.8, α = 0.5: {} of 16 probes vanish", (sweep.fraction * 16.0).round());
    let mut csv = Vec::new();
    sweep.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?.lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    let w = FuncExpr::weierstrass(0.5, 2.0, 24)?;
    for y in [0.3, 0.5, 0.7] {
        let est = bc_lfd(&w, half, y, Direction::Plus, &cfg)?;
        println!("weierstrass at {y}: {} (error bar {:.2e})", est.status, est.error_bar);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
