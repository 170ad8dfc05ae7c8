// Gamma values and extrapolated limits.
//
// `cargo run --example gamma_and_limits`

use fractalc::numerics::{dyadic_ladder, extrapolate_limit, gamma};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for x in [0.5, 1.5, 2.5, 4.5, 10.0] {
        println!("Γ({x}) = {:.15}", gamma(x)?);
    }

    // (1 + h)^(1/h) → e, approached at rate h
    let samples: Vec<(f64, f64)> = dyadic_ladder(0.1, 10).into_iter().map(|h| (h, (1.0 + h).powf(1.0 / h))).collect();
    let est = extrapolate_limit(&samples, 1e-6)?;
    println!(
        "lim (1+h)^(1/h) = {:.10} ({}, error bar {:.1e}, |est - e| = {:.1e})",
        est.value,
        est.status,
        est.error_bar,
        (est.value - std::f64::consts::E).abs()
    );

    // sin(1/h) has no limit
    let samples: Vec<(f64, f64)> = dyadic_ladder(0.1, 10).into_iter().map(|h| (h, (1.0 / h).sin())).collect();
    println!("lim sin(1/h): {}", extrapolate_limit(&samples, 1e-6)?.status);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
