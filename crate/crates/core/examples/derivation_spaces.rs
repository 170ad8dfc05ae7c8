// Exact derivation spaces of finite algebras.
//
// `cargo run --example derivation_spaces`

use fractalc::derivations::{
    factor_through_derivative, rational_string, shifted_derivative, solve_derivation_space, FiniteAlgebra,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in [2, 4, 8, 16] {
        let space = solve_derivation_space(&FiniteAlgebra::pointwise(n)?)?;
        println!("pointwise({n:>2}): dimension {}, constraint rank {}", space.dimension, space.constraint_rank);
    }

    let space = solve_derivation_space(&FiniteAlgebra::truncated_polynomial(3)?)?;
    println!("\ntruncated polynomials, degree 3: dimension {}", space.dimension);
    for f in factor_through_derivative(&space)? {
        let q: Vec<String> = f.q.iter().map(rational_string).collect();
        println!("  D = q·d/dx with q = [{}], exact: {}", q.join(", "), f.is_exact());
    }
    println!("x²·d/dx in span: {}", space.contains(&shifted_derivative(3, 2)?));
    println!("d/dx in span: {}", space.contains(&shifted_derivative(3, 0)?));
    println!("{}", serde_json::to_string(&space.report())?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
