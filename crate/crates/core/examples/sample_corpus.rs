// Build functions, sample them to a grid and write the grid as CSV.
//
// `cargo run --example sample_corpus`

use fractalc::corpus::{default_corpus, sample, FuncExpr, GridFunction};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for e in default_corpus() {
        let holder = e.f.declared_holder().map_or("-".to_string(), |h| h.to_string());
        println!("{:<14} f(0.5) = {:>10.6}  Hölder {holder:<4} AC {}", e.id, e.f.eval(0.5)?, e.absolutely_continuous);
    }

    let f: FuncExpr = "weierstrass:0.5,2,24".parse()?;
    println!("\n{f}: tail bound {:.3e}, finest scale {:.3e}", f.truncation_tail_bound().unwrap(), f.resolution_scale().unwrap());

    let grid = sample(&(FuncExpr::exp(1.0) * FuncExpr::cos(2.0)), 0.0, 1.0, 5)?;
    let csv = grid.to_csv_string()?;
    print!("\n{csv}");
    let back = GridFunction::read_csv(csv.as_bytes())?;
    assert_eq!(back, grid);
    println!("interpolated at 0.3: {:.6}", back.interpolate(0.3)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
