// Run a few registered claims and print their NDJSON reports, as
// `fractalc check` does.
//
// `cargo run --example claim_reports`

use fractalc::cli::claims::{find, run_claims, CheckConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = CheckConfig::default();
    let ids = ["rl-leibniz", "entropy-leibniz", "obstruction-pointwise", "cube-root-annihilation"];
    let claims: Vec<_> = ids.iter().map(|id| find(id).ok_or(format!("unknown claim {id}"))).collect::<Result<_, _>>()?;
    for report in run_claims(&claims, &cfg) {
        println!("{:<24} expected {:<10} got {:<10} {}", report.claim, report.expected, report.verdict, report.anchor);
        println!("{}", serde_json::to_string(&report)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
