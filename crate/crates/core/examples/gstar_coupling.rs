//! Monte Carlo intercalate counts in the binomial model and its pruning,
//! against the exact expectations.

use latinlab::harness::{asymptotic_gstar_intercalates, expected_gstar_intercalates, gstar_experiment};

fn main() -> latinlab::Result<()> {
    let report = gstar_experiment(40, 0.3, 2000, 11)?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    for n in [50, 100, 300, 1000] {
        let ratio = expected_gstar_intercalates(n, 0.3) / asymptotic_gstar_intercalates(n, 0.3);
        println!("n = {n}: exact / asymptotic = {ratio:.4}");
    }
    Ok(())
}
