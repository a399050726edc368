//! Distribution and tails of the intercalate count at a moderate order.

use latinlab::harness::{mc_distribution, subsquare_report, Direction, Sampler};

fn main() -> latinlab::Result<()> {
    let n = 20;
    let report = mc_distribution(n, Sampler::jm_default(n), 400, 1)?
        .with_tails(&[(Direction::Lower, 0.5), (Direction::Upper, 0.5)]);
    println!("mean N = {:.2} +- {:.2} (n^2/4 = {})", report.mean, report.std_error, n * n / 4);
    for t in &report.tails {
        println!("{:?} delta={} freq={} [{:.4}, {:.4}]", t.direction, t.delta, t.frequency, t.wilson_low, t.wilson_high);
    }
    let sub = subsquare_report(n, Sampler::jm_default(n), 200, 2)?;
    println!("mean order-3 subsquares = {:.3} +- {:.3}", sub.mean, sub.std_error);
    Ok(())
}
