//! Exhaustive counts of small squares and rectangles, and the exact
//! intercalate distribution at order 4.

use latinlab::harness::{mc_distribution, Sampler};
use latinlab::sampling::{enumerate_rectangles, enumerate_squares};

fn main() -> latinlab::Result<()> {
    for n in 1..=5 {
        println!("order {n}: {} squares", enumerate_squares(n)?.count());
    }
    for (k, n) in [(2, 5), (3, 5), (2, 7)] {
        println!("{k} x {n}: {} rectangles", enumerate_rectangles(k, n)?.count());
    }
    let report = mc_distribution(4, Sampler::Exhaustive, 0, 0)?;
    println!("order 4 histogram {:?}, mean {}", report.histogram, report.mean);
    Ok(())
}
