//! Draw a few squares with the Jacobson-Matthews chain and print their
//! intercalate statistics.

use latinlab::counting::IntercalateStats;
use latinlab::sampling::jm::seeded_sampler;

fn main() {
    let n = 12;
    for (i, sq) in seeded_sampler(n, 5, 2024, 0).enumerate() {
        let stats = IntercalateStats::of(&sq);
        println!(
            "sample {i}: N = {}, N2 = {}, N' = {} (n^2/4 = {})",
            stats.total,
            stats.shared_pairs,
            stats.disjoint,
            n * n / 4
        );
    }
    let sq = latinlab::sampling::jm::sample_one(6, 1);
    print!("{sq}");
}
