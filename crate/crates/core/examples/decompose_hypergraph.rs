//! Stars and matchings of a random 3-uniform hypergraph.

use latinlab::decompose::{check_partition, star_matching_partition, Hypergraph3};
use rand::seq::index::sample;

fn main() -> latinlab::Result<()> {
    let mut rng = latinlab::rng::stream(3, 0);
    let n = 40;
    let mut edges = std::collections::BTreeSet::new();
    while edges.len() < 300 {
        let mut e: Vec<usize> = sample(&mut rng, n, 3).into_vec();
        e.sort_unstable();
        edges.insert([e[0], e[1], e[2]]);
    }
    let h = Hypergraph3::new(n, edges.into_iter().collect())?;
    let r = 8;
    let parts = star_matching_partition(&h, r)?;
    let stars = parts.iter().filter(|p| p.is_star()).count();
    println!("{} edges, r = {r}: {stars} stars, {} matchings", h.len(), parts.len() - stars);
    println!("violations: {:?}", check_partition(&h, r, &parts));
    Ok(())
}
