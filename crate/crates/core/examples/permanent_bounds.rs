//! Exact one-row extension counts against the Bregman and Egorychev-Falikman
//! bounds, and a random completion of a rectangle.

use latinlab::sampling::{count_row_extensions, extension_bounds, random_completion};

fn main() -> latinlab::Result<()> {
    let n = 12;
    let sq = latinlab::sampling::jm::sample_one(n, 5);
    println!("k,exact,bregman_upper,evf_lower");
    for k in 1..n {
        let rect = sq.prefix(k)?;
        let exact = count_row_extensions(&rect)?;
        let (upper, lower) = extension_bounds(&rect)?;
        println!("{k},{exact},{upper:.1},{lower:.1}");
    }
    let completion = random_completion(&sq.prefix(3)?, &mut latinlab::rng::stream(5, 1))?;
    print!("completed from 3 rows:\n{}", completion.square);
    Ok(())
}
