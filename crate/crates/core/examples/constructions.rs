//! Group tables and intercalate-free squares.

use latinlab::constructions::{boolean_intercalates, choose_k, group_square, search_intercalate_free, GroupSpec};
use latinlab::counting::count_intercalates;

fn main() -> latinlab::Result<()> {
    for q in 1..=4 {
        let sq = group_square(GroupSpec::Boolean(q))?;
        println!("boolean q={q}: N = {} (formula {})", count_intercalates(&sq), boolean_intercalates(1 << q));
    }
    for n in 1..=8 {
        match search_intercalate_free(n)? {
            Some(_) => println!("order {n}: intercalate-free square found"),
            None => println!("order {n}: none exists"),
        }
    }
    println!("k(0.5, 100) = {}", choose_k(0.5, 100)?);
    Ok(())
}
