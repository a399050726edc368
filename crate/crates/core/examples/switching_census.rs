//! Level sets of 2 x 5 rectangles by first-row intercalate count, and how
//! switchings move between them.

use latinlab::sampling::enumerate_rectangles;
use latinlab::switching::level_census;

fn main() -> latinlab::Result<()> {
    let levels = level_census(enumerate_rectangles(2, 5)?)?;
    println!("ell,size,down,up_into,min_down,max_creating");
    for l in levels {
        println!(
            "{},{},{},{},{},{}",
            l.ell, l.size, l.down, l.up_into, l.min_down, l.max_creating
        );
    }
    Ok(())
}
