//! One run of the triangle removal process with a quasirandomness trace.

use latinlab::rng::stream;
use latinlab::trp::{annotate_trace, trp_run, write_trace_csv, TrpOutcome};

fn main() -> latinlab::Result<()> {
    let (n, m) = (30, 270);
    let mut run = trp_run(n, m, &mut stream(7, 0), true)?;
    annotate_trace(&mut run, 2)?;
    match run.outcome {
        TrpOutcome::Removed(_) => println!("removed {m} triangles"),
        TrpOutcome::Star => println!("ran out after {}", run.removed.len()),
    }
    let rows = run.trace.unwrap();
    let every: Vec<_> = rows.iter().step_by(30).copied().collect();
    write_trace_csv(&every, std::io::stdout())
}
