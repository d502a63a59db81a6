//! A derivative chain on the cut line with the certificates that justify
//! each surviving point.

use oscrank::catalog::stretch_limit;
use oscrank::engine::iterate_derivative;
use oscrank::space::{Partition, Space, SymbolicSet};

fn main() -> oscrank::error::Result<()> {
    let line = Space::CutLine;
    let f = stretch_limit();
    for level in 1..=3 {
        let p = Partition::canonical(&line, level)?;
        let chain = iterate_derivative(&SymbolicSet::full(&line), &f, &p, 64)?;
        println!("level {level}: {:?}, rank {}", chain.termination, chain.rank());
        for (j, s) in chain.stages.iter().enumerate() {
            println!("  stage {j}: {s}");
        }
        for c in &chain.certificates {
            println!("  {} survives: {} -> {}, {} -> {} inside {}", c.point, c.v1, f.apply_map(&c.v1)?, c.v2, f.apply_map(&c.v2)?, c.neighborhood);
        }
    }
    Ok(())
}
