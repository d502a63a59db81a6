//! Detects non-fragmented maps by finding a closed set equal to its own
//! derivative.

use oscrank::catalog::{stretch_limit, tail_map};
use oscrank::engine::{is_fragmented_report, Fragmentation};

fn main() -> oscrank::error::Result<()> {
    for f in [stretch_limit(), tail_map()] {
        match is_fragmented_report(&f, 3, 64)? {
            Fragmentation::Fragmented { beta, stabilized } => {
                println!("{}: fragmented, β(f) = {beta} (stabilized: {stabilized})", f.name)
            }
            Fragmentation::NotFragmented { fixed, level, .. } => {
                println!("{}: not fragmented; {fixed} is its own derivative at level {level}", f.name)
            }
            Fragmentation::Indeterminate { cap } => println!("{}: undecided after {cap} steps", f.name),
        }
    }
    Ok(())
}
