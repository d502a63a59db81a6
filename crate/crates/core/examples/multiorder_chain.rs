//! The shift-limit map on multiorder:n has rank exactly n; its chain peels
//! off one coordinate at -inf per stage.

use oscrank::catalog::shift_limit;
use oscrank::engine::iterate_derivative;
use oscrank::space::{Partition, Space, SymbolicSet};

fn main() -> oscrank::error::Result<()> {
    for n in 1..=4 {
        let space = Space::MultiOrder(n);
        let p = Partition::canonical(&space, 1)?;
        let chain = iterate_derivative(&SymbolicSet::full(&space), &shift_limit(n), &p, 64)?;
        println!("multiorder:{n}: rank {}", chain.rank());
        if n == 3 {
            for (j, s) in chain.stages.iter().enumerate() {
                println!("  stage {j}: {s}");
            }
        }
    }
    Ok(())
}
