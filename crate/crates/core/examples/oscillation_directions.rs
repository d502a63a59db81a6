//! On the cut line every oscillation point oscillates to the left or to the
//! right, and two points whose images share an atom never share a direction.

use oscrank::catalog::build_system;
use oscrank::engine::{derivative, oscillation_directions};
use oscrank::space::{Partition, SymbolicSet};

fn main() -> oscrank::error::Result<()> {
    let sys = build_system("dlo")?;
    let full = SymbolicSet::full(&sys.space);
    for level in 1..=2 {
        let p = Partition::canonical(&sys.space, level)?;
        for f in sys.maps() {
            let first = derivative(&full, f, &p)?;
            for x in first.finite_points().unwrap_or_default() {
                println!("level {level} {}: {x} ↦ {}, directions {:?}", f.name, f.apply_map(&x)?, oscillation_directions(f, &p, &x)?);
            }
        }
    }
    Ok(())
}
