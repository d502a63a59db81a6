//! Loads a finite system from JSON and compares the symbolic derivative
//! with the definition, checked over every neighbourhood.

use oscrank::catalog::load_finite_system;
use oscrank::engine::{beta_of_system, derivative};
use oscrank::oracle::brute_force_derivative;
use oscrank::space::{Partition, SymbolicSet};

fn main() -> oscrank::error::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/systems/fold.json").to_string());
    let sys = load_finite_system(std::path::Path::new(&path))?;
    println!("{}: {}", sys.spec, sys.group_description);
    let p = Partition::canonical(&sys.space, 1)?;
    let full = SymbolicSet::full(&sys.space);
    for f in sys.maps() {
        let d = derivative(&full, f, &p)?;
        let b = brute_force_derivative(&full, f, &p)?;
        println!("  {:<20} derivative {d}, brute force {b}, in Ellis: {}", f.name, f.claimed_in_ellis);
    }
    println!("  β(X, G) = {}", beta_of_system(&sys.ellis_maps(), 2, 64)?);
    Ok(())
}
