//! Runs every law over the small grid; pass `full` for the full grid.

use oscrank::laws::{run_law, Grid, Law};

fn main() -> oscrank::error::Result<()> {
    let grid = Grid::parse(&std::env::args().nth(1).unwrap_or_else(|| "small".into()))?;
    for law in Law::ALL {
        let r = run_law(law, &grid)?;
        println!("{} {law}: {} cases", if r.passed() { "PASS" } else { "FAIL" }, r.cases);
        for f in &r.failures {
            println!("  {f}");
        }
    }
    Ok(())
}
