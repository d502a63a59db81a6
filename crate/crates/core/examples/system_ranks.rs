//! β(X, G) for every built-in system, with per-map ranks by level.

use oscrank::catalog::build_system;
use oscrank::engine::{beta_by_level, beta_of_system};

fn main() -> oscrank::error::Result<()> {
    for spec in ["acf", "dlo", "cyclic", "multiorder:1", "multiorder:2", "multiorder:3", "cylinder"] {
        let sys = build_system(spec)?;
        println!("{spec}: {}", sys.group_description);
        for c in &sys.catalog {
            let ranks: Vec<String> = beta_by_level(&c.map, 4, 64)?.iter().map(|r| r.to_string()).collect();
            println!("  {:<28} levels 1..4: [{}]", c.map.name, ranks.join(", "));
        }
        println!("  β(X, G) = {}\n", beta_of_system(&sys.ellis_maps(), 4, 64)?);
    }
    Ok(())
}
