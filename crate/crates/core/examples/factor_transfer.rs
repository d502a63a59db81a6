//! Transfer along factor maps: an open projection preserves derivative
//! chains exactly, the non-open glue factor only up to inclusion.

use oscrank::catalog::shift_limit;
use oscrank::factor::{check_factor_lemmas, glue_test_map, FactorMap};
use oscrank::maps::PiecewiseMap;
use oscrank::space::{Partition, Space, SymbolicSet};

fn show(pi: &FactorMap, f: &PiecewiseMap, level: u32) -> oscrank::error::Result<()> {
    let p = Partition::canonical(&pi.target, level)?;
    let r = check_factor_lemmas(pi, f, &SymbolicSet::full(&pi.target), &p, 3, 64)?;
    println!("{pi} with {} (open: {}), θ(f) = {}", r.map, r.is_open, r.transferred);
    for s in &r.stages {
        let rel = if s.equality { "=" } else if s.inclusion { "⊊" } else { "⊄" };
        println!("  α = {}: {} {rel} {}", s.alpha, s.upstairs, s.pulled_back);
    }
    println!("  β upstairs {} vs downstairs {}", r.beta_upstairs, r.beta_downstairs);
    Ok(())
}

fn main() -> oscrank::error::Result<()> {
    let proj = FactorMap::projection(3, 1)?;
    show(&proj, &shift_limit(3), 1)?;
    let theta = proj.transfer_map(&shift_limit(3))?;
    for y in ["-inf", "0", "+inf"] {
        let y = Space::MultiOrder(1).parse_point(&format!("({y})"))?;
        println!("  θ(f)({y}) = {}", theta.apply_map(&y)?);
    }
    show(&FactorMap::glue(), &glue_test_map(), 1)?;
    show(&FactorMap::singleton(&Space::CutLine), &oscrank::catalog::stretch_limit(), 1)?;
    Ok(())
}
