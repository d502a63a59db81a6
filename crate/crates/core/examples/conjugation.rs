//! Moving a derivative chain by a group element: h[Y^α_f] = (hY)^α_{f∘h⁻¹}.

use oscrank::catalog::stretch_limit;
use oscrank::engine::iterate_derivative;
use oscrank::maps::GroupElement;
use oscrank::space::{Partition, Space, SymbolicSet};

fn main() -> oscrank::error::Result<()> {
    let line = Space::CutLine;
    let f = stretch_limit();
    let h = GroupElement::parse(&line, "plauto:0=1")?;
    let p = Partition::canonical(&line, 2)?;
    let (fh, hfh) = f.conjugate(&h)?;
    let full = SymbolicSet::full(&line);
    let c = iterate_derivative(&full, &f, &p, 64)?;
    let c1 = iterate_derivative(&full, &fh, &p, 64)?;
    let c2 = iterate_derivative(&full, &hfh, &h.push_partition(&p)?, 64)?;
    for (j, s) in c.stages.iter().enumerate() {
        println!("α = {j}: h[{s}] = {}; f∘h⁻¹: {}; hfh⁻¹ with h[P]: {}", h.image_set(s)?, c1.stages[j], c2.stages[j]);
    }
    Ok(())
}
