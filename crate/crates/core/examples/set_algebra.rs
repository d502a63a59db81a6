//! Symbolic sets: parsing, Boolean operations, closures and canonical
//! partitions.

use oscrank::space::literal::parse_set;
use oscrank::space::{Partition, Space};

fn main() -> oscrank::error::Result<()> {
    let line = Space::CutLine;
    let a = parse_set(&line, "[0+,1-] ∪ {2}")?;
    let b = parse_set(&line, "(1/2,3]")?;
    println!("A = {a}, B = {b}");
    println!("A ∩ B = {}, A \\ B = {}, complement of A = {}", a.intersect(&b), a.difference(&b), a.complement());
    let open = parse_set(&line, "(0,1)")?;
    println!("closure of {open} = {}, clopen: {}", open.closure(), open.is_clopen());
    for level in 1..=2 {
        let p = Partition::canonical(&line, level)?;
        let classes: Vec<String> = p.classes().iter().map(|c| c.to_string()).collect();
        println!("level {level}: {} atoms: {}", p.len(), classes.join(" | "));
    }
    let plane = Space::MultiOrder(2);
    let boxes = parse_set(&plane, "[-inf,0]x[-inf,+inf] U [-inf,+inf]x{-inf}")?;
    println!("in multiorder:2: {boxes}");
    let circle = Space::Cyclic;
    println!("wrapping arc: {}", parse_set(&circle, "[3/4,1/4]")?);
    Ok(())
}
