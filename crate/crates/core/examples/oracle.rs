//! Brute-force witness search, and the consistency harness that checks the
//! symbolic derivative against it.

use oscrank::catalog::{shift_limit, stretch_limit};
use oscrank::oracle::{consistency_check, witness_search};
use oscrank::space::{Partition, Space, SymbolicSet};

fn main() -> oscrank::error::Result<()> {
    let line = Space::CutLine;
    let p = Partition::canonical(&line, 1)?;
    let x = line.parse_point("0+")?;
    let report = witness_search(&stretch_limit(), &p, &x, &SymbolicSet::full(&line), 4, 3)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));

    let plane = Space::MultiOrder(2);
    let p = Partition::canonical(&plane, 1)?;
    let r = consistency_check(&shift_limit(2), &p, &SymbolicSet::full(&plane), 3, 3)?;
    println!(
        "multiorder:2 shift-limit: {} samples, {} in the derivative, {} refuted, {} unknown, {} hard failures",
        r.checked,
        r.in_derivative,
        r.refuted,
        r.unknown,
        r.hard_failures.len()
    );
    Ok(())
}
