//! An AME state over a composite dimension yields AME states over every
//! prime-power factor, and every nonempty set of factors merges back into an
//! AME state over the product dimension.
//!
//! cargo run --example ame_reduction

use qudit_ame::ame::{decompose, merge_factors, reduce_ame, verify_ame_symbolic};
use qudit_ame::construct;

fn main() -> qudit_ame::Result<()> {
    for d in [6u64, 12, 30] {
        let g = construct::bell(d)?;
        let r = reduce_ame(&g)?;
        println!("Bell over Z_{d}: AME = {}", r.input.is_ame);
        for (q, v) in &r.factors {
            println!("  factor Z_{q}: AME = {}", v.is_ame);
        }
        let dec = decompose(&g)?;
        let m = dec.factor_groups.len();
        for mask in 1u32..(1 << m) {
            let subset: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let merged = merge_factors(&dec, &subset)?;
            println!(
                "  merge {:?} -> Z_{}: AME = {}",
                subset,
                merged.factorization.dimension(),
                verify_ame_symbolic(&merged.group)?.is_ame
            );
        }
    }

    // a non-AME input can still have AME factors
    let g = construct::graph_from_upper(6, 2, &[3])?;
    let r = reduce_ame(&g)?;
    println!("\ngraph over Z_6 with edge weight 3: AME = {}", r.input.is_ame);
    for (q, v) in &r.factors {
        let w = v.witness.as_ref().map(|w| format!(" (witness {} on {:?})", w.element, w.subset)).unwrap_or_default();
        println!("  factor Z_{q}: AME = {}{w}", v.is_ame);
    }
    Ok(())
}
