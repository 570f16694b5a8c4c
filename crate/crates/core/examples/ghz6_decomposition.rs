//! Splitting GHZ over Z_6 into a qubit GHZ state and a qutrit GHZ state.
//!
//! cargo run --example ghz6_decomposition

use qudit_ame::ame::{crt_unitary, decompose};
use qudit_ame::construct;
use qudit_ame::stabgroup::{validate, write_generator_file};

fn main() -> qudit_ame::Result<()> {
    let g = construct::ghz(6, 3)?;
    let dec = decompose(&g)?;
    println!("CRT relabeling on C^6: {:?}", crt_unitary(&dec.factorization).permutation());
    for (fg, q) in dec.factor_groups.iter().zip(dec.factorization.prime_powers()) {
        println!("\nfactor q={q}: {}", validate(fg));
        print!("{}", write_generator_file(fg));
    }
    println!("\nfidelity with relabeled input: {:.12}", dec.fidelity.expect("dense check ran"));
    Ok(())
}
