//! Reading generator files and checking whether they define a stabilizer state.
//!
//! cargo run --example validate_group

use qudit_ame::construct;
use qudit_ame::stabgroup::{enumerate_elements, parse_generator_file, validate, write_generator_file};

fn main() -> qudit_ame::Result<()> {
    let ghz = construct::ghz(4, 3)?;
    let text = write_generator_file(&ghz);
    println!("{text}");
    let g = parse_generator_file(&text)?;
    println!("GHZ over Z_4: {}", validate(&g));
    println!("elements: {}", enumerate_elements(&g, 10_000)?.len());

    let samples = [
        ("X and Z on one qubit", "2 1 2\n0 | 1 | 0\n0 | 0 | 1\n"),
        ("Z and -Z", "2 1 2\n0 | 0 | 1\n2 | 0 | 1\n"),
        ("too few generators", "3 2 1\n0 | 0 0 | 1 0\n"),
    ];
    for (label, text) in samples {
        let g = parse_generator_file(text)?;
        println!("{label}: {}", validate(&g));
    }

    match parse_generator_file("2 2 1\n0 | 1 | 0 0\n") {
        Err(e) => println!("parse error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
