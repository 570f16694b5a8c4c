//! Propagating prime-power no-go facts to composite dimensions.
//!
//! cargo run --example nogo_table [output-dir]

use qudit_ame::nogo::{emit_table, load_facts, propagate, CellStatus, TableFormat, DEFAULT_FACTS};

fn main() -> qudit_ame::Result<()> {
    let facts = load_facts(DEFAULT_FACTS)?;
    let table = propagate(&facts, 8, 36)?;
    let row: Vec<u64> = table.dims().filter(|&d| table.get(4, d).is_some_and(CellStatus::is_excluded)).collect();
    println!("no stabilizer AME(4,D) for D in {row:?}");

    let extra = format!("{DEFAULT_FACTS}2 2 stabAMEExists bell\n3 2 stabAMEExists ghz\n");
    let table = propagate(&load_facts(&extra)?, 8, 36)?;
    match std::env::args().nth(1) {
        Some(dir) => {
            std::fs::write(format!("{dir}/nogo.csv"), emit_table(&table, TableFormat::Csv))?;
            std::fs::write(format!("{dir}/nogo.svg"), emit_table(&table, TableFormat::Svg))?;
            println!("wrote {dir}/nogo.csv and {dir}/nogo.svg");
        }
        None => print!(
            "{}",
            emit_table(&table, TableFormat::CsvWithReasons)
                .lines()
                .filter(|l| l.starts_with("4,"))
                .take(6)
                .map(|l| format!("{l}\n"))
                .collect::<String>()
        ),
    }

    let conflict = load_facts("2 2 noAME bogus\n2 2 stabAMEExists bell\n");
    println!("conflicting facts: {}", conflict.unwrap_err());
    Ok(())
}
