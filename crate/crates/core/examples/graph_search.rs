//! Exhaustive graph-state search for AME witnesses, whole and sharded.
//!
//! cargo run --release --example graph_search

use qudit_ame::search::{search_ame, search_space, SearchMode, SearchOptions};

fn main() -> qudit_ame::Result<()> {
    let none = search_ame(4, 2, SearchMode::Exhaustive, &SearchOptions::default())?;
    print!("{}", none.render());

    let first = search_ame(4, 3, SearchMode::FirstWitness, &SearchOptions::default())?;
    print!("{}", first.render());

    // shards can run on separate machines; their witness lines concatenate
    let total = search_space(3, 4);
    let mut count = 0;
    for shard in [0..total / 2, total / 2..total] {
        let opts = SearchOptions { shard: Some(shard), ..SearchOptions::default() };
        let part = search_ame(4, 3, SearchMode::Exhaustive, &opts)?;
        count += part.found.len();
        println!("{}", part.render().lines().last().unwrap_or_default());
    }
    println!("AME(4,3) graph witnesses: {count} of {total}");

    let five = search_ame(5, 2, SearchMode::FirstWitness, &SearchOptions::default())?;
    print!("{}", five.render());
    Ok(())
}
