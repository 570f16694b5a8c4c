//! Batch commands behind the `qudit-ame` binary.
//!
//! Every command is a pure function from inputs and a [`RunConfig`] to the
//! text it would write; the binary only does file I/O and exit codes.

use std::fmt::Write as _;
use std::ops::Range;

use crate::ame::{merge_factors, reduce_ame_with, verify_ame, verify_ame_symbolic, DecomposeOptions, Method};
use crate::construct;
use crate::nogo::{emit_table, load_facts, propagate, TableFormat, DEFAULT_FACTS};
use crate::search::{search_ame, GraphState, SearchMode, SearchOptions, DEFAULT_SEARCH_BUDGET};
use crate::stabgroup::{parse_generator_file, validate, write_generator_file, StabilizerGroup};
use crate::statevec::DEFAULT_DENSE_BUDGET;
use crate::{Error, Result, STATE_TOL};

pub const EXIT_AME: i32 = 0;
pub const EXIT_NOT_AME: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub dense_budget: usize,
    pub search_budget: u128,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { tolerance: STATE_TOL, dense_budget: DEFAULT_DENSE_BUDGET, search_budget: DEFAULT_SEARCH_BUDGET }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.dense_budget == 0 || self.search_budget == 0 {
            return Err(Error::InvalidConfig("budgets must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructKind {
    Ghz,
    Bell,
    Graph,
}

/// Parses `--adjacency`: either a search witness line `n d : a12 a13 …`, or
/// the upper-triangle entries alone, separated by spaces or commas.
pub fn parse_adjacency(text: &str, dim: u64, parties: usize) -> Result<GraphState> {
    if text.contains(':') {
        let g = GraphState::parse_witness_line(text.trim())?;
        if g.dimension() != dim || g.parties() != parties {
            return Err(Error::InvalidAdjacency(format!(
                "witness is for n={} d={}, but --parties {parties} --dim {dim} was given",
                g.parties(),
                g.dimension()
            )));
        }
        return Ok(g);
    }
    let upper: Vec<i64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|e| Error::InvalidAdjacency(format!("{t:?}: {e}"))))
        .collect::<Result<_>>()?;
    GraphState::from_upper(dim, parties, &upper)
}

/// Emits a generator file.
pub fn cmd_construct(kind: ConstructKind, dim: u64, parties: usize, adjacency: Option<&str>) -> Result<String> {
    let g = match kind {
        ConstructKind::Ghz => construct::ghz(dim, parties)?,
        ConstructKind::Bell => {
            if parties != 2 {
                return Err(Error::InvalidConfig(format!("bell states have 2 parties, got {parties}")));
            }
            construct::bell(dim)?
        }
        ConstructKind::Graph => {
            let text = adjacency.ok_or_else(|| Error::InvalidConfig("graph construction needs --adjacency".into()))?;
            parse_adjacency(text, dim, parties)?.to_group()?
        }
    };
    Ok(write_generator_file(&g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
}

/// Line-oriented AME report with exit code 0 (AME), 1 (not AME) or
/// 2 (the generators do not define a stabilizer state).
pub fn cmd_verify(gens: &str, method: Method, cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    let g = parse_generator_file(gens)?;
    let mut text = String::new();
    writeln!(text, "D={} n={} k={}", g.dimension(), g.parties(), g.generators().len()).unwrap();
    let report = validate(&g);
    writeln!(text, "valid={} {report}", yes_no(report.stabilizes_unique_state)).unwrap();
    if !report.stabilizes_unique_state {
        return Ok(CommandOutput { text, exit_code: EXIT_INVALID });
    }

    let v = verify_ame(&g, method, cfg.tolerance, cfg.dense_budget)?;
    writeln!(text, "method={}", v.method).unwrap();
    writeln!(text, "ame={}", yes_no(v.is_ame)).unwrap();
    if let Some(w) = &v.witness {
        writeln!(text, "witness subset={} element={}", join(&w.subset), w.element).unwrap();
    }
    if let (Some(s), Some(dev)) = (&v.worst_subset, v.worst_deviation) {
        writeln!(text, "worst_subset={} worst_deviation={dev:.3e}", join(s)).unwrap();
    }
    Ok(CommandOutput { text, exit_code: if v.is_ame { EXIT_AME } else { EXIT_NOT_AME } })
}

/// Factor groups of the input, optionally with dense checks, per-factor AME
/// verdicts and every nonempty subset merge.
pub fn cmd_decompose(gens: &str, verify: bool, cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let g = parse_generator_file(gens)?;
    let opts = DecomposeOptions { dense: verify, dense_budget: cfg.dense_budget, tol: cfg.tolerance };
    if !verify {
        let dec = crate::ame::decompose_with(&g, &opts)?;
        return Ok(dec.report(&[]));
    }
    let (reduction, dec) = reduce_ame_with(&g, &opts)?;
    let mut out = dec.report(&reduction.factors);
    writeln!(out, "input ame={}", yes_no(reduction.input.is_ame)).unwrap();
    let m = dec.factorization.len();
    if m > 1 {
        for mask in 1u32..(1 << m) {
            let subset: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let merged = merge_factors(&dec, &subset)?;
            let ame = verify_ame_symbolic(&merged.group)?.is_ame;
            let label: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(out, "merge M={{{}}} d={} ame={}", label.join(","), merged.factorization.dimension(), yes_no(ame))
                .unwrap();
        }
    }
    Ok(out)
}

/// Witness lines followed by an `EXHAUSTED` or `PARTIAL` certificate.
pub fn cmd_search(
    parties: usize,
    dim: u64,
    mode: SearchMode,
    shard: Option<Range<u128>>,
    cfg: &RunConfig,
) -> Result<String> {
    cfg.validate()?;
    let opts =
        SearchOptions { budget: cfg.search_budget, shard, dense_check_budget: cfg.dense_budget, completeness: None };
    Ok(search_ame(parties, dim, mode, &opts)?.render())
}

/// Propagated no-go table. Without a facts file the shipped facts are used.
pub fn cmd_nogo(facts: Option<&str>, max_parties: usize, max_dim: u64, format: TableFormat) -> Result<String> {
    if max_parties < 2 || max_dim < 2 {
        return Err(Error::InvalidConfig(format!(
            "table needs at least 2 parties and D ≥ 2, got {max_parties} and {max_dim}"
        )));
    }
    let facts = load_facts(facts.unwrap_or(DEFAULT_FACTS))?;
    Ok(emit_table(&propagate(&facts, max_parties, max_dim)?, format))
}

/// Parses `start:end` (half-open).
pub fn parse_shard(text: &str) -> Result<Range<u128>> {
    let bad = || Error::InvalidConfig(format!("shard must be `start:end`, got {text:?}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let start: u128 = a.trim().parse().map_err(|_| bad())?;
    let end: u128 = b.trim().parse().map_err(|_| bad())?;
    if start > end {
        return Err(bad());
    }
    Ok(start..end)
}

/// Reads a generator group from text, used by tests and examples.
pub fn load_group(text: &str) -> Result<StabilizerGroup> {
    parse_generator_file(text)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(RunConfig { tolerance: 0.0, ..cfg() }.validate().is_err());
        assert!(RunConfig { tolerance: f64::NAN, ..cfg() }.validate().is_err());
        assert!(RunConfig { dense_budget: 0, ..cfg() }.validate().is_err());
        assert!(RunConfig { search_budget: 0, ..cfg() }.validate().is_err());
    }

    #[test]
    fn verify_exit_codes() {
        let bell = cmd_construct(ConstructKind::Bell, 5, 2, None).unwrap();
        let out = cmd_verify(&bell, Method::Both, &cfg()).unwrap();
        assert_eq!(out.exit_code, EXIT_AME, "{}", out.text);
        assert!(out.text.contains("ame=yes"));

        let zero = write_generator_file(&construct::zero_product(3, 2).unwrap());
        let out = cmd_verify(&zero, Method::Symbolic, &cfg()).unwrap();
        assert_eq!(out.exit_code, EXIT_NOT_AME);
        assert!(out.text.contains("witness subset=0"));

        let bad = "2 2 2\n0 | 1 0 | 0 0\n0 | 0 0 | 1 0\n";
        let out = cmd_verify(bad, Method::Both, &cfg()).unwrap();
        assert_eq!(out.exit_code, EXIT_INVALID);
        assert!(out.text.contains("abelian=false"));
    }

    #[test]
    fn construct_round_trips() {
        let ghz = cmd_construct(ConstructKind::Ghz, 6, 3, None).unwrap();
        assert!(ghz.starts_with("6 3 3\n"));
        // three-party GHZ has maximally mixed single-party marginals
        assert_eq!(cmd_verify(&ghz, Method::Both, &cfg()).unwrap().exit_code, EXIT_AME);
        let ghz4 = cmd_construct(ConstructKind::Ghz, 3, 4, None).unwrap();
        assert_eq!(cmd_verify(&ghz4, Method::Both, &cfg()).unwrap().exit_code, EXIT_NOT_AME);
        assert!(cmd_construct(ConstructKind::Bell, 5, 3, None).is_err());
        assert!(cmd_construct(ConstructKind::Graph, 3, 4, None).is_err());

        let found = search_ame(4, 3, SearchMode::FirstWitness, &SearchOptions::default()).unwrap();
        let line = found.found[0].witness_line();
        let g = cmd_construct(ConstructKind::Graph, 3, 4, Some(&line)).unwrap();
        assert_eq!(cmd_verify(&g, Method::Both, &cfg()).unwrap().exit_code, EXIT_AME);
        let upper = line.split(':').nth(1).unwrap().trim().replace(' ', ",");
        assert_eq!(cmd_construct(ConstructKind::Graph, 3, 4, Some(&upper)).unwrap(), g);
        assert!(cmd_construct(ConstructKind::Graph, 3, 5, Some(&line)).is_err());
    }

    #[test]
    fn decompose_reports() {
        let ghz = cmd_construct(ConstructKind::Ghz, 6, 3, None).unwrap();
        let r = cmd_decompose(&ghz, true, &cfg()).unwrap();
        assert!(r.starts_with("factorization D=6 = 2^1 * 3^1\n"));
        assert!(r.contains("# factor q=2\n2 3 3\n"));
        assert!(r.contains("# factor q=3\n3 3 3\n"));
        assert!(r.contains("# dense check: passed"));

        let bell = cmd_construct(ConstructKind::Bell, 6, 2, None).unwrap();
        let r = cmd_decompose(&bell, true, &cfg()).unwrap();
        assert!(r.contains("factor q=2 ame=yes\nfactor q=3 ame=yes\n"));
        for m in ["merge M={1} d=2 ame=yes", "merge M={2} d=3 ame=yes", "merge M={1,2} d=6 ame=yes"] {
            assert!(r.contains(m), "{m}\n{r}");
        }

        let prime = cmd_construct(ConstructKind::Bell, 7, 2, None).unwrap();
        let r = cmd_decompose(&prime, false, &cfg()).unwrap();
        assert_eq!(r.matches("# factor").count(), 1);
        assert!(r.contains("# dense check: skipped"));
    }

    #[test]
    fn search_and_nogo_are_deterministic() {
        let a = cmd_search(4, 2, SearchMode::Exhaustive, None, &cfg()).unwrap();
        assert_eq!(a, "EXHAUSTED n=4 d=2 searched=64 witnesses=0\n# no stabilizer AME(4,2) state\n");
        let s = cmd_search(4, 3, SearchMode::Exhaustive, Some(parse_shard("0:100").unwrap()), &cfg()).unwrap();
        assert!(s.ends_with("witnesses=0\n") || s.contains("PARTIAL n=4 d=3 range=0:100"));
        assert_eq!(s, cmd_search(4, 3, SearchMode::Exhaustive, Some(0..100), &cfg()).unwrap());

        let svg1 = cmd_nogo(None, 8, 36, TableFormat::Svg).unwrap();
        assert_eq!(svg1, cmd_nogo(None, 8, 36, TableFormat::Svg).unwrap());
        assert!(cmd_nogo(None, 1, 36, TableFormat::Csv).is_err());
    }

    #[test]
    fn shard_parsing() {
        assert_eq!(parse_shard("3:10").unwrap(), 3..10);
        assert!(parse_shard("10:3").is_err());
        assert!(parse_shard("7").is_err());
    }
}
