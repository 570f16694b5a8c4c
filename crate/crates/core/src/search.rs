//! Exhaustive search over `Z_d`-weighted graph states.
//!
//! Candidates are numbered by reading the upper triangle `a_{12} a_{13} …
//! a_{(n-1)n}` (row-major) as a base-`d` number with `a_{12}` most
//! significant, so a shard is just an index range and results are ordered.

use std::fmt::{self, Write as _};
use std::ops::Range;

use itertools::Itertools;
use rayon::prelude::*;

use crate::ame::is_ame_symbolic_unchecked;
use crate::pauli::PauliProduct;
use crate::ring::prime_power_base;
use crate::stabgroup::StabilizerGroup;
use crate::statevec::{state_from_group, verify_ame_dense, DEFAULT_DENSE_BUDGET};
use crate::{Error, Result, STATE_TOL};

/// Default cap on the number of candidates an exhaustive run may visit.
pub const DEFAULT_SEARCH_BUDGET: u128 = 100_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphState {
    dim: u64,
    parties: usize,
    adjacency: Vec<Vec<u64>>,
}

impl GraphState {
    pub fn from_adjacency(dim: u64, adjacency: Vec<Vec<u64>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let n = adjacency.len();
        if n == 0 {
            return Err(Error::InvalidAdjacency("no vertices".into()));
        }
        for (i, row) in adjacency.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAdjacency(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row[i] != 0 {
                return Err(Error::InvalidAdjacency(format!("nonzero diagonal entry at {i}")));
            }
            for (j, &a) in row.iter().enumerate() {
                if a >= dim {
                    return Err(Error::InvalidAdjacency(format!("entry ({i},{j}) = {a} not below {dim}")));
                }
                if adjacency[j][i] != a {
                    return Err(Error::InvalidAdjacency(format!("not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { dim, parties: n, adjacency })
    }

    /// From upper-triangle weights `a_{12} a_{13} … a_{(n-1)n}`, each in `[0, d)`.
    pub fn from_upper(dim: u64, parties: usize, upper: &[i64]) -> Result<Self> {
        let expected = parties * parties.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::InvalidAdjacency(format!(
                "{} upper-triangle entries for {parties} vertices, expected {expected}",
                upper.len()
            )));
        }
        if let Some(bad) = upper.iter().find(|&&a| a < 0 || a as u64 >= dim) {
            return Err(Error::InvalidAdjacency(format!("weight {bad} outside [0, {dim})")));
        }
        let mut adj = vec![vec![0u64; parties]; parties];
        for ((i, j), &a) in (0..parties).tuple_combinations().zip(upper) {
            adj[i][j] = a as u64;
            adj[j][i] = a as u64;
        }
        Self::from_adjacency(dim, adj)
    }

    /// Candidate number `index` in search order.
    pub fn from_index(dim: u64, parties: usize, mut index: u128) -> Result<Self> {
        let edges = parties * parties.saturating_sub(1) / 2;
        let space = search_space(dim, parties);
        if index >= space {
            return Err(Error::InvalidAdjacency(format!("index {index} outside search space of {space}")));
        }
        let mut upper = vec![0i64; edges];
        for slot in upper.iter_mut().rev() {
            *slot = (index % dim as u128) as i64;
            index /= dim as u128;
        }
        Self::from_upper(dim, parties, &upper)
    }

    pub fn dimension(&self) -> u64 {
        self.dim
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn adjacency(&self) -> &[Vec<u64>] {
        &self.adjacency
    }

    pub fn upper(&self) -> Vec<u64> {
        (0..self.parties)
            .flat_map(|i| (i + 1..self.parties).map(move |j| (i, j)))
            .map(|(i, j)| self.adjacency[i][j])
            .collect()
    }

    pub fn index(&self) -> u128 {
        self.upper().iter().fold(0u128, |acc, &a| acc * self.dim as u128 + a as u128)
    }

    /// Generators `g_v = X_v ∏_u Z_u^{A_{vu}}`, all with phase 0.
    pub fn to_group(&self) -> Result<StabilizerGroup> {
        let gens = (0..self.parties)
            .map(|v| PauliProduct::from_parts(self.dim, 0, unit(self.parties, v), self.adjacency[v].clone()))
            .collect();
        StabilizerGroup::new(self.dim, self.parties, gens)
    }

    /// `n d : a_{12} a_{13} … a_{(n-1)n}`
    pub fn witness_line(&self) -> String {
        let upper: Vec<String> = self.upper().iter().map(u64::to_string).collect();
        format!("{} {} : {}", self.parties, self.dim, upper.join(" ")).trim_end().to_string()
    }

    pub fn parse_witness_line(line: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse { line: 1, message: m };
        let (head, tail) = line.split_once(':').ok_or_else(|| bad(format!("missing ':' in {line:?}")))?;
        let head: Vec<u64> = head
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| bad(format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?;
        if head.len() != 2 {
            return Err(bad("witness must start with `n d :`".into()));
        }
        let upper: Vec<i64> = tail
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| bad(format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?;
        Self::from_upper(head[1], head[0] as usize, &upper)
    }
}

impl fmt::Debug for GraphState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphState({})", self.witness_line())
    }
}

fn unit(n: usize, v: usize) -> Vec<u64> {
    let mut x = vec![0; n];
    x[v] = 1;
    x
}

/// Number of candidate graphs `d^{n(n-1)/2}` (saturating).
pub fn search_space(dim: u64, parties: usize) -> u128 {
    let edges = parties * parties.saturating_sub(1) / 2;
    (0..edges).fold(1u128, |acc, _| acc.saturating_mul(dim as u128))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    FirstWitness,
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: u128,
    /// Restrict to candidate indices in this range (clamped to the space).
    pub shard: Option<Range<u128>>,
    /// Re-verify every witness densely when `d^n` fits this budget.
    pub dense_check_budget: usize,
    /// Whether exhausting graph states rules out all stabilizer states for this `d`.
    /// `None` means on for prime `d`, off otherwise.
    pub completeness: Option<bool>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_SEARCH_BUDGET,
            shard: None,
            dense_check_budget: DEFAULT_DENSE_BUDGET,
            completeness: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub parties: usize,
    pub dim: u64,
    pub range: Range<u128>,
    pub found: Vec<GraphState>,
    pub searched: u128,
    /// True only when the whole candidate space was enumerated.
    pub exhausted: bool,
    /// Graph-state exhaustion is complete for stabilizer states at this `d`.
    pub complete_for_stabilizers: bool,
}

impl SearchOutcome {
    /// Witness lines, then the certificate (`EXHAUSTED …` for a full run,
    /// `PARTIAL …` otherwise) and a comment stating what the run establishes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for g in &self.found {
            writeln!(out, "{}", g.witness_line()).unwrap();
        }
        let (n, d) = (self.parties, self.dim);
        if self.exhausted {
            writeln!(out, "EXHAUSTED n={n} d={d} searched={} witnesses={}", self.searched, self.found.len()).unwrap();
            if self.found.is_empty() {
                if self.complete_for_stabilizers {
                    writeln!(out, "# no stabilizer AME({n},{d}) state").unwrap();
                } else {
                    writeln!(out, "# no graph-state AME({n},{d}) state").unwrap();
                }
            }
        } else {
            writeln!(
                out,
                "PARTIAL n={n} d={d} range={}:{} searched={} witnesses={}",
                self.range.start,
                self.range.end,
                self.searched,
                self.found.len()
            )
            .unwrap();
        }
        out
    }
}

fn is_ame_graph(dim: u64, parties: usize, index: u128) -> bool {
    let g = GraphState::from_index(dim, parties, index).and_then(|g| g.to_group()).expect("index inside space");
    is_ame_symbolic_unchecked(&g)
}

fn dense_confirm(g: &GraphState, budget: usize) -> Result<()> {
    let fits = crate::pauli::hilbert_dimension(g.dim, g.parties).is_some_and(|s| s <= budget);
    if !fits {
        return Ok(());
    }
    let psi = state_from_group(&g.to_group()?, budget)?;
    let report = verify_ame_dense(&psi, STATE_TOL, budget)?;
    if !report.is_ame {
        return Err(Error::Inconsistency(format!(
            "graph {} passes the symbolic test but has dense deviation {:e}",
            g.witness_line(),
            report.worst_deviation
        )));
    }
    Ok(())
}

pub fn search_ame(parties: usize, dim: u64, mode: SearchMode, opts: &SearchOptions) -> Result<SearchOutcome> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    if parties == 0 {
        return Err(Error::ShapeMismatch("search needs at least one party".into()));
    }
    let space = search_space(dim, parties);
    let range = match &opts.shard {
        Some(r) => r.start.min(space)..r.end.min(space),
        None => 0..space,
    };
    let full = range.start == 0 && range.end == space;

    let (found_idx, searched) = match mode {
        SearchMode::Exhaustive => {
            let len = range.end.saturating_sub(range.start);
            if len > opts.budget {
                return Err(Error::SearchBudget { size: len, budget: opts.budget });
            }
            let (start, end) = (range.start as u64, range.end as u64);
            let hits: Vec<u128> = (start..end)
                .into_par_iter()
                .filter(|&i| is_ame_graph(dim, parties, i as u128))
                .map(u128::from)
                .collect();
            (hits, len)
        }
        SearchMode::FirstWitness => {
            let mut searched = 0u128;
            let mut hit = None;
            let mut i = range.start;
            while i < range.end {
                searched += 1;
                if is_ame_graph(dim, parties, i) {
                    hit = Some(i);
                    break;
                }
                i += 1;
            }
            (hit.into_iter().collect(), searched)
        }
    };

    let found = found_idx.into_iter().map(|i| GraphState::from_index(dim, parties, i)).collect::<Result<Vec<_>>>()?;
    for g in &found {
        dense_confirm(g, opts.dense_check_budget)?;
    }
    let exhausted = full && searched == range.end - range.start;
    let complete_for_stabilizers = opts.completeness.unwrap_or_else(|| prime_power_base(dim) == Some(dim));

    Ok(SearchOutcome { parties, dim, range, found, searched, exhausted, complete_for_stabilizers })
}
