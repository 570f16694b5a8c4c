//! No-go propagation over `(n, D)`.
//!
//! Facts are only ever stated for prime powers `q`. A cell `(n, D)` is
//! excluded when some prime-power factor `q_i` of `D` carries a
//! `noStabAME` fact at `(n, q_i)`: a stabilizer AME state at `(n, D)` would
//! yield one at every `(n, q_i)`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::ring::{factorize, prime_power_base};
use crate::{Error, Result};

/// The shipped facts file: the single known prime-power non-existence result
/// needed for the four-party row.
pub const DEFAULT_FACTS: &str = "# n q status source\n4 2 noAME higuchi2000\n";

pub const DEFAULT_MAX_PARTIES: usize = 8;
pub const DEFAULT_MAX_DIM: u64 = 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactStatus {
    NoAme,
    NoStabAme,
    StabAmeExists,
}

impl FactStatus {
    /// `noAME` implies `noStabAME`.
    pub fn excludes_stabilizer(self) -> bool {
        matches!(self, FactStatus::NoAme | FactStatus::NoStabAme)
    }
}

impl fmt::Display for FactStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactStatus::NoAme => "noAME",
            FactStatus::NoStabAme => "noStabAME",
            FactStatus::StabAmeExists => "stabAMEExists",
        })
    }
}

impl FromStr for FactStatus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "noAME" => Ok(Self::NoAme),
            "noStabAME" => Ok(Self::NoStabAme),
            "stabAMEExists" => Ok(Self::StabAmeExists),
            other => Err(format!("unknown status {other:?} (expected noAME, noStabAME or stabAMEExists)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownFact {
    pub parties: usize,
    pub local_dim: u64,
    pub status: FactStatus,
    pub source: String,
}

/// Parses `n q status source…` lines; `#` starts a comment line.
pub fn load_facts(text: &str) -> Result<Vec<KnownFact>> {
    let mut facts: Vec<KnownFact> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(Error::Parse { line, message: format!("expected `n q status source…`, got {body:?}") });
        }
        let parties: usize =
            fields[0].parse().map_err(|e| Error::Parse { line, message: format!("bad party count: {e}") })?;
        let q: u64 = fields[1].parse().map_err(|e| Error::Parse { line, message: format!("bad dimension: {e}") })?;
        let status: FactStatus = fields[2].parse().map_err(|message| Error::Parse { line, message })?;
        if parties < 2 {
            return Err(Error::Parse { line, message: format!("party count must be at least 2, got {parties}") });
        }
        if prime_power_base(q).is_none() {
            return Err(Error::NotPrimePower { line, q });
        }
        let fact = KnownFact { parties, local_dim: q, status, source: fields[3..].join(" ") };
        if let Some(prev) = facts.iter().find(|f| f.parties == parties && f.local_dim == q) {
            if prev.status.excludes_stabilizer() != fact.status.excludes_stabilizer() {
                return Err(Error::FactConflict {
                    n: parties,
                    q,
                    first: format!("{} ({})", prev.status, prev.source),
                    second: format!("{} ({})", fact.status, fact.source),
                });
            }
        }
        facts.push(fact);
    }
    Ok(facts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellStatus {
    /// Excluded through these `(q, source)` pairs, in factor order.
    Excluded(Vec<(u64, String)>),
    Witness(String),
    Unknown,
}

impl CellStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CellStatus::Excluded(_) => "excluded",
            CellStatus::Witness(_) => "witness",
            CellStatus::Unknown => "unknown",
        }
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self, CellStatus::Excluded(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoGoTable {
    pub max_parties: usize,
    pub max_dim: u64,
    /// Rows `n = 2..=max_parties`, columns `D = 2..=max_dim`.
    pub cells: BTreeMap<(usize, u64), CellStatus>,
}

impl NoGoTable {
    pub fn get(&self, n: usize, d: u64) -> Option<&CellStatus> {
        self.cells.get(&(n, d))
    }

    pub fn parties(&self) -> impl Iterator<Item = usize> {
        2..=self.max_parties
    }

    pub fn dims(&self) -> impl Iterator<Item = u64> {
        2..=self.max_dim
    }
}

/// Applies the prime-power propagation rule. An excluded cell that also has a
/// witness fact aborts with [`Error::Soundness`].
pub fn propagate(facts: &[KnownFact], max_parties: usize, max_dim: u64) -> Result<NoGoTable> {
    let mut cells = BTreeMap::new();
    for n in 2..=max_parties {
        for d in 2..=max_dim {
            let f = factorize(d)?;
            let mut reasons: Vec<(u64, String)> = Vec::new();
            for q in f.prime_powers() {
                if let Some(fact) =
                    facts.iter().find(|k| k.parties == n && k.local_dim == q && k.status.excludes_stabilizer())
                {
                    reasons.push((q, fact.source.clone()));
                }
            }
            let witness =
                facts.iter().find(|k| k.parties == n && k.local_dim == d && k.status == FactStatus::StabAmeExists);
            let status = match (reasons.is_empty(), witness) {
                (false, Some(w)) => {
                    return Err(Error::Soundness { n, d, via: reasons[0].0, source_note: w.source.clone() });
                }
                (false, None) => CellStatus::Excluded(reasons),
                (true, Some(w)) => CellStatus::Witness(w.source.clone()),
                (true, None) => CellStatus::Unknown,
            };
            cells.insert((n, d), status);
        }
    }
    Ok(NoGoTable { max_parties, max_dim, cells })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    /// Long CSV `n,D,status,reason` keeping the exclusion chains.
    CsvWithReasons,
    Svg,
}

pub fn emit_table(t: &NoGoTable, format: TableFormat) -> String {
    match format {
        TableFormat::Csv => emit_csv(t),
        TableFormat::CsvWithReasons => emit_csv_long(t),
        TableFormat::Svg => emit_svg(t),
    }
}

fn emit_csv(t: &NoGoTable) -> String {
    let mut out = String::from("n\\D");
    for d in t.dims() {
        write!(out, ",{d}").unwrap();
    }
    out.push('\n');
    for n in t.parties() {
        write!(out, "{n}").unwrap();
        for d in t.dims() {
            write!(out, ",{}", t.cells[&(n, d)].label()).unwrap();
        }
        out.push('\n');
    }
    out
}

fn emit_csv_long(t: &NoGoTable) -> String {
    let mut out = String::from("n,D,status,reason\n");
    for n in t.parties() {
        for d in t.dims() {
            let cell = &t.cells[&(n, d)];
            let reason = match cell {
                CellStatus::Excluded(rs) => {
                    rs.iter().map(|(q, s)| format!("q={q} ({s})")).collect::<Vec<_>>().join("; ")
                }
                CellStatus::Witness(s) => s.clone(),
                CellStatus::Unknown => String::new(),
            };
            writeln!(out, "{n},{d},{},{}", cell.label(), csv_quote(&reason)).unwrap();
        }
    }
    out
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Reads the grid CSV back into `(n, D) → label`.
pub fn parse_csv(text: &str) -> Result<BTreeMap<(usize, u64), String>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse { line: 0, message: "empty CSV".into() })?;
    let mut cols = header.split(',');
    if cols.next() != Some("n\\D") {
        return Err(Error::Parse { line: 1, message: "header must start with n\\D".into() });
    }
    let dims: Vec<u64> = cols
        .map(|c| c.parse().map_err(|e| Error::Parse { line: 1, message: format!("bad column {c:?}: {e}") }))
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for (i, l) in lines {
        let mut fields = l.split(',');
        let n: usize = fields
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|e| Error::Parse { line: i + 1, message: format!("bad row label: {e}") })?;
        let values: Vec<&str> = fields.collect();
        if values.len() != dims.len() {
            return Err(Error::Parse { line: i + 1, message: "row length differs from header".into() });
        }
        for (&d, v) in dims.iter().zip(values) {
            if !matches!(v, "excluded" | "witness" | "unknown") {
                return Err(Error::Parse { line: i + 1, message: format!("bad cell {v:?}") });
            }
            out.insert((n, d), v.to_string());
        }
    }
    Ok(out)
}

const CELL: u64 = 20;
const LEFT: u64 = 40;
const TOP: u64 = 40;
const RED: &str = "#d62728";
const GREEN: &str = "#2ca02c";
const GRAY: &str = "#c7c7c7";

fn emit_svg(t: &NoGoTable) -> String {
    let cols = t.max_dim.saturating_sub(1);
    let rows = t.max_parties.saturating_sub(1) as u64;
    let grid_w = cols * CELL;
    let grid_h = rows * CELL;
    let width = LEFT + grid_w + 20;
    let height = TOP + grid_h + 90;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    )
    .unwrap();
    writeln!(s, r#"<title>Stabilizer AME(n,D) no-go table</title>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="14" text-anchor="middle" font-size="12">D (local dimension)</text>"#,
        LEFT + grid_w / 2
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="12" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 12 {})">n (parties)</text>"#,
        TOP + grid_h / 2,
        TOP + grid_h / 2
    )
    .unwrap();

    for (ci, d) in t.dims().enumerate() {
        let x = LEFT + ci as u64 * CELL + CELL / 2;
        writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{d}</text>"#, TOP - 6).unwrap();
    }
    for (ri, n) in t.parties().enumerate() {
        let y = TOP + ri as u64 * CELL;
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{n}</text>"#, LEFT - 4, y + CELL / 2 + 4).unwrap();
        for (ci, d) in t.dims().enumerate() {
            let x = LEFT + ci as u64 * CELL;
            let (fill, tip) = match &t.cells[&(n, d)] {
                CellStatus::Excluded(rs) => {
                    let via: Vec<String> = rs.iter().map(|(q, _)| format!("q={q}")).collect();
                    (RED, format!("excluded via {}", via.join(", ")))
                }
                CellStatus::Witness(src) => (GREEN, format!("witness: {}", xml_escape(src))),
                CellStatus::Unknown => (GRAY, "unknown".to_string()),
            };
            writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="white" stroke-width="1"><title>({n},{d}) {tip}</title></rect>"#
            )
            .unwrap();
        }
    }

    let ly = TOP + grid_h + 20;
    let legend = [
        (RED, "stabilizer AME(n,D) guaranteed not to exist"),
        (GREEN, "stabilizer AME(n,D) known to exist"),
        (GRAY, "undetermined"),
    ];
    for (i, (fill, label)) in legend.iter().enumerate() {
        let y = ly + i as u64 * 18;
        writeln!(s, r#"<rect x="{LEFT}" y="{y}" width="12" height="12" fill="{fill}"/>"#).unwrap();
        writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, LEFT + 18, y + 10).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
