//! Line-oriented generator files:
//!
//! ```text
//! # comment
//! D n k
//! gamma | x_1 … x_n | z_1 … z_n      (k lines)
//! ```

use std::fmt::Write;

use super::StabilizerGroup;
use crate::pauli::PauliProduct;
use crate::{Error, Result};

pub fn parse_generator_file(text: &str) -> Result<StabilizerGroup> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(Error::Parse { line: 0, message: "empty generator file".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse = |s: &str, what: &str| -> Result<u64> {
        s.parse::<u64>().map_err(|e| Error::Parse { line, message: format!("bad {what} {s:?}: {e}") })
    };
    if fields.len() != 3 {
        return Err(Error::Parse { line, message: format!("header must be `D n k`, got {header:?}") });
    }
    let dim = parse(fields[0], "dimension")?;
    let parties = parse(fields[1], "party count")? as usize;
    let count = parse(fields[2], "generator count")? as usize;
    if dim < 2 {
        return Err(Error::Parse { line, message: format!("dimension must be at least 2, got {dim}") });
    }
    if parties == 0 {
        return Err(Error::Parse { line, message: "party count must be positive".into() });
    }

    let mut generators = Vec::with_capacity(count);
    for (line, body) in lines.by_ref() {
        let p = PauliProduct::parse(body, dim).map_err(|message| Error::Parse { line, message })?;
        if p.parties() != parties {
            return Err(Error::Parse {
                line,
                message: format!("generator acts on {} parties, header says {parties}", p.parties()),
            });
        }
        generators.push(p);
        if generators.len() == count {
            break;
        }
    }
    if generators.len() != count {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("header announces {count} generators, found {}", generators.len()),
        });
    }
    if let Some((line, extra)) = lines.next() {
        return Err(Error::Parse { line, message: format!("unexpected trailing line {extra:?}") });
    }
    StabilizerGroup::new(dim, parties, generators)
}

pub fn write_generator_file(g: &StabilizerGroup) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", g.dimension(), g.parties(), g.generators().len()).unwrap();
    for p in g.generators() {
        writeln!(out, "{p}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments() {
        let text = "# Bell pair\n2 2 2\n0 | 1 1 | 0 0\n\n# ZZ\n0 | 0 0 | 1 1\n";
        let g = parse_generator_file(text).unwrap();
        assert_eq!(g.dimension(), 2);
        assert_eq!(g.generators().len(), 2);
        assert_eq!(write_generator_file(&g), "2 2 2\n0 | 1 1 | 0 0\n0 | 0 0 | 1 1\n");
        assert_eq!(parse_generator_file(&write_generator_file(&g)).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_generator_file("2 2 2\n0 | 1 1 | 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }), "{e}");
        let e = parse_generator_file("2 2 1\n0 | 1 | 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_generator_file("# c\n2 2 1\n0 | 1 1 | 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_generator_file("2 2 1\n0 | 1 1 | 0 0\n0 | 1 1 | 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(parse_generator_file("1 2 0\n").is_err());
        assert!(parse_generator_file("2 x 0\n").is_err());
        assert!(parse_generator_file("").is_err());
    }
}
