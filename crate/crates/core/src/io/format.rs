//! Text formats for covector systems and arrangement matrices.
//!
//! ```text
//! # comment
//! ground: H1 H2 H3
//! covectors:
//! 000
//! +0-
//! ```
//!
//! The body section is one of `covectors:`, `topes:` (covectors are then
//! reconstructed) or `matrix:` (rows of rational entries `p/q`, one per label).

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::oriented_matroid::{from_arrangement, CovectorSystem, RationalArrangement};
use crate::poset::SimplicialComplexRecord;
use crate::sign_vectors::SignVector;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Covectors,
    Topes,
    Matrix,
}

/// Meaningful lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn parse_om(text: &str) -> Result<CovectorSystem> {
    let mut labels: Option<Vec<String>> = None;
    let mut section = None;
    let mut body: Vec<(usize, &str)> = Vec::new();
    for (no, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("ground:") {
            if labels.is_some() {
                return Err(parse_err(no, "duplicate ground line"));
            }
            labels = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        let header = match line {
            "covectors:" => Some(Section::Covectors),
            "topes:" => Some(Section::Topes),
            "matrix:" => Some(Section::Matrix),
            _ => None,
        };
        if let Some(h) = header {
            if section.is_some() {
                return Err(parse_err(no, "more than one body section"));
            }
            section = Some(h);
            continue;
        }
        if section.is_none() {
            return Err(parse_err(
                no,
                format!("unexpected line `{line}` before a section header"),
            ));
        }
        body.push((no, line));
    }
    let labels = labels.ok_or_else(|| parse_err(0, "missing `ground:` line"))?;
    let section = section.ok_or_else(|| parse_err(0, "missing body section"))?;
    if section == Section::Matrix {
        let forms = body
            .iter()
            .map(|&(no, l)| parse_row(no, l))
            .collect::<Result<Vec<_>>>()?;
        let arr = RationalArrangement::new(labels, forms)?;
        return from_arrangement(&arr);
    }
    let mut seen = HashSet::new();
    let mut vectors = Vec::new();
    for &(no, l) in &body {
        let v = SignVector::parse(l).map_err(|e| match e {
            Error::Parse { message, .. } => parse_err(no, message),
            other => other,
        })?;
        if v.len() != labels.len() {
            return Err(parse_err(
                no,
                format!(
                    "`{l}` has {} entries, ground set has {}",
                    v.len(),
                    labels.len()
                ),
            ));
        }
        if !seen.insert(v) {
            return Err(parse_err(no, format!("duplicate line `{l}`")));
        }
        vectors.push(v);
    }
    match section {
        Section::Covectors => {
            if !seen.contains(&SignVector::zero(labels.len())) {
                return Err(parse_err(0, "zero vector missing from covector list"));
            }
            CovectorSystem::new(labels, vectors)
        }
        Section::Topes => CovectorSystem::from_topes(labels, vectors),
        Section::Matrix => unreachable!("handled above"),
    }
}

fn parse_row(no: usize, line: &str) -> Result<Vec<BigRational>> {
    line.split_whitespace()
        .map(|tok| {
            BigRational::from_str(tok)
                .map_err(|_| parse_err(no, format!("invalid rational `{tok}`")))
        })
        .collect()
}

/// Canonical covector listing; `parse_om(&print_om(c)) == c`.
pub fn print_om(c: &CovectorSystem) -> String {
    let mut out = String::new();
    writeln!(out, "ground: {}", c.labels().join(" ")).unwrap();
    writeln!(out, "covectors:").unwrap();
    for v in c.covectors() {
        writeln!(out, "{v}").unwrap();
    }
    out
}

/// Tope-only listing.
pub fn print_topes(c: &CovectorSystem) -> String {
    let mut out = String::new();
    writeln!(out, "ground: {}", c.labels().join(" ")).unwrap();
    writeln!(out, "topes:").unwrap();
    for v in c.topes() {
        writeln!(out, "{v}").unwrap();
    }
    out
}

/// Matrix file: optional `labels:` line, then one row of `p/q` entries per line.
/// Missing labels default to `H1, H2, ...`.
pub fn parse_matrix(text: &str) -> Result<RationalArrangement> {
    let mut labels = None;
    let mut rows = Vec::new();
    for (no, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("labels:") {
            labels = Some(
                rest.split_whitespace()
                    .map(str::to_string)
                    .collect::<Vec<_>>(),
            );
            continue;
        }
        if line == "matrix:" {
            continue;
        }
        rows.push(parse_row(no, line)?);
    }
    let labels = labels.unwrap_or_else(|| (1..=rows.len()).map(|i| format!("H{i}")).collect());
    RationalArrangement::new(labels, rows)
}

pub fn print_matrix(arr: &RationalArrangement) -> String {
    let mut out = String::new();
    writeln!(out, "labels: {}", arr.labels.join(" ")).unwrap();
    for row in &arr.forms {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

/// Simplicial complex file: one facet per line as whitespace separated
/// vertex names. Vertices are numbered in order of first appearance.
pub fn parse_complex(text: &str) -> Result<SimplicialComplexRecord> {
    let mut vertices: Vec<String> = Vec::new();
    let mut facets = Vec::new();
    for (no, line) in content_lines(text) {
        let mut facet = Vec::new();
        for name in line.split_whitespace() {
            let i = match vertices.iter().position(|v| v == name) {
                Some(i) => i,
                None => {
                    vertices.push(name.to_string());
                    vertices.len() - 1
                }
            };
            if facet.contains(&i) {
                return Err(parse_err(
                    no,
                    format!("vertex `{name}` repeated in a facet"),
                ));
            }
            facet.push(i);
        }
        facets.push(facet);
    }
    SimplicialComplexRecord::from_facets(vertices, &facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covector_file_round_trip() {
        let text = "# rank one\nground: e\ncovectors:\n0\n+\n-\n";
        let c = parse_om(text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(parse_om(&print_om(&c)).unwrap(), c);
        assert_eq!(parse_om(&print_topes(&c)).unwrap(), c);
    }

    #[test]
    fn malformed_files() {
        let short = parse_om("ground: a b\ncovectors:\n00\n+\n");
        assert!(matches!(short, Err(Error::Parse { line: 4, .. })));
        let dup = parse_om("ground: a\ncovectors:\n0\n+\n+\n");
        assert!(matches!(dup, Err(Error::Parse { line: 5, .. })));
        let nozero = parse_om("ground: a\ncovectors:\n+\n-\n");
        assert!(matches!(nozero, Err(Error::Parse { .. })));
        let bad = parse_om("ground: a\ncovectors:\nx\n");
        assert!(matches!(bad, Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn matrix_files() {
        let arr = parse_matrix("labels: x y\n1 0\n1/2 -3/4\n").unwrap();
        assert_eq!(arr.labels, vec!["x", "y"]);
        assert_eq!(parse_matrix(&print_matrix(&arr)).unwrap(), arr);
        let c = parse_om("ground: x y\nmatrix:\n1 0\n0 1\n").unwrap();
        assert_eq!(c.len(), 9);
        assert!(parse_matrix("1 z\n").is_err());
    }

    #[test]
    fn complex_files() {
        let k = parse_complex("a b\nb c\nc a\n").unwrap();
        assert_eq!(k.f_vector(), vec![3, 3]);
        assert!(parse_complex("a a\n").is_err());
    }
}
