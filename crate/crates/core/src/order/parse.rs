//! Edge-list documents.
//!
//! ```text
//! # comment lines and blank lines are skipped
//! 3
//! 0 1
//! 1 2
//! ```
//!
//! The first meaningful line is the candidate count; each following line is
//! a pair `u v` meaning `u` precedes `v`.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use super::{DownSetTable, PartialOrder};
use crate::error::{Error, Result};

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a non-negative integer, found {token:?}"),
    })
}

pub fn parse_order(text: &str) -> Result<PartialOrder> {
    let mut lines = meaningful_lines(text);
    let (line, header) = lines.next().ok_or(Error::EmptyInput)?;
    let n = parse_id(header, line)?;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut edges = Vec::new();
    for (line, content) in lines {
        let mut tokens = content.split_whitespace();
        let (Some(u), Some(v), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line,
                message: format!("expected `u v`, found {content:?}"),
            });
        };
        edges.push((parse_id(u, line)?, parse_id(v, line)?));
    }
    PartialOrder::from_edges(n, &edges)
}

/// Parses an explicit closure: the count line, then `x: y1 y2 …` listing
/// the strict down set of `x`. Unlisted candidates have empty down sets.
/// The table must already be transitive.
pub fn parse_down_sets(text: &str) -> Result<PartialOrder> {
    let mut lines = meaningful_lines(text);
    let (line, header) = lines.next().ok_or(Error::EmptyInput)?;
    let n = parse_id(header, line)?;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut sets = vec![FixedBitSet::with_capacity(n); n];
    let check = |id: usize| {
        if id < n {
            Ok(id)
        } else {
            Err(Error::CandidateOutOfRange { id, n })
        }
    };
    for (line, content) in lines {
        let Some((x, rest)) = content.split_once(':') else {
            return Err(Error::Parse {
                line,
                message: format!("expected `x: y1 y2 …`, found {content:?}"),
            });
        };
        let x = check(parse_id(x.trim(), line)?)?;
        for y in rest.split_whitespace() {
            sets[x].insert(check(parse_id(y, line)?)?);
        }
    }
    Ok(PartialOrder::from_down_sets(DownSetTable::from_sets(sets)?))
}

/// Parses an `id<TAB>label` map covering `n` candidates. Missing ids keep
/// their decimal id as label.
pub fn parse_labels(text: &str, n: usize) -> Result<Vec<String>> {
    let mut labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    for (line, content) in meaningful_lines(text) {
        let Some((id, label)) = content.split_once('\t') else {
            return Err(Error::Parse {
                line,
                message: "expected `id<TAB>label`".into(),
            });
        };
        let id = parse_id(id.trim(), line)?;
        if id >= n {
            return Err(Error::CandidateOutOfRange { id, n });
        }
        labels[id] = label.to_string();
    }
    Ok(labels)
}

/// Writes the canonical (Hasse) edge list of `order`.
pub fn write_order(order: &PartialOrder) -> String {
    let mut out = format!("{}\n", order.len());
    for (u, v) in order.hasse_edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
