//! Read-only instances, their text formats, and the workspace meter.
//!
//! Ids are 1-based `u32` values. Adjacency and membership lists keep the
//! order in which the input listed them; every "first", "i-th" and
//! "smallest" rule in the crate is defined against that order.

mod digraph;
mod family;
mod graph;
mod meter;

pub use digraph::DigraphInstance;
pub use family::{FamilyAccess, SetFamilyInstance, SubFamily};
pub use graph::{adjacent, degree, max_degree, neighbor_position, GraphAccess, GraphInstance};
pub use meter::{with_meter, word_bits, Frame, Meter, MeterError, MeterStats, PrimitiveFrame};

use crate::error::{Error, Result};

/// Vertex id, `1..=n`.
pub type Vertex = u32;
/// Ground-set element id, `1..=n`.
pub type Element = u32;
/// Set id, `1..=m`, in input order.
pub type SetIndex = u32;

/// A non-comment input line split into tokens.
struct Record<'a> {
    line: usize,
    tag: &'a str,
    fields: Vec<&'a str>,
}

/// Split text into records, skipping blank lines and `c` comments.
fn records(text: &str) -> impl Iterator<Item = Record<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let mut toks = raw.split_whitespace();
        let tag = toks.next()?;
        if tag == "c" || tag.starts_with('#') {
            return None;
        }
        Some(Record { line: i + 1, tag, fields: toks.collect() })
    })
}

impl Record<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, message: message.into() }
    }

    fn num(&self, k: usize) -> Result<usize> {
        let tok = self.fields.get(k).ok_or_else(|| self.err("missing field"))?;
        tok.parse().map_err(|_| self.err(format!("not a non-negative integer: {tok:?}")))
    }

    fn id(&self, k: usize, n: usize, what: &str) -> Result<u32> {
        let v = self.num(k)?;
        if v == 0 || v > n {
            return Err(self.err(format!("{what} {v} outside 1..={n}")));
        }
        Ok(v as u32)
    }

    fn expect_len(&self, len: usize) -> Result<()> {
        if self.fields.len() != len {
            return Err(self.err(format!("expected {len} fields after {:?}", self.tag)));
        }
        Ok(())
    }
}

fn header<'a>(
    recs: &mut impl Iterator<Item = Record<'a>>,
    tag: &str,
    width: usize,
) -> Result<Record<'a>> {
    let rec = recs
        .next()
        .ok_or(Error::Parse { line: 1, message: format!("missing {tag:?} header") })?;
    if rec.tag != tag {
        return Err(rec.err(format!("expected {tag:?} header, found {:?}", rec.tag)));
    }
    rec.expect_len(width)?;
    Ok(rec)
}

fn check_count(expected: usize, found: usize, last_line: usize, what: &str) -> Result<()> {
    if expected != found {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {expected} {what}, found {found}"),
        });
    }
    Ok(())
}

/// Parse a comma or whitespace separated list of ids.
pub fn parse_id_list(text: &str) -> Result<Vec<u32>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::Parse { line: 1, message: format!("bad id {t:?}") })
        })
        .collect()
}
