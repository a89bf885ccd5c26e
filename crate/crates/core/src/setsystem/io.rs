//! Plain-text serialization.
//!
//! Set systems: a header line `n=<int> m=<int>` followed by `m` lines of
//! `n` characters each, `0` or `1`.
//!
//! Point sets: a header line `dim=<d>` followed by one comma-separated
//! point per line.

use std::fmt::Write as _;

use super::{PointSet, SetSystem};
use crate::bits::IncidenceVector;
use crate::error::{Error, Result};

fn header_value(field: &str, key: &str, line: usize) -> Result<usize> {
    field
        .strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=<int>`, found `{field}`")))?
        .parse()
        .map_err(|e| Error::parse(line, format!("bad value for `{key}`: {e}")))
}

/// Lines that carry content, numbered from 1; blank lines are skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

impl SetSystem {
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} m={}\n", self.n, self.vectors.len());
        for v in &self.vectors {
            out.push_str(&v.to_bit_string());
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`SetSystem::to_text`]. Rows may appear
    /// in any order but must be distinct.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(hl, "header must be `n=<int> m=<int>`"));
        }
        let n = header_value(fields[0], "n", hl)?;
        let m = header_value(fields[1], "m", hl)?;
        let mut vectors = Vec::with_capacity(m);
        let mut last_line = hl;
        for (ln, row) in lines {
            if row.len() != n {
                return Err(Error::parse(ln, format!("expected {n} bits, found {}", row.len())));
            }
            let v = IncidenceVector::parse_bits(row)
                .ok_or_else(|| Error::parse(ln, "row must contain only 0 and 1"))?;
            vectors.push(v);
            last_line = ln;
        }
        if vectors.len() != m {
            return Err(Error::parse(
                last_line,
                format!("header declares {m} vectors, found {}", vectors.len()),
            ));
        }
        let sys = SetSystem::new(n, vectors)?;
        if sys.len() != m {
            return Err(Error::parse(hl, "duplicate vectors"));
        }
        Ok(sys)
    }
}

impl PointSet {
    pub fn to_csv(&self) -> String {
        let mut out = format!("dim={}\n", self.dim);
        for p in self.iter() {
            let row: Vec<String> = p.iter().map(|c| format!("{c:?}")).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let dim = header_value(header, "dim", hl)?;
        let mut points = Vec::new();
        for (ln, row) in lines {
            let p: Vec<f64> = row
                .split(',')
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::parse(ln, format!("bad coordinate `{}`: {e}", f.trim())))
                })
                .collect::<Result<_>>()?;
            if p.len() != dim {
                return Err(Error::parse(ln, format!("expected {dim} coordinates, found {}", p.len())));
            }
            points.push(p);
        }
        PointSet::new(dim, points).map_err(|e| Error::parse(hl, e.to_string()))
    }
}
