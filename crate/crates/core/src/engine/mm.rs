//! Matrix Market coordinate format (real, general, 1-based indices).

use std::io::{BufRead, Write};

use super::matrix::SparseMatrix;
use crate::error::{Error, Result};
use crate::fmt_f64;

pub const BANNER: &str = "%%MatrixMarket matrix coordinate real general";

pub fn write_matrix_market<W: Write>(a: &SparseMatrix, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{BANNER}")?;
    writeln!(w, "{} {} {}", a.rows(), a.cols(), a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(w, "{} {} {}", i + 1, j + 1, fmt_f64(v))?;
    }
    Ok(())
}

/// Reads a coordinate block from `lines`, whose first item is line number
/// `first_line` of the enclosing file (used in error messages).
pub fn read_matrix_market_lines<I>(lines: I, first_line: usize) -> Result<SparseMatrix>
where
    I: IntoIterator<Item = std::io::Result<String>>,
{
    let mut lines = lines.into_iter();
    let mut lineno = first_line.saturating_sub(1);
    let mut next_line = |lineno: &mut usize| -> Result<Option<String>> {
        loop {
            match lines.next() {
                None => return Ok(None),
                Some(l) => {
                    *lineno += 1;
                    let l = l?;
                    let t = l.trim();
                    if t.is_empty() || (t.starts_with('%') && !t.starts_with("%%")) {
                        continue;
                    }
                    return Ok(Some(l));
                }
            }
        }
    };

    let banner = next_line(&mut lineno)?
        .ok_or_else(|| Error::parse(lineno + 1, 1, "missing Matrix Market banner"))?;
    let words: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" || words[2] != "coordinate" {
        return Err(Error::parse(lineno, 1, format!("unsupported banner `{}`", banner.trim())));
    }
    if words[3] != "real" && words[3] != "integer" {
        return Err(Error::parse(lineno, 1, format!("unsupported field `{}`", words[3])));
    }
    if words[4] != "general" {
        return Err(Error::parse(lineno, 1, format!("unsupported symmetry `{}`", words[4])));
    }

    let size = next_line(&mut lineno)?
        .ok_or_else(|| Error::parse(lineno + 1, 1, "missing size line"))?;
    let dims = parse_fields::<usize>(&size, 3, lineno)?;
    let (m, n, nnz) = (dims[0], dims[1], dims[2]);

    let mut triplets = Vec::with_capacity(nnz);
    for k in 0..nnz {
        let line = next_line(&mut lineno)?.ok_or_else(|| {
            Error::parse(
                lineno + 1,
                1,
                format!("matrix section truncated: expected {nnz} entries, found {k}"),
            )
        })?;
        let mut it = line.split_whitespace();
        let mut col = 1;
        let mut idx = |name: &str, bound: usize, col: &mut usize| -> Result<usize> {
            let tok = it
                .next()
                .ok_or_else(|| Error::parse(lineno, *col, format!("missing {name} index")))?;
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(lineno, *col, format!("bad {name} index `{tok}`")))?;
            if v == 0 || v > bound {
                return Err(Error::parse(
                    lineno,
                    *col,
                    format!("{name} index {v} outside 1..={bound}"),
                ));
            }
            *col += tok.len() + 1;
            Ok(v - 1)
        };
        let i = idx("row", m, &mut col)?;
        let j = idx("column", n, &mut col)?;
        let tok = it
            .next()
            .ok_or_else(|| Error::parse(lineno, col, "missing value"))?;
        let v: f64 = tok
            .parse()
            .map_err(|_| Error::parse(lineno, col, format!("bad value `{tok}`")))?;
        if !v.is_finite() {
            return Err(Error::parse(lineno, col, "non-finite value"));
        }
        triplets.push((i, j, v));
    }
    SparseMatrix::from_triplets(m, n, &triplets)
}

pub fn read_matrix_market<R: BufRead>(r: R) -> Result<SparseMatrix> {
    read_matrix_market_lines(r.lines(), 1)
}

fn parse_fields<T: std::str::FromStr>(line: &str, count: usize, lineno: usize) -> Result<Vec<T>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != count {
        return Err(Error::parse(
            lineno,
            1,
            format!("expected {count} fields, found {}", toks.len()),
        ));
    }
    toks.iter()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(lineno, 1, format!("bad number `{t}`")))
        })
        .collect()
}
