//! Trace CSV: header, one row per logged iteration, then `#`-tagged footer
//! rows. Every row has six fields.
//!
//! ```text
//! k,branch,row,g,f,n_productive
//! 1,N,1,1.0000000000000000e0,,0
//! 2,P,,0.0000000000000000e0,,1
//! #N,2,,,,
//! #hits,1,1,,,
//! ```

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::solver::{IterRecord, RunReport};

pub const HEADER: &str = "k,branch,row,g,f,n_productive";
const COLUMNS: usize = 6;

fn footer<W: Write + ?Sized>(w: &mut W, key: &str, fields: &[String]) -> std::io::Result<()> {
    let mut row = vec![format!("#{key}")];
    row.extend(fields.iter().cloned());
    row.resize(COLUMNS, String::new());
    writeln!(w, "{}", row.join(","))
}

pub fn write_trace<W: Write + ?Sized>(report: &RunReport, cert: Option<&Certificate>, w: &mut W) -> std::io::Result<()> {
    let t = &report.trace;
    writeln!(w, "{HEADER}")?;
    for r in &t.log {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.k,
            if r.productive { "P" } else { "N" },
            r.row.map(|l| (l + 1).to_string()).unwrap_or_default(),
            fmt_f64(r.g),
            r.f.map(fmt_f64).unwrap_or_default(),
            r.n_productive
        )?;
    }
    footer(w, "N", &[t.iterations.to_string()])?;
    footer(w, "N_I", &[t.n_productive.to_string()])?;
    footer(w, "N_J", &[t.n_nonproductive.to_string()])?;
    footer(w, "eps_g", &[fmt_f64(report.eps_g)])?;
    footer(w, "eps_f", &[fmt_f64(report.eps_f)])?;
    footer(w, "h_f", &[fmt_f64(report.steps.h_f)])?;
    footer(w, "h_g", &[fmt_f64(report.steps.h_g)])?;
    for (l, &c) in t.hit_counts.iter().enumerate() {
        if c > 0 {
            footer(w, "hits", &[(l + 1).to_string(), c.to_string()])?;
        }
    }
    if let (Some(f), Some(g)) = (report.f_xbar, report.g_xbar) {
        footer(w, "f_xbar", &[fmt_f64(f)])?;
        footer(w, "g_xbar", &[fmt_f64(g)])?;
    }
    if let Some(xb) = &t.xbar {
        for (j, v) in xb.iter().enumerate() {
            footer(w, "xbar", &[(j + 1).to_string(), fmt_f64(*v)])?;
        }
    }
    if let Some(c) = cert {
        footer(w, "f_val", &[fmt_f64(c.f_val)])?;
        footer(w, "g_val", &[fmt_f64(c.g_val)])?;
        footer(w, "phi_val", &[fmt_f64(c.phi_val)])?;
        footer(w, "gap", &[fmt_f64(c.gap)])?;
        footer(w, "lambda_nnz", &[c.lambda_nnz().to_string()])?;
        for (l, v) in c.top_lambda(10) {
            footer(w, "lambda", &[(l + 1).to_string(), fmt_f64(v)])?;
        }
    }
    Ok(())
}

/// Atomically writes the trace (and certificate, when given) to `path`.
pub fn write_trace_csv(report: &RunReport, cert: Option<&Certificate>, path: &Path) -> Result<()> {
    super::write_atomic(path, |w| write_trace(report, cert, w))?;
    Ok(())
}

/// What a trace file records about a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TraceSummary {
    pub records: Vec<IterRecord>,
    pub iterations: u64,
    pub n_productive: u64,
    pub n_nonproductive: u64,
    /// 0-based row -> count, rows with zero hits omitted.
    pub hit_counts: BTreeMap<usize, u64>,
    pub footer: BTreeMap<String, Vec<String>>,
}

pub fn read_trace_csv(path: &Path) -> Result<TraceSummary> {
    let f = std::fs::File::open(path)?;
    parse_trace(BufReader::new(f)).map_err(|e| e.with_path(path))
}

fn parse_trace<R: BufRead>(r: R) -> Result<TraceSummary> {
    let mut out = TraceSummary::default();
    for (i, line) in r.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != COLUMNS {
            return Err(Error::parse(lineno, 1, format!("expected {COLUMNS} fields, found {}", fields.len())));
        }
        if lineno == 1 {
            if line != HEADER {
                return Err(Error::parse(1, 1, "bad header"));
            }
            continue;
        }
        let num = |s: &str, col: usize| -> Result<u64> {
            s.parse().map_err(|_| Error::parse(lineno, col, format!("bad integer `{s}`")))
        };
        let real = |s: &str, col: usize| -> Result<f64> {
            s.parse().map_err(|_| Error::parse(lineno, col, format!("bad number `{s}`")))
        };
        if let Some(key) = fields[0].strip_prefix('#') {
            match key {
                "N" => out.iterations = num(fields[1], 2)?,
                "N_I" => out.n_productive = num(fields[1], 2)?,
                "N_J" => out.n_nonproductive = num(fields[1], 2)?,
                "hits" => {
                    let l = num(fields[1], 2)? as usize;
                    if l == 0 {
                        return Err(Error::parse(lineno, 2, "rows are 1-based"));
                    }
                    out.hit_counts.insert(l - 1, num(fields[2], 3)?);
                }
                _ => {}
            }
            out.footer
                .entry(key.to_string())
                .or_default()
                .extend(fields[1..].iter().filter(|s| !s.is_empty()).map(|s| s.to_string()));
            continue;
        }
        let productive = match fields[1] {
            "P" => true,
            "N" => false,
            other => return Err(Error::parse(lineno, 2, format!("bad branch `{other}`"))),
        };
        let row = if fields[2].is_empty() {
            None
        } else {
            Some(num(fields[2], 3)? as usize - 1)
        };
        out.records.push(IterRecord {
            k: num(fields[0], 1)?,
            productive,
            row,
            g: real(fields[3], 4)?,
            f: if fields[4].is_empty() { None } else { Some(real(fields[4], 5)?) },
            n_productive: num(fields[5], 6)?,
        });
    }
    Ok(out)
}
