//! Text problem format:
//!
//! ```text
//! mirrorgate-problem v1
//! n 2
//! m 1
//! set box              # or: set ball <radius> | set simplex | set orthant
//! lo 0 0               # box only
//! hi 2 2               # box only
//! center 0 0           # ball only
//! objective linear 0   # f in {linear, abs, square}, then the offset
//! c 1 1
//! b -1
//! sigma linear         # one tag for all rows, or one per row
//! matrix
//! %%MatrixMarket matrix coordinate real general
//! 1 2 1
//! 1 1 -1
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Header keys may appear in any order before `matrix`.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::engine::mm;
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::problem::{Problem, ProblemSpec, ScalarFn};
use crate::set::SetDescriptor;

const MAGIC: &str = "mirrorgate-problem v1";

struct Field {
    line: usize,
    tokens: Vec<(usize, String)>,
}

impl Field {
    fn numbers(&self, key: &str, count: Option<usize>) -> Result<Vec<f64>> {
        if let Some(c) = count {
            if self.tokens.len() != c {
                return Err(Error::parse(
                    self.line,
                    1,
                    format!("`{key}` needs {c} values, found {}", self.tokens.len()),
                ));
            }
        }
        self.tokens
            .iter()
            .map(|(col, t)| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::parse(self.line, *col, format!("bad number `{t}`")))
            })
            .collect()
    }

    fn integer(&self, key: &str) -> Result<usize> {
        match self.tokens.as_slice() {
            [(col, t)] => t
                .parse()
                .map_err(|_| Error::parse(self.line, *col, format!("bad integer `{t}` for `{key}`"))),
            _ => Err(Error::parse(self.line, 1, format!("`{key}` takes one integer"))),
        }
    }
}

fn tokenize(line: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, line[s..i].to_string()));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_lines<I>(lines: I) -> Result<ProblemSpec>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    let mut lines = lines.enumerate().map(|(i, l)| (i + 1, l));
    let mut fields: HashMap<String, Field> = HashMap::new();
    let mut seen_magic = false;
    let mut matrix_line = None;
    let mut last_line = 0;
    for (lineno, line) in lines.by_ref() {
        last_line = lineno;
        let mut line = line?;
        if let Some(hash) = line.find('#') {
            line.truncate(hash);
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !seen_magic {
            if trimmed != MAGIC {
                return Err(Error::parse(lineno, 1, format!("expected `{MAGIC}`")));
            }
            seen_magic = true;
            continue;
        }
        let mut toks = tokenize(&line);
        let (col, key) = toks.remove(0);
        if key == "matrix" {
            if !toks.is_empty() {
                return Err(Error::parse(lineno, col, "`matrix` takes no arguments"));
            }
            matrix_line = Some(lineno);
            break;
        }
        if !matches!(
            key.as_str(),
            "n" | "m" | "set" | "lo" | "hi" | "center" | "objective" | "c" | "b" | "sigma"
        ) {
            return Err(Error::parse(lineno, col, format!("unknown key `{key}`")));
        }
        if fields.contains_key(&key) {
            return Err(Error::parse(lineno, col, format!("duplicate key `{key}`")));
        }
        fields.insert(key, Field { line: lineno, tokens: toks });
    }
    if !seen_magic {
        return Err(Error::parse(last_line + 1, 1, format!("empty file, expected `{MAGIC}`")));
    }
    let matrix_line = matrix_line.ok_or_else(|| Error::parse(last_line + 1, 1, "missing `matrix` section"))?;
    let get = |k: &str| {
        fields
            .get(k)
            .ok_or_else(|| Error::parse(matrix_line, 1, format!("header is missing `{k}`")))
    };

    let n = get("n")?.integer("n")?;
    let m = get("m")?.integer("m")?;
    let set_field = get("set")?;
    let set = match set_field.tokens.first().map(|t| t.1.as_str()) {
        Some("box") => {
            if set_field.tokens.len() != 1 {
                return Err(Error::parse(set_field.line, 1, "`set box` takes no parameters"));
            }
            SetDescriptor::Box {
                lo: get("lo")?.numbers("lo", Some(n))?,
                hi: get("hi")?.numbers("hi", Some(n))?,
            }
        }
        Some("ball") => {
            let radius = Field {
                line: set_field.line,
                tokens: set_field.tokens[1..].to_vec(),
            }
            .numbers("set ball", Some(1))?[0];
            let center = match fields.get("center") {
                Some(f) => f.numbers("center", Some(n))?,
                None => vec![0.0; n],
            };
            SetDescriptor::Ball { center, radius }
        }
        Some("simplex") => SetDescriptor::Simplex { n },
        Some("orthant") => SetDescriptor::NonnegativeOrthant { n },
        other => {
            return Err(Error::parse(
                set_field.line,
                1,
                format!("unknown set `{}`", other.unwrap_or("")),
            ))
        }
    };
    set.validate().map_err(|e| Error::parse(set_field.line, 1, e.to_string()))?;

    let (objective_fn, objective_offset) = match fields.get("objective") {
        None => (ScalarFn::Linear, 0.0),
        Some(f) => {
            let (col, tag) = f
                .tokens
                .first()
                .ok_or_else(|| Error::parse(f.line, 1, "`objective` needs a function tag"))?;
            let func = ScalarFn::from_tag(tag)
                .ok_or_else(|| Error::parse(f.line, *col, format!("unknown function `{tag}`")))?;
            let offset = match f.tokens.len() {
                1 => 0.0,
                2 => Field {
                    line: f.line,
                    tokens: f.tokens[1..].to_vec(),
                }
                .numbers("objective", Some(1))?[0],
                _ => return Err(Error::parse(f.line, 1, "`objective` takes a tag and an optional offset")),
            };
            (func, offset)
        }
    };
    let c = get("c")?.numbers("c", Some(n))?;
    let b = get("b")?.numbers("b", Some(m))?;
    let sigma = match fields.get("sigma") {
        None => Vec::new(),
        Some(f) => {
            let tags = f
                .tokens
                .iter()
                .map(|(col, t)| ScalarFn::from_tag(t).ok_or_else(|| Error::parse(f.line, *col, format!("unknown function `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            match tags.len() {
                1 => vec![tags[0].clone(); m],
                k if k == m => tags,
                k => return Err(Error::parse(f.line, 1, format!("`sigma` needs 1 or {m} tags, found {k}"))),
            }
        }
    };

    let a = mm::read_matrix_market_lines(lines.map(|(_, l)| l), matrix_line + 1)?;
    if a.rows() != m || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, header says m={m}, n={n}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(ProblemSpec {
        n,
        m,
        set,
        c,
        objective_offset,
        objective_fn,
        b,
        sigma,
        triplets: a.triplets(),
    })
}

pub fn parse_problem_str(text: &str) -> Result<ProblemSpec> {
    parse_lines(text.lines().map(|l| Ok(l.to_string())))
}

pub fn parse_problem_file(path: &Path) -> Result<Problem> {
    let f = std::fs::File::open(path)?;
    let spec = parse_lines(BufReader::new(f).lines()).map_err(|e| e.with_path(path))?;
    Problem::build(spec)
}

fn write_values<W: Write + ?Sized>(w: &mut W, key: &str, vals: &[f64]) -> std::io::Result<()> {
    write!(w, "{key}")?;
    for v in vals {
        write!(w, " {}", fmt_f64(*v))?;
    }
    writeln!(w)
}

/// Canonical form of a problem. Fails for callback scalar functions.
pub fn write_problem<W: Write + ?Sized>(p: &Problem, w: &mut W) -> Result<()> {
    let tag = |f: &ScalarFn| {
        f.tag()
            .ok_or_else(|| Error::InvalidConfig("callback functions cannot be written to a problem file".into()))
    };
    let obj_tag = tag(&p.objective().func)?;
    let row_tags = (0..p.m()).map(|l| tag(p.row_fn(l))).collect::<Result<Vec<_>>>()?;

    writeln!(w, "{MAGIC}")?;
    writeln!(w, "n {}", p.n())?;
    writeln!(w, "m {}", p.m())?;
    match p.set() {
        SetDescriptor::Box { lo, hi } => {
            writeln!(w, "set box")?;
            write_values(w, "lo", lo)?;
            write_values(w, "hi", hi)?;
        }
        SetDescriptor::Ball { center, radius } => {
            writeln!(w, "set ball {}", fmt_f64(*radius))?;
            write_values(w, "center", center)?;
        }
        SetDescriptor::Simplex { .. } => writeln!(w, "set simplex")?,
        SetDescriptor::NonnegativeOrthant { .. } => writeln!(w, "set orthant")?,
    }
    writeln!(w, "objective {obj_tag} {}", fmt_f64(p.objective().offset))?;
    write_values(w, "c", &p.objective().c.to_dense())?;
    write_values(w, "b", p.offsets())?;
    if row_tags.iter().all(|t| *t == row_tags[0]) {
        writeln!(w, "sigma {}", row_tags[0])?;
    } else {
        writeln!(w, "sigma {}", row_tags.join(" "))?;
    }
    writeln!(w, "matrix")?;
    mm::write_matrix_market(p.matrix(), &mut *w)?;
    Ok(())
}

pub fn write_problem_file(p: &Problem, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_problem(p, &mut buf)?;
    super::write_atomic(path, |w| w.write_all(&buf))?;
    Ok(())
}
