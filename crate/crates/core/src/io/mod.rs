//! Problem files and trace CSVs.

mod problem_file;
mod trace_csv;

pub use problem_file::{parse_problem_file, parse_problem_str, write_problem, write_problem_file};
pub use trace_csv::{read_trace_csv, write_trace, write_trace_csv, TraceSummary};

use std::io::Write;
use std::path::Path;

/// Writes through a temporary file in the same directory and renames it into
/// place, so a failed write never leaves a partial file at `path`.
pub fn write_atomic(path: &Path, contents: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        contents(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
