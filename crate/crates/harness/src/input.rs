//! Text formats read and written by the harness.
//!
//! Vector files hold named blocks. A block starts with `name:` and continues
//! with one `index count` pair per line; the header line may carry the first
//! pair after the colon. `#` starts a comment.
//!
//! ```text
//! # two signals
//! the: 0 120
//! 5 3
//! of:
//! 2 7
//! ```
//!
//! Stream files hold one turnstile update per line: `index<TAB>increment`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ccsketch::{SparseVector, TurnstileUpdate};

use crate::error::{HarnessError, Result};

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

struct Block {
    name: String,
    entries: Vec<(u64, f64)>,
}

impl Block {
    fn finish(self) -> Result<(String, SparseVector)> {
        let dimension = self.entries.iter().map(|&(i, _)| i + 1).max().unwrap_or(1);
        Ok((self.name, SparseVector::new(dimension, self.entries)?))
    }
}

/// Parses a vector file. `path` only labels error messages. Each vector's
/// dimension is one past its largest index.
pub fn parse_sparse_vectors(text: &str, path: &Path) -> Result<Vec<(String, SparseVector)>> {
    let parse_err = |line: usize, message: String| HarnessError::Parse { path: path.to_path_buf(), line, message };
    let mut out = Vec::new();
    let mut current: Option<Block> = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let mut line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some((name, rest)) = line.split_once(':') {
            let name = name.trim();
            if name.is_empty() {
                return Err(parse_err(line_no, "empty vector name".into()));
            }
            if let Some(done) = current.take() {
                out.push(done.finish()?);
            }
            current = Some(Block { name: name.to_string(), entries: Vec::new() });
            line = rest.trim();
            if line.is_empty() {
                continue;
            }
        }
        let Some(block) = current.as_mut() else {
            return Err(parse_err(line_no, "entry before the first `name:` header".into()));
        };
        let mut fields = line.split_whitespace();
        let (Some(index), Some(count), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(line_no, format!("expected `index count`, got {line:?}")));
        };
        let index: u64 = index.parse().map_err(|_| parse_err(line_no, format!("bad index {index:?}")))?;
        let count: f64 = count.parse().map_err(|_| parse_err(line_no, format!("bad count {count:?}")))?;
        if !(count.is_finite() && count >= 0.0) {
            return Err(HarnessError::Validation {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("count must be finite and nonnegative, got {count}"),
            });
        }
        block.entries.push((index, count));
    }
    if let Some(done) = current.take() {
        out.push(done.finish()?);
    }
    Ok(out)
}

pub fn load_sparse_vectors(path: impl AsRef<Path>) -> Result<Vec<(String, SparseVector)>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_sparse_vectors(&text, path)
}

/// Renders vectors in the format read by [`parse_sparse_vectors`].
pub fn format_sparse_vectors(vectors: &[(String, SparseVector)]) -> String {
    let mut out = String::new();
    for (name, v) in vectors {
        let _ = writeln!(out, "{name}:");
        for &(i, a) in v.entries() {
            let _ = writeln!(out, "{i} {a}");
        }
    }
    out
}

pub fn write_sparse_vectors(path: impl AsRef<Path>, vectors: &[(String, SparseVector)]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_sparse_vectors(vectors)).map_err(|e| HarnessError::io(path, e))
}

pub fn parse_stream(text: &str, path: &Path) -> Result<Vec<TurnstileUpdate>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let err = |message: String| HarnessError::Parse { path: path.to_path_buf(), line: n + 1, message };
        let mut fields = line.split_whitespace();
        let (Some(index), Some(inc), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected `index<TAB>increment`, got {line:?}")));
        };
        let index = index.parse().map_err(|_| err(format!("bad index {index:?}")))?;
        let increment: f64 = inc.parse().map_err(|_| err(format!("bad increment {inc:?}")))?;
        if !increment.is_finite() {
            return Err(err(format!("increment must be finite, got {inc}")));
        }
        out.push(TurnstileUpdate::new(index, increment));
    }
    Ok(out)
}

pub fn load_stream(path: impl AsRef<Path>) -> Result<Vec<TurnstileUpdate>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_stream(&text, path)
}
