use std::io::BufRead;
use std::path::Path;

use super::{Entry, Field, SparseMatrix, Symmetry};
use crate::exact::ExtendedReal;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

/// Parses a Matrix Market file. Literals go through the nearest binary64 and
/// are then kept exactly.
pub fn parse_matrix_market(text: impl BufRead, id: &str) -> Result<SparseMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (lineno, banner) = match lines.next() {
        Some((n, l)) => (n, l.map_err(|e| Error::parse(n, e.to_string()))?),
        None => return Err(Error::parse(1, "empty file")),
    };
    let (layout, field, symmetry) = parse_banner(&banner).map_err(|msg| match msg {
        BannerError::Unsupported(m) => Error::UnsupportedFormat(m),
        BannerError::Malformed(m) => Error::parse(lineno, m),
    })?;

    let mut data = Vec::new();
    for (n, line) in lines {
        let line = line.map_err(|e| Error::parse(n, e.to_string()))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        data.push((n, t.to_string()));
    }
    let mut data = data.into_iter();
    let (size_line, size) = data.next().ok_or_else(|| Error::parse(lineno + 1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|s| s.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(size_line, format!("bad size line '{size}'")))?;
    let expected_dims = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected_dims {
        return Err(Error::parse(
            size_line,
            format!("expected {expected_dims} integers on the size line, found {}", dims.len()),
        ));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows == 0 || cols == 0 {
        return Err(Error::parse(size_line, "matrix dimensions must be positive"));
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(Error::parse(size_line, "symmetric storage needs a square matrix"));
    }

    let positions: Vec<(usize, usize)> = match layout {
        Layout::Coordinate => Vec::new(),
        Layout::Array => array_positions(rows, cols, symmetry),
    };
    let count = match layout {
        Layout::Coordinate => dims[2],
        Layout::Array => positions.len(),
    };

    let mut entries = Vec::with_capacity(count.min(1 << 20));
    let mut last_line = size_line;
    for (n, line) in data {
        last_line = n;
        if entries.len() == count {
            return Err(Error::parse(n, format!("more than the declared {count} entries")));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (row, col, lit) = match layout {
            Layout::Coordinate => {
                if toks.len() != 3 {
                    return Err(Error::parse(n, format!("expected 'row col value', got '{line}'")));
                }
                let idx = |s: &str, bound: usize| -> Result<usize> {
                    match s.parse::<usize>() {
                        Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
                        _ => Err(Error::parse(n, format!("index '{s}' outside 1..={bound}"))),
                    }
                };
                (idx(toks[0], rows)?, idx(toks[1], cols)?, toks[2])
            }
            Layout::Array => {
                if toks.len() != 1 {
                    return Err(Error::parse(n, format!("expected one value, got '{line}'")));
                }
                let (r, c) = positions[entries.len()];
                (r, c, toks[0])
            }
        };
        let value = parse_value(lit, field).ok_or_else(|| Error::parse(n, format!("bad value '{lit}'")))?;
        entries.push(Entry { row, col, value });
    }
    if entries.len() != count {
        return Err(Error::parse(
            last_line,
            format!("declared {count} entries, found {}", entries.len()),
        ));
    }
    Ok(SparseMatrix {
        id: id.to_string(),
        rows,
        cols,
        field,
        symmetry,
        entries,
    })
}

pub fn read_matrix_market(path: &Path, id: &str) -> Result<SparseMatrix> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market(std::io::BufReader::new(file), id)
}

enum BannerError {
    Unsupported(String),
    Malformed(String),
}

fn parse_banner(line: &str) -> std::result::Result<(Layout, Field, Symmetry), BannerError> {
    let toks: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(BannerError::Malformed(format!("not a Matrix Market banner: '{line}'")));
    }
    let layout = match toks[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(BannerError::Malformed(format!("unknown layout '{other}'"))),
    };
    let field = match toks[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" | "complex" => return Err(BannerError::Unsupported(format!("{} field", toks[3]))),
        other => return Err(BannerError::Malformed(format!("unknown field '{other}'"))),
    };
    let symmetry = match toks[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        "hermitian" => return Err(BannerError::Unsupported("hermitian symmetry".into())),
        other => return Err(BannerError::Malformed(format!("unknown symmetry '{other}'"))),
    };
    Ok((layout, field, symmetry))
}

/// Column-major order, lower triangle only for symmetric storage.
fn array_positions(rows: usize, cols: usize, symmetry: Symmetry) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for c in 0..cols {
        let start = match symmetry {
            Symmetry::General => 0,
            Symmetry::Symmetric => c,
            Symmetry::Skew => c + 1,
        };
        out.extend((start..rows).map(|r| (r, c)));
    }
    out
}

fn parse_value(lit: &str, field: Field) -> Option<ExtendedReal> {
    if field == Field::Integer && !lit.trim_start_matches(['+', '-']).bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let x: f64 = lit.parse().ok()?;
    x.is_finite().then(|| ExtendedReal::from_f64(x))
}
