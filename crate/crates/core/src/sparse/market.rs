//! Matrix Market coordinate-format reader and writer.
//!
//! Indices are 1-based on disk and 0-based in memory. Comment lines begin
//! with `%`. Supported fields: real, integer, pattern; supported
//! symmetries: general, symmetric. Symmetric inputs are expanded to
//! general storage on read.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::SparseMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses a Matrix Market coordinate stream into canonical CSC form.
///
/// Pattern entries get value 1.0, duplicate coordinates are summed, and
/// symmetric files (which store the lower triangle) get their
/// off-diagonal entries mirrored.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<SparseMatrix> {
    let mut lines = reader.lines().enumerate();

    let (field, symmetry) = {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty stream, expected Matrix Market header"))?;
        parse_header(idx + 1, &line?)?
    };

    // Size line: first non-comment, non-blank line after the header.
    let (n_rows, n_cols, n_entries) = loop {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing size line"))?;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let nums: Vec<&str> = trimmed.split_whitespace().collect();
        if nums.len() != 3 {
            return Err(parse_err(
                idx + 1,
                format!("size line must have 3 fields, got {}", nums.len()),
            ));
        }
        let parse = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| parse_err(idx + 1, format!("bad integer `{s}` in size line")))
        };
        break (parse(nums[0])?, parse(nums[1])?, parse(nums[2])?);
    };

    if symmetry == Symmetry::Symmetric && n_rows != n_cols {
        return Err(parse_err(1, "symmetric matrix must be square"));
    }

    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(n_entries);
    let mut seen = 0usize;
    let mut last_line = 0usize;
    for (idx, line) in lines {
        let line = line?;
        last_line = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if seen == n_entries {
            return Err(parse_err(
                last_line,
                format!("entry count mismatch: more than {n_entries} entries"),
            ));
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        let expect = if field == Field::Pattern { 2 } else { 3 };
        if toks.len() != expect {
            return Err(parse_err(
                last_line,
                format!("expected {expect} fields per entry, got {}", toks.len()),
            ));
        }
        let row: usize = toks[0]
            .parse()
            .map_err(|_| parse_err(last_line, format!("bad row index `{}`", toks[0])))?;
        let col: usize = toks[1]
            .parse()
            .map_err(|_| parse_err(last_line, format!("bad column index `{}`", toks[1])))?;
        if row == 0 || row > n_rows || col == 0 || col > n_cols {
            return Err(parse_err(
                last_line,
                format!("index ({row},{col}) out of range for {n_rows}x{n_cols}"),
            ));
        }
        let value = if field == Field::Pattern {
            1.0
        } else {
            toks[2]
                .parse::<f64>()
                .map_err(|_| parse_err(last_line, format!("bad value `{}`", toks[2])))?
        };
        let (r, c) = (row - 1, col - 1);
        if symmetry == Symmetry::Symmetric {
            if r < c {
                return Err(parse_err(
                    last_line,
                    "symmetric file stores an upper-triangle entry; expected lower triangle",
                ));
            }
            if r != c {
                triplets.push((c, r, value));
            }
        }
        triplets.push((r, c, value));
        seen += 1;
    }
    if seen != n_entries {
        return Err(parse_err(
            last_line + 1,
            format!("entry count mismatch: expected {n_entries} entries, found {seen}"),
        ));
    }

    SparseMatrix::from_triplets(n_rows, n_cols, &triplets)
}

fn parse_header(line_no: usize, line: &str) -> Result<(Field, Symmetry)> {
    let toks: Vec<String> = line.split_whitespace().map(|t| t.to_lowercase()).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" {
        return Err(parse_err(
            line_no,
            "header must be `%%MatrixMarket matrix coordinate <field> <symmetry>`",
        ));
    }
    if toks[1] != "matrix" {
        return Err(parse_err(
            line_no,
            format!("unsupported object `{}`", toks[1]),
        ));
    }
    if toks[2] != "coordinate" {
        return Err(parse_err(
            line_no,
            format!(
                "unsupported format `{}`, only coordinate is accepted",
                toks[2]
            ),
        ));
    }
    let field = match toks[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        "complex" => {
            return Err(parse_err(line_no, "complex field is not supported"));
        }
        other => return Err(parse_err(line_no, format!("unknown field `{other}`"))),
    };
    let symmetry = match toks[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => {
            return Err(parse_err(line_no, "hermitian symmetry is not supported"));
        }
        "skew-symmetric" => {
            return Err(parse_err(
                line_no,
                "skew-symmetric symmetry is not supported",
            ));
        }
        other => return Err(parse_err(line_no, format!("unknown symmetry `{other}`"))),
    };
    Ok((field, symmetry))
}

pub fn read_matrix_market_file<P: AsRef<Path>>(path: P) -> Result<SparseMatrix> {
    let file = File::open(path.as_ref())?;
    parse_matrix_market(BufReader::new(file))
}

/// Writes general coordinate real format, entries in column-major order.
/// Values use the shortest representation that round-trips exactly.
pub fn write_matrix_market<W: Write>(matrix: &SparseMatrix, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(
        w,
        "{} {} {}",
        matrix.n_rows(),
        matrix.n_cols(),
        matrix.nnz()
    )?;
    for (r, c, v) in matrix.iter() {
        writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
    }
    Ok(())
}
