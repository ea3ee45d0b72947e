//! Matrix Market coordinate format.
//!
//! Indices are 1-based on disk and 0-based in memory. Symmetric files store
//! one triangle and are expanded to full storage on load. Duplicate entries
//! are summed.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::CsrMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::MatrixMarket { line, msg: msg.into() }
}

pub fn load_matrix_market<T: Scalar>(path: impl AsRef<Path>) -> Result<CsrMatrix<T>> {
    read_matrix_market(BufReader::new(File::open(path)?))
}

pub fn read_matrix_market<T: Scalar, R: BufRead>(reader: R) -> Result<CsrMatrix<T>> {
    let mut lines = reader.lines().enumerate().map(|(k, l)| (k + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, format!("bad header `{header}`")));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format `{}`", tokens[2])));
    }
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(parse_err(1, format!("unsupported field `{other}`"))),
    }
    let symmetry = match tokens[4].as_str() {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry `{other}`"))),
    };

    let mut data_lines = lines.filter(|(_, l)| match l {
        Ok(s) => {
            let t = s.trim_start();
            !t.is_empty() && !t.starts_with('%')
        }
        Err(_) => true,
    });

    let (size_line, size) = data_lines.next().ok_or_else(|| parse_err(1, "missing size line"))?;
    let size = size?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("bad size token `{t}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_err(size_line, "size line needs rows, cols, nnz"));
    };
    if rows != cols {
        return Err(parse_err(size_line, format!("matrix is {rows}x{cols}, not square")));
    }

    let mut triplets = Vec::with_capacity(if symmetry == MmSymmetry::Symmetric { 2 * nnz } else { nnz });
    let mut seen = 0usize;
    for (line_no, line) in data_lines {
        let line = line?;
        seen += 1;
        if seen > nnz {
            return Err(parse_err(line_no, format!("more than the declared {nnz} entries")));
        }
        let mut it = line.split_whitespace();
        let mut index = |name: &str| -> Result<usize> {
            let tok = it.next().ok_or_else(|| parse_err(line_no, format!("missing {name}")))?;
            let k: usize =
                tok.parse().map_err(|_| parse_err(line_no, format!("bad {name} `{tok}`")))?;
            if k == 0 || k > rows {
                return Err(parse_err(line_no, format!("{name} {k} out of range 1..={rows}")));
            }
            Ok(k - 1)
        };
        let i = index("row")?;
        let j = index("column")?;
        let tok = it.next().ok_or_else(|| parse_err(line_no, "missing value"))?;
        let v: T = tok.parse().map_err(|_| parse_err(line_no, format!("bad value `{tok}`")))?;
        if it.next().is_some() {
            return Err(parse_err(line_no, "trailing tokens (complex entries are not supported)"));
        }
        triplets.push((i, j, v));
        if symmetry == MmSymmetry::Symmetric && i != j {
            triplets.push((j, i, v));
        }
    }
    if seen != nnz {
        return Err(parse_err(size_line, format!("declared {nnz} entries, found {seen}")));
    }
    CsrMatrix::from_triplets(rows, triplets)
}

pub fn write_matrix_market<T: Scalar>(
    path: impl AsRef<Path>,
    q: &CsrMatrix<T>,
    symmetry: MmSymmetry,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_market_to(&mut w, q, symmetry)?;
    w.flush()?;
    Ok(())
}

/// Writes `q`. With [`MmSymmetry::Symmetric`] only the lower triangle is
/// emitted, so the matrix must be symmetric for the file to round-trip.
pub fn write_matrix_market_to<T: Scalar, W: Write>(
    w: &mut W,
    q: &CsrMatrix<T>,
    symmetry: MmSymmetry,
) -> Result<()> {
    let keep = |i: usize, j: usize| symmetry == MmSymmetry::General || i >= j;
    let count = q.triplets().filter(|&(i, j, _)| keep(i, j)).count();
    let label = match symmetry {
        MmSymmetry::General => "general",
        MmSymmetry::Symmetric => "symmetric",
    };
    writeln!(w, "%%MatrixMarket matrix coordinate real {label}")?;
    writeln!(w, "{} {} {}", q.dim(), q.dim(), count)?;
    for (i, j, v) in q.triplets().filter(|&(i, j, _)| keep(i, j)) {
        // `Display` for floats prints the shortest string that parses back exactly.
        writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
    }
    Ok(())
}
