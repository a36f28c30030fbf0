//! Matrix Market coordinate I/O for symmetric real matrices.
//!
//! Only the lower triangle is stored, matching [`SparseMatrix`]'s symmetric
//! convention. Values are written in shortest round-trip decimal form, so a
//! write/read cycle reproduces them exactly.

use std::io::{BufRead, Write};

use crate::{SparseError, SparseMatrix};

pub fn write_matrix_market<W: Write>(a: &SparseMatrix, mut w: W) -> Result<(), SparseError> {
    if !a.is_square() || !a.is_lower_triangular() {
        return Err(SparseError::Structure(
            "matrix market writer expects a symmetric lower-triangular matrix".into(),
        ));
    }
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (i, j, v) in a.iter() {
        writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(r: R) -> Result<SparseMatrix, SparseError> {
    let mut lines = r.lines().enumerate();

    let (lineno, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input"))?
        .map_line()?;
    let header_lc = header.to_ascii_lowercase();
    if !header_lc.starts_with("%%matrixmarket") {
        return Err(parse_err(lineno + 1, "missing MatrixMarket banner"));
    }
    let fields: Vec<&str> = header_lc.split_whitespace().collect();
    if fields.len() < 5
        || fields[1] != "matrix"
        || fields[2] != "coordinate"
        || fields[3] != "real"
        || fields[4] != "symmetric"
    {
        return Err(parse_err(
            lineno + 1,
            "only `matrix coordinate real symmetric` is supported",
        ));
    }

    let mut dims: Option<(usize, usize, usize)> = None;
    let mut trips: Vec<(usize, usize, f64)> = Vec::new();
    for item in lines {
        let (lineno, line) = item.map_line()?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match dims {
            None => {
                if toks.len() != 3 {
                    return Err(parse_err(lineno + 1, "size line needs `nrows ncols nnz`"));
                }
                let n: usize = parse_tok(toks[0], lineno)?;
                let m: usize = parse_tok(toks[1], lineno)?;
                let nnz: usize = parse_tok(toks[2], lineno)?;
                if n != m {
                    return Err(parse_err(lineno + 1, "symmetric matrix must be square"));
                }
                trips.reserve(nnz);
                dims = Some((n, m, nnz));
            }
            Some((n, _, _)) => {
                if toks.len() != 3 {
                    return Err(parse_err(lineno + 1, "entry needs `row col value`"));
                }
                let i: usize = parse_tok(toks[0], lineno)?;
                let j: usize = parse_tok(toks[1], lineno)?;
                let v: f64 = toks[2]
                    .parse()
                    .map_err(|_| parse_err(lineno + 1, "bad value"))?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(lineno + 1, "index out of range (1-based)"));
                }
                if i < j {
                    return Err(parse_err(
                        lineno + 1,
                        "symmetric entries must lie in the lower triangle",
                    ));
                }
                trips.push((i - 1, j - 1, v));
            }
        }
    }
    let (n, _, nnz) = dims.ok_or_else(|| parse_err(0, "missing size line"))?;
    if trips.len() != nnz {
        return Err(parse_err(
            0,
            &format!("declared {} entries, found {}", nnz, trips.len()),
        ));
    }
    SparseMatrix::from_triplets(n, n, &trips)
}

fn parse_err(line: usize, message: &str) -> SparseError {
    SparseError::Parse {
        line,
        message: message.to_string(),
    }
}

fn parse_tok<T: std::str::FromStr>(tok: &str, lineno: usize) -> Result<T, SparseError> {
    tok.parse()
        .map_err(|_| parse_err(lineno + 1, "bad integer"))
}

trait MapLine {
    fn map_line(self) -> Result<(usize, String), SparseError>;
}

impl MapLine for (usize, std::io::Result<String>) {
    fn map_line(self) -> Result<(usize, String), SparseError> {
        let (n, r) = self;
        Ok((n, r?))
    }
}
