//! Free-form MPS ingestion producing the >=-only inequality form
//! `min c^T x  s.t.  A x >= b`, and a canonical writer for round trips.
//!
//! Canonicalization rules: L rows are negated, E rows become >=/<= pairs,
//! RANGES widen a row to a two-sided pair, and variable bounds (default
//! x >= 0) become extra rows. Integrality markers are ignored with a
//! warning; the relaxation is solved.

use std::collections::HashMap;
use std::fmt::Write as _;

use ipm_lp::LinearProgram;
use sparse_core::SparseMatrix;

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    Objective,
    Less,
    Greater,
    Equal,
}

#[derive(Debug)]
pub struct ParsedLp {
    pub lp: LinearProgram,
    pub name: String,
    pub warnings: Vec<String>,
}

fn parse_value(tok: &str, line: usize) -> Result<f64, BenchError> {
    tok.parse::<f64>().map_err(|_| BenchError::Parse {
        line,
        message: format!("expected a number, found `{tok}`"),
    })
}

pub fn parse_mps(text: &str) -> Result<ParsedLp, BenchError> {
    let mut name = String::new();
    let mut warnings = Vec::new();

    let mut section = String::new();
    let mut row_kinds: Vec<RowKind> = Vec::new();
    let mut row_names: Vec<String> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut objective_row: Option<usize> = None;

    let mut col_names: Vec<String> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    // coefficient map keyed by (row, col); duplicates are an error
    let mut coeffs: HashMap<(usize, usize), f64> = HashMap::new();
    let mut rhs: HashMap<usize, f64> = HashMap::new();
    let mut ranges: HashMap<usize, f64> = HashMap::new();
    // per-column (lower, upper); None = unbounded on that side
    let mut lower: Vec<Option<f64>> = Vec::new();
    let mut upper: Vec<Option<f64>> = Vec::new();
    let mut in_integer_block = false;
    let mut saw_endata = false;

    let err = |line: usize, message: String| BenchError::Parse { line, message };

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        if raw.starts_with('*') || raw.trim().is_empty() {
            continue;
        }
        let is_header = !raw.starts_with(' ') && !raw.starts_with('\t');
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if is_header {
            section = tokens[0].to_ascii_uppercase();
            match section.as_str() {
                "NAME" => {
                    name = tokens.get(1).unwrap_or(&"").to_string();
                }
                "ROWS" | "COLUMNS" | "RHS" | "RANGES" | "BOUNDS" | "OBJSENSE" => {}
                "ENDATA" => {
                    saw_endata = true;
                    break;
                }
                other => {
                    return Err(err(lineno, format!("unknown section `{other}`")));
                }
            }
            continue;
        }
        match section.as_str() {
            "ROWS" => {
                if tokens.len() != 2 {
                    return Err(err(lineno, "ROWS entries are `<type> <name>`".into()));
                }
                let kind = match tokens[0].to_ascii_uppercase().as_str() {
                    "N" => RowKind::Objective,
                    "L" => RowKind::Less,
                    "G" => RowKind::Greater,
                    "E" => RowKind::Equal,
                    other => return Err(err(lineno, format!("unknown row type `{other}`"))),
                };
                let rname = tokens[1].to_string();
                if row_index.contains_key(&rname) {
                    return Err(err(lineno, format!("duplicate row `{rname}`")));
                }
                if kind == RowKind::Objective {
                    if objective_row.is_some() {
                        warnings.push(format!(
                            "line {lineno}: extra objective row `{rname}` treated as a free row"
                        ));
                    } else {
                        objective_row = Some(row_kinds.len());
                    }
                }
                row_index.insert(rname.clone(), row_kinds.len());
                row_kinds.push(kind);
                row_names.push(rname);
            }
            "COLUMNS" => {
                if tokens.len() >= 3 && tokens[1].trim_matches('\'') == "MARKER" {
                    let flag = tokens[2].trim_matches('\'');
                    in_integer_block = flag == "INTORG";
                    warnings.push(format!(
                        "line {lineno}: integrality marker `{flag}` ignored (LP relaxation)"
                    ));
                    continue;
                }
                if tokens.len() < 3 || tokens.len().is_multiple_of(2) {
                    return Err(err(
                        lineno,
                        "COLUMNS entries are `<col> <row> <value> [<row> <value>]`".into(),
                    ));
                }
                let cname = tokens[0];
                let col = *col_index.entry(cname.to_string()).or_insert_with(|| {
                    col_names.push(cname.to_string());
                    lower.push(Some(0.0));
                    upper.push(None);
                    col_names.len() - 1
                });
                if in_integer_block {
                    // already warned at the marker
                }
                for pair in tokens[1..].chunks(2) {
                    let row = *row_index
                        .get(pair[0])
                        .ok_or_else(|| err(lineno, format!("unknown row `{}`", pair[0])))?;
                    let value = parse_value(pair[1], lineno)?;
                    if coeffs.insert((row, col), value).is_some() {
                        return Err(err(
                            lineno,
                            format!("duplicate entry for column `{cname}` in row `{}`", pair[0]),
                        ));
                    }
                }
            }
            "RHS" => {
                if tokens.len() < 3 || tokens.len().is_multiple_of(2) {
                    return Err(err(
                        lineno,
                        "RHS entries are `<set> <row> <value> [<row> <value>]`".into(),
                    ));
                }
                for pair in tokens[1..].chunks(2) {
                    let row = *row_index
                        .get(pair[0])
                        .ok_or_else(|| err(lineno, format!("unknown row `{}`", pair[0])))?;
                    let value = parse_value(pair[1], lineno)?;
                    if Some(row) == objective_row {
                        warnings.push(format!(
                            "line {lineno}: RHS for the objective row ignored"
                        ));
                        continue;
                    }
                    rhs.insert(row, value);
                }
            }
            "RANGES" => {
                if tokens.len() < 3 || tokens.len().is_multiple_of(2) {
                    return Err(err(
                        lineno,
                        "RANGES entries are `<set> <row> <value> [<row> <value>]`".into(),
                    ));
                }
                for pair in tokens[1..].chunks(2) {
                    let row = *row_index
                        .get(pair[0])
                        .ok_or_else(|| err(lineno, format!("unknown row `{}`", pair[0])))?;
                    if Some(row) == objective_row {
                        return Err(err(lineno, "RANGES cannot apply to the objective".into()));
                    }
                    ranges.insert(row, parse_value(pair[1], lineno)?);
                }
            }
            "BOUNDS" => {
                if tokens.len() < 3 {
                    return Err(err(
                        lineno,
                        "BOUNDS entries are `<type> <set> <col> [<value>]`".into(),
                    ));
                }
                let kind = tokens[0].to_ascii_uppercase();
                let col = *col_index
                    .get(tokens[2])
                    .ok_or_else(|| err(lineno, format!("unknown column `{}`", tokens[2])))?;
                let value = if tokens.len() > 3 {
                    Some(parse_value(tokens[3], lineno)?)
                } else {
                    None
                };
                let need = |v: Option<f64>| {
                    v.ok_or_else(|| err(lineno, format!("bound `{kind}` needs a value")))
                };
                match kind.as_str() {
                    "LO" => lower[col] = Some(need(value)?),
                    "UP" => upper[col] = Some(need(value)?),
                    "FX" => {
                        let v = need(value)?;
                        lower[col] = Some(v);
                        upper[col] = Some(v);
                    }
                    "FR" => {
                        lower[col] = None;
                        upper[col] = None;
                    }
                    "MI" => lower[col] = None,
                    "PL" => upper[col] = None,
                    "BV" => {
                        warnings.push(format!(
                            "line {lineno}: binary bound relaxed to 0 <= x <= 1"
                        ));
                        lower[col] = Some(0.0);
                        upper[col] = Some(1.0);
                    }
                    "LI" | "UI" => {
                        warnings.push(format!(
                            "line {lineno}: integer bound `{kind}` treated as continuous"
                        ));
                        if kind == "LI" {
                            lower[col] = Some(need(value)?);
                        } else {
                            upper[col] = Some(need(value)?);
                        }
                    }
                    other => return Err(err(lineno, format!("unknown bound type `{other}`"))),
                }
            }
            "OBJSENSE" => {
                if !tokens[0].eq_ignore_ascii_case("MIN")
                    && !tokens[0].eq_ignore_ascii_case("MINIMIZE")
                {
                    return Err(err(lineno, "only minimization is supported".into()));
                }
            }
            "" => return Err(err(lineno, "data before the first section header".into())),
            _ => unreachable!("section names are validated at the header"),
        }
    }
    if !saw_endata {
        warnings.push("missing ENDATA".into());
    }
    let obj = objective_row.ok_or_else(|| BenchError::Parse {
        line: 0,
        message: "no objective (N) row".into(),
    })?;

    let n = col_names.len();
    let mut c = vec![0.0; n];
    // row -> sparse coefficients, in column order for determinism
    let mut row_coeffs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); row_kinds.len()];
    let mut sorted: Vec<(&(usize, usize), &f64)> = coeffs.iter().collect();
    sorted.sort_by_key(|((r, ccol), _)| (*r, *ccol));
    for ((row, col), &value) in sorted {
        if *row == obj {
            c[*col] = value;
        } else {
            row_coeffs[*row].push((*col, value));
        }
    }

    // two-sided interval per constraint row, then >=-rows out of each side
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut b = Vec::new();
    let mut out_row = 0usize;
    let mut push_row = |coeffs: &[(usize, f64)],
                        bound: f64,
                        negate: bool,
                        triplets: &mut Vec<(usize, usize, f64)>,
                        b: &mut Vec<f64>| {
        for &(col, v) in coeffs {
            triplets.push((out_row, col, if negate { -v } else { v }));
        }
        b.push(if negate { -bound } else { bound });
        out_row += 1;
    };
    for (row, kind) in row_kinds.iter().enumerate() {
        if *kind == RowKind::Objective {
            continue;
        }
        let rb = rhs.get(&row).copied().unwrap_or(0.0);
        let range = ranges.get(&row).copied();
        let (lo, hi): (Option<f64>, Option<f64>) = match kind {
            RowKind::Greater => (Some(rb), range.map(|r| rb + r.abs())),
            RowKind::Less => (range.map(|r| rb - r.abs()), Some(rb)),
            RowKind::Equal => match range {
                None => (Some(rb), Some(rb)),
                Some(r) => (Some(rb + r.min(0.0)), Some(rb + r.max(0.0))),
            },
            RowKind::Objective => unreachable!(),
        };
        if let Some(lo) = lo {
            push_row(&row_coeffs[row], lo, false, &mut triplets, &mut b);
        }
        if let Some(hi) = hi {
            push_row(&row_coeffs[row], hi, true, &mut triplets, &mut b);
        }
    }
    for col in 0..n {
        if let Some(lo) = lower[col] {
            push_row(&[(col, 1.0)], lo, false, &mut triplets, &mut b);
        }
        if let Some(hi) = upper[col] {
            push_row(&[(col, 1.0)], hi, true, &mut triplets, &mut b);
        }
    }
    let m = b.len();
    let a = SparseMatrix::from_triplets(m, n, &triplets)?;
    Ok(ParsedLp {
        lp: LinearProgram::new(c, a, b)?,
        name,
        warnings,
    })
}

/// Canonical MPS text for an inequality-form LP: all rows G, all variables
/// FR. `parse_mps(write_mps(lp))` reproduces `lp` exactly.
pub fn write_mps(lp: &LinearProgram, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME {name}");
    let _ = writeln!(out, "ROWS");
    let _ = writeln!(out, " N OBJ");
    for i in 0..lp.m() {
        let _ = writeln!(out, " G R{i}");
    }
    let _ = writeln!(out, "COLUMNS");
    let dense = lp.a.to_dense();
    for j in 0..lp.n() {
        if lp.c[j] != 0.0 {
            let _ = writeln!(out, " X{j} OBJ {}", lp.c[j]);
        }
        for (i, row) in dense.iter().enumerate() {
            if row[j] != 0.0 {
                let _ = writeln!(out, " X{j} R{i} {}", row[j]);
            }
        }
    }
    let _ = writeln!(out, "RHS");
    for (i, bi) in lp.b.iter().enumerate() {
        if *bi != 0.0 {
            let _ = writeln!(out, " RHS R{i} {bi}");
        }
    }
    let _ = writeln!(out, "BOUNDS");
    for j in 0..lp.n() {
        let _ = writeln!(out, " FR BND X{j}");
    }
    let _ = writeln!(out, "ENDATA");
    out
}
