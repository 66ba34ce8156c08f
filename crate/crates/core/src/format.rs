//! Matrix text format.
//!
//! ```text
//! field <name>             gf3 | gf5 | gf7 | gf9 | gf27
//! <rows> <cols>            both >= 1
//! <entry> <entry> ...      `rows` lines of `cols` canonical entries
//! ```
//!
//! Entries are separated by single spaces on output and by any run of
//! spaces or tabs on input. Prime-field entries are residues `0..p-1`;
//! extension entries use the canonical `c0+c1*t+c2*t^2` form of
//! [`Field::format`](crate::ff::Field::format), which never contains spaces.
//! Trailing blank lines are allowed; anything else is an error reported with
//! a 1-based line and column.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ff::Field;
use crate::matrix::MatrixF;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Split a line into tokens with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch == ' ' || ch == '\t' {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<MatrixF, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.first().ok_or_else(|| err(1, 1, "empty input"))?;
    let field = match tokens(header).as_slice() {
        [(_, "field"), (col, name)] => {
            Field::by_name(name).map_err(|e| err(1, *col, e.to_string()))?
        }
        _ => return Err(err(1, 1, "expected `field <name>`")),
    };
    let dims = lines.get(1).ok_or_else(|| err(2, 1, "missing `<rows> <cols>` line"))?;
    let (rows, cols) = match tokens(dims).as_slice() {
        [(c1, r), (c2, c)] => {
            let r: usize = r.parse().map_err(|_| err(2, *c1, format!("bad row count {r:?}")))?;
            let c: usize = c.parse().map_err(|_| err(2, *c2, format!("bad column count {c:?}")))?;
            if r == 0 {
                return Err(err(2, *c1, "row count must be at least 1"));
            }
            if c == 0 {
                return Err(err(2, *c2, "column count must be at least 1"));
            }
            (r, c)
        }
        _ => return Err(err(2, 1, "expected `<rows> <cols>`")),
    };
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let lineno = r + 3;
        let line = lines
            .get(r + 2)
            .ok_or_else(|| err(lineno, 1, format!("expected {rows} matrix rows, found {r}")))?;
        let toks = tokens(line);
        if toks.len() != cols {
            let col = toks.get(cols).map_or(line.len() + 1, |t| t.0);
            return Err(err(lineno, col, format!("expected {cols} entries, found {}", toks.len())));
        }
        for (col, tok) in toks {
            let v = field.parse(tok).map_err(|e| err(lineno, col, e.to_string()))?;
            data.push(v);
        }
    }
    if let Some((i, _)) = lines
        .iter()
        .enumerate()
        .skip(rows + 2)
        .find(|(_, l)| !l.trim().is_empty())
    {
        return Err(err(i + 1, 1, "unexpected content after the last row"));
    }
    Ok(MatrixF::new(field, rows, cols, data).expect("entries validated"))
}

pub fn format_matrix(m: &MatrixF) -> String {
    let f = m.field();
    let mut out = String::new();
    writeln!(out, "field {}", f.name()).unwrap();
    writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|&v| f.format(v)).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_identity() {
        let m = parse_matrix("field gf3\n2 2\n1 0\n0 1\n").unwrap();
        assert_eq!(m, MatrixF::identity(Field::gf3(), 2));
    }

    #[test]
    fn parses_band() {
        let m = parse_matrix("field gf3\n1 4\n1 1 1 1\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 4));
        assert!(m.data().iter().all(|&v| v == 1));
    }

    #[test]
    fn rejects_out_of_range_entry() {
        let e = parse_matrix("field gf3\n2 2\n1 3\n0 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let cases = [
            ("", 1, 1),
            ("field gf4\n1 1\n0\n", 1, 7),
            ("fld gf3\n1 1\n0\n", 1, 1),
            ("field gf3\n1\n0\n", 2, 1),
            ("field gf3\n1 x\n0\n", 2, 3),
            ("field gf3\n0 1\n", 2, 1),
            ("field gf3\n2 2\n1 0\n", 4, 1),
            ("field gf3\n1 2\n1 0 2\n", 3, 5),
            ("field gf3\n1 2\n1\n", 3, 2),
            ("field gf3\n1 1\n1\nextra\n", 4, 1),
            ("field gf9\n1 1\nt+t\n", 3, 1),
        ];
        for (text, line, column) in cases {
            let e = parse_matrix(text).unwrap_err();
            assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
        }
    }

    #[test]
    fn extension_entries() {
        let m = parse_matrix("field gf9\n1 3\n0 1+t 2*t\n").unwrap();
        let f9 = Field::gf9();
        assert_eq!(m.row(0), &[0, f9.parse("1+t").unwrap(), f9.parse("2*t").unwrap()]);
        assert_eq!(format_matrix(&m), "field gf9\n1 3\n0 1+t 2*t\n");
    }

    #[test]
    fn trailing_blank_lines_and_tabs() {
        let m = parse_matrix("field gf5\n1 2\n4\t 3\n\n\n").unwrap();
        assert_eq!(m.row(0), &[4, 3]);
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop_oneof![
            Just(Field::gf3()),
            Just(Field::gf5()),
            Just(Field::gf7()),
            Just(Field::gf9()),
            Just(Field::gf27())
        ]
    }

    proptest! {
        #[test]
        fn round_trip(field in field_strategy(), rows in 1usize..5, cols in 1usize..6, seed in any::<u64>()) {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let m = rng.matrix(field, rows, cols);
            let text = format_matrix(&m);
            prop_assert_eq!(parse_matrix(&text).unwrap(), m);
        }
    }
}
