//! Reader and writer for the alist sparse parity-check format.
//!
//! ```text
//! N M
//! max_col_weight max_row_weight
//! <N column weights>
//! <M row weights>
//! <N lines: 1-based row indices of each column>
//! <M lines: 1-based column indices of each row>
//! ```
//! Zero entries pad short lines and are ignored on input.

use std::fmt::Write as _;
use std::path::Path;

use super::{Code, CodeError};
use crate::gf2::BitMatrix;

pub fn to_alist_string(code: &Code) -> String {
    let h = code.h();
    let cols = code.col_adjacency();
    let rows = code.row_adjacency();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let join =
        |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.cols(), h.rows());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(&mut cols.iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(&mut rows.iter().map(Vec::len)));
    for c in cols {
        let mut entries: Vec<usize> = c.iter().map(|&r| r as usize + 1).collect();
        entries.resize(max_col, 0);
        let _ = writeln!(out, "{}", join(&mut entries.into_iter()));
    }
    for r in rows {
        let mut entries: Vec<usize> = r.iter().map(|&c| c as usize + 1).collect();
        entries.resize(max_row, 0);
        let _ = writeln!(out, "{}", join(&mut entries.into_iter()));
    }
    out
}

pub fn write_alist(code: &Code, path: &Path) -> Result<(), CodeError> {
    std::fs::write(path, to_alist_string(code)).map_err(|source| CodeError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_alist(path: &Path) -> Result<Code, CodeError> {
    let text = std::fs::read_to_string(path).map_err(|source| CodeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "alist".into());
    parse_alist(&text, &path.display().to_string()).map(|c| c.with_name(name))
}

/// Parses alist text; `origin` labels error messages.
pub fn parse_alist(text: &str, origin: &str) -> Result<Code, CodeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count();
    let err = |line: usize, message: String| CodeError::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let mut next_numbers = |section: &str| -> Result<(usize, Vec<usize>), CodeError> {
        let Some((line, content)) = lines.next() else {
            return Err(err(last_line, format!("missing section: {section}")));
        };
        let nums = content
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| err(line, format!("{section}: bad number {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((line, nums))
    };

    let (line, dims) = next_numbers("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(err(line, "dimensions: expected \"N M\"".into()));
    };
    let (line, maxes) = next_numbers("maximum weights")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(err(line, "maximum weights: expected two numbers".into()));
    };
    let (line, col_w) = next_numbers("column weights")?;
    if col_w.len() != n {
        return Err(err(
            line,
            format!("column weights: expected {n} entries, got {}", col_w.len()),
        ));
    }
    let (line, row_w) = next_numbers("row weights")?;
    if row_w.len() != m {
        return Err(err(
            line,
            format!("row weights: expected {m} entries, got {}", row_w.len()),
        ));
    }
    if col_w.iter().any(|&w| w > max_col) || row_w.iter().any(|&w| w > max_row) {
        return Err(err(line, "weight exceeds declared maximum".into()));
    }

    let mut h = BitMatrix::zeros(m, n);
    for (c, &w) in col_w.iter().enumerate() {
        let (line, entries) = next_numbers("column index lists")?;
        let idx: Vec<usize> = entries.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != w {
            return Err(err(
                line,
                format!(
                    "column {}: weight {w} declared, {} listed",
                    c + 1,
                    idx.len()
                ),
            ));
        }
        for r in idx {
            if r > m {
                return Err(err(line, format!("row index {r} exceeds {m}")));
            }
            h.set(r - 1, c, true);
        }
    }
    for (r, &w) in row_w.iter().enumerate() {
        let (line, entries) = next_numbers("row index lists")?;
        let idx: Vec<usize> = entries.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != w {
            return Err(err(
                line,
                format!("row {}: weight {w} declared, {} listed", r + 1, idx.len()),
            ));
        }
        for c in idx {
            if c > n || !h.get(r, c - 1) {
                return Err(err(
                    line,
                    format!("row {} lists column {c} not present in column lists", r + 1),
                ));
            }
        }
    }
    Ok(Code::new("alist", h, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAMMING_ALIST: &str = "7 3
3 4
1 1 2 1 2 2 3
4 4 4
1 0 0
2 0 0
1 2 0
3 0 0
1 3 0
2 3 0
1 2 3
1 3 5 7
2 3 6 7
4 5 6 7
";

    #[test]
    fn hamming_fixture_matches_builtin() {
        let code = parse_alist(HAMMING_ALIST, "fixture").unwrap();
        let builtin = BitMatrix::from_dense(&[
            [1u8, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ]);
        assert_eq!(code.h(), &builtin);
        assert_eq!(to_alist_string(&code), HAMMING_ALIST);
    }

    #[test]
    fn truncated_file_names_missing_section() {
        let truncated: String = HAMMING_ALIST.lines().take(9).collect::<Vec<_>>().join("\n");
        let e = parse_alist(&truncated, "t").unwrap_err().to_string();
        assert!(e.contains("missing section: column index lists"), "{e}");
        let e = parse_alist("7 3\n3 4\n", "t").unwrap_err().to_string();
        assert!(e.contains("missing section: column weights"), "{e}");
    }

    #[test]
    fn weight_mismatch_reports_line() {
        let bad = HAMMING_ALIST.replacen("1 2 3\n1 3 5 7", "1 2 0\n1 3 5 7", 1);
        match parse_alist(&bad, "bad") {
            Err(CodeError::Parse { line, message, .. }) => {
                assert_eq!(line, 11);
                assert!(message.contains("column 7"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }
}
