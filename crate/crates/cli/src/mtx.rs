//! MatrixMarket reader and writer for dense real matrices.
//!
//! Both the `array` (column-major dense) and `coordinate` (1-based triples)
//! layouts are read; `real` and `integer` fields with `general` symmetry are
//! accepted. Writing always uses the `array` layout.

use std::fs;
use std::io::Write;
use std::path::Path;

use altsplit::Matrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MtxError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> MtxError {
    MtxError::Parse { line, message: message.into() }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

fn parse_header(line: &str) -> Result<Layout, MtxError> {
    let words: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(parse_err(1, "missing %%MatrixMarket banner"));
    }
    if words.len() != 5 || words[1] != "matrix" {
        return Err(parse_err(1, "banner must read: %%MatrixMarket matrix <layout> <field> <symmetry>"));
    }
    let layout = match words[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(parse_err(1, format!("unsupported layout '{other}'"))),
    };
    if words[3] != "real" && words[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field '{}'", words[3])));
    }
    if words[4] != "general" {
        return Err(parse_err(1, format!("unsupported symmetry '{}'", words[4])));
    }
    Ok(layout)
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, MtxError> {
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

/// Parses MatrixMarket text.
pub fn parse_matrix(text: &str) -> Result<Matrix, MtxError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, banner) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let layout = parse_header(banner)?;
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| parse_num(t, size_line, "dimension"))
        .collect::<Result<_, _>>()?;
    let expected_fields = if layout == Layout::Array { 2 } else { 3 };
    if dims.len() != expected_fields {
        return Err(parse_err(size_line, format!("size line needs {expected_fields} integers")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if rows == 0 || cols == 0 {
        return Err(parse_err(size_line, "dimensions must be positive"));
    }

    let mut data = vec![0.0; rows * cols];
    let mut last_line = size_line;
    match layout {
        Layout::Array => {
            let mut count = 0;
            for (no, line) in body {
                last_line = no;
                for tok in line.split_whitespace() {
                    if count == rows * cols {
                        return Err(parse_err(no, format!("more than {} entries", rows * cols)));
                    }
                    let v: f64 = parse_num(tok, no, "value")?;
                    if !v.is_finite() {
                        return Err(parse_err(no, format!("non-finite value '{tok}'")));
                    }
                    let (i, j) = (count % rows, count / rows);
                    data[i * cols + j] = v;
                    count += 1;
                }
            }
            if count != rows * cols {
                return Err(parse_err(last_line, format!("expected {} entries, found {count}", rows * cols)));
            }
        }
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut count = 0;
            for (no, line) in body {
                last_line = no;
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(parse_err(no, "coordinate entries need: row col value"));
                }
                if count == nnz {
                    return Err(parse_err(no, format!("more than the declared {nnz} entries")));
                }
                let i: usize = parse_num(toks[0], no, "row index")?;
                let j: usize = parse_num(toks[1], no, "column index")?;
                let v: f64 = parse_num(toks[2], no, "value")?;
                if i == 0 || i > rows || j == 0 || j > cols {
                    return Err(parse_err(no, format!("index ({i}, {j}) outside {rows}x{cols}")));
                }
                if !v.is_finite() {
                    return Err(parse_err(no, format!("non-finite value '{}'", toks[2])));
                }
                data[(i - 1) * cols + (j - 1)] += v;
                count += 1;
            }
            if count != nnz {
                return Err(parse_err(last_line, format!("expected {nnz} entries, found {count}")));
            }
        }
    }
    Matrix::from_row_major(rows, cols, data).map_err(|e| parse_err(last_line, e.to_string()))
}

pub fn load_matrix(path: &Path) -> Result<Matrix, MtxError> {
    let text = fs::read_to_string(path)
        .map_err(|source| MtxError::Io { path: path.display().to_string(), source })?;
    parse_matrix(&text)
}

/// Array-layout text; values use the shortest representation that parses back
/// to the same `f64`.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push_str(&format!("{:e}\n", m.get(i, j)));
        }
    }
    out
}

pub fn save_matrix(path: &Path, m: &Matrix) -> Result<(), MtxError> {
    let io = |source| MtxError::Io { path: path.display().to_string(), source };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(format_matrix(m).as_bytes()).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_is_column_major() {
        let m = parse_matrix("%%MatrixMarket matrix array real general\n% note\n2 2\n1\n3\n2\n4\n").unwrap();
        assert_eq!(m.to_row_major(), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn identity_array() {
        let m = parse_matrix("%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n").unwrap();
        assert_eq!(m, Matrix::identity(2));
    }

    #[test]
    fn coordinate_entries() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 3\n2 2 5\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.to_row_major(), vec![3.0, 0.0, 0.0, 5.0]);
    }

    #[test]
    fn integer_field_and_case() {
        let m = parse_matrix("%%MatrixMarket Matrix Array Integer General\n1 2\n7\n-2\n").unwrap();
        assert_eq!(m.to_row_major(), vec![7.0, -2.0]);
    }

    #[test]
    fn round_trip_is_exact() {
        let m = Matrix::from_rows(&[[0.1, -1.0 / 3.0], [1e-300, 12345.678901234567]]).unwrap();
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    fn line_of(text: &str) -> usize {
        match parse_matrix(text).unwrap_err() {
            MtxError::Parse { line, .. } => line,
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of("hello\n"), 1);
        assert_eq!(line_of("%%MatrixMarket matrix array complex general\n1 1\n1\n"), 1);
        assert_eq!(line_of("%%MatrixMarket matrix array real symmetric\n1 1\n1\n"), 1);
        assert_eq!(line_of("%%MatrixMarket matrix array real general\n2 x\n"), 2);
        assert_eq!(line_of("%%MatrixMarket matrix array real general\n2 1\n1\nfoo\n"), 4);
        assert_eq!(line_of("%%MatrixMarket matrix array real general\n2 1\n1\n"), 3);
        assert_eq!(line_of("%%MatrixMarket matrix array real general\n1 1\n1\n2\n"), 4);
        assert_eq!(line_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n"), 3);
        assert_eq!(line_of("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"), 3);
        assert_eq!(line_of("%%MatrixMarket matrix array real general\n1 1\nNaN\n"), 3);
    }
}
