//! Vectors and matrices from inline text or files.
//!
//! Files hold either a JSON array (1-D for vectors, 2-D for matrices) or
//! row-major CSV without a header.

use std::fs;
use std::path::Path;

use symseq_core::Mat;

use crate::error::{CliError, SpecError};

/// `3,4,-1` into numbers; errors carry the position of the bad entry.
pub fn parse_list(text: &str) -> Result<Vec<f64>, SpecError> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in text.split(',') {
        let tok = part.trim();
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => {
                let at = pos + (part.len() - part.trim_start().len());
                return Err(SpecError::syntax(at, tok, "expected a finite number"));
            }
        }
        pos += part.len() + 1;
    }
    Ok(out)
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_rows(text: &str) -> Result<Mat, SpecError> {
    let mut rows = Vec::new();
    let mut pos = 0;
    for part in text.split(';') {
        let row = parse_list(part).map_err(|mut e| {
            e.pos += pos;
            e
        })?;
        rows.push(row);
        pos += part.len() + 1;
    }
    Mat::from_rows(&rows).map_err(|e| SpecError::range(0, text, e))
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read(path)?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(|e| bad(path, e));
    }
    let rows = csv_rows(path, &text)?;
    if rows.len() == 1 {
        Ok(rows.into_iter().next().unwrap())
    } else if rows.iter().all(|r| r.len() == 1) {
        Ok(rows.into_iter().flatten().collect())
    } else {
        Err(bad(
            path,
            "vector file must be a single row or a single column",
        ))
    }
}

pub fn read_matrix(path: &Path) -> Result<Mat, CliError> {
    let text = read(path)?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).map_err(|e| bad(path, e));
    }
    let rows = csv_rows(path, &text)?;
    Mat::from_rows(&rows).map_err(|e| bad(path, e))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_rows(path: &Path, text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(path, e))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(col, v)| match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(bad(
                    path,
                    format!(
                        "row {}, column {}: `{v}` is not a finite number",
                        line + 1,
                        col + 1
                    ),
                )),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad(path, "no data"));
    }
    Ok(rows)
}

fn bad(path: &Path, msg: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        msg: msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_rows() {
        assert_eq!(parse_list("3, 4,-1").unwrap(), [3.0, 4.0, -1.0]);
        let e = parse_list("1,x,3").unwrap_err();
        assert_eq!((e.pos, e.token.as_str()), (2, "x"));
        assert!(parse_list("1,nan").is_err());
        let m = parse_rows("1,2;3,4").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m[(1, 0)], 3.0);
        assert_eq!(parse_rows("1,2;3,y").unwrap_err().pos, 6);
        assert!(parse_rows("1,2;3").is_err());
    }

    #[test]
    fn files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        fs::write(&p, "# comment\n1, 2\n3, 4\n").unwrap();
        assert_eq!(read_matrix(&p).unwrap(), parse_rows("1,2;3,4").unwrap());
        let p = dir.path().join("m.json");
        fs::write(&p, "[[1,2],[3,4]]").unwrap();
        assert_eq!(read_matrix(&p).unwrap(), parse_rows("1,2;3,4").unwrap());
        let p = dir.path().join("v.csv");
        fs::write(&p, "1\n2\n3\n").unwrap();
        assert_eq!(read_vector(&p).unwrap(), [1.0, 2.0, 3.0]);
        fs::write(&p, "1,oops\n").unwrap();
        assert!(read_vector(&p).unwrap_err().to_string().contains("oops"));
        assert!(read_matrix(&dir.path().join("missing.csv")).is_err());
    }
}
