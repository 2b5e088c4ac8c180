use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::scan::{EnsembleMatrix, Observable};
use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub observable: Observable,
    pub case_label: String,
    pub alpha: f64,
}

/// Shortest decimal string that parses back to the same `f64`. Plain
/// notation in the usual range, exponent notation outside it.
pub fn format_real(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// `case{c}_alpha{a}_{sk|rk}.csv`
pub fn matrix_file_name(meta: &MatrixMeta) -> String {
    format!(
        "case{}_alpha{}_{}.csv",
        meta.case_label,
        meta.alpha,
        meta.observable.suffix()
    )
}

pub fn parse_matrix_file_name(name: &str) -> Option<MatrixMeta> {
    let stem = name.strip_suffix(".csv")?.strip_prefix("case")?;
    let (rest, observable) = if let Some(r) = stem.strip_suffix("_sk") {
        (r, Observable::StepNorm)
    } else {
        (stem.strip_suffix("_rk")?, Observable::ResidualNorm)
    };
    let at = rest.rfind("_alpha")?;
    let alpha = rest[at + "_alpha".len()..].parse::<f64>().ok()?;
    Some(MatrixMeta {
        observable,
        case_label: rest[..at].to_string(),
        alpha,
    })
}

fn write_rows<'a, I>(path: &Path, rows: I) -> Result<()>
where
    I: Iterator<Item = Vec<f64>> + 'a,
{
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for row in rows {
        let line: Vec<String> = row.into_iter().map(format_real).collect();
        writeln!(w, "{}", line.join(",")).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let source_name = path.display().to_string();
    let parse_err = |line: usize, message: String| Error::Parse {
        source_name: source_name.clone(),
        line,
        message,
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(i + 1, format!("not a number: {field:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    i + 1,
                    format!("expected {} fields, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(0, "file contains no rows".into()));
    }
    Ok(rows)
}

/// Writes `m` into `directory` under its conventional name and returns the
/// full path.
pub fn write_matrix_csv(m: &EnsembleMatrix, directory: &Path) -> Result<PathBuf> {
    let meta = m
        .meta
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("matrix has no case/alpha/observable metadata".into()))?;
    if m.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    let path = directory.join(matrix_file_name(meta));
    write_rows(&path, m.values.rows().into_iter().map(|r| r.to_vec()))?;
    Ok(path)
}

pub fn read_matrix_csv(path: &Path) -> Result<EnsembleMatrix> {
    let rows = read_rows(path)?;
    let (n, d) = (rows.len(), rows[0].len());
    let values = Array2::from_shape_vec((n, d), rows.into_iter().flatten().collect())
        .expect("rows were checked to be rectangular");
    let meta = path
        .file_name()
        .and_then(|s| s.to_str())
        .and_then(parse_matrix_file_name);
    Ok(EnsembleMatrix { values, meta })
}

/// One row per vector: `re₁,im₁,…,re_d,im_d`.
pub fn write_initials_csv(vectors: &[Vec<C64>], path: &Path) -> Result<PathBuf> {
    let d = vectors.first().map_or(0, Vec::len);
    if vectors.iter().any(|v| v.len() != d) {
        return Err(Error::InvalidParams("initial vectors differ in length".into()));
    }
    write_rows(
        path,
        vectors.iter().map(|v| v.iter().flat_map(|z| [z.re, z.im]).collect()),
    )?;
    Ok(path.to_path_buf())
}

pub fn read_initials_csv(path: &Path) -> Result<Vec<Vec<C64>>> {
    let rows = read_rows(path)?;
    if rows[0].len() % 2 != 0 {
        return Err(Error::Parse {
            source_name: path.display().to_string(),
            line: 1,
            message: "odd number of columns".into(),
        });
    }
    Ok(rows
        .into_iter()
        .map(|r| r.chunks(2).map(|p| C64::new(p[0], p[1])).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        let meta = MatrixMeta {
            observable: Observable::StepNorm,
            case_label: "1".into(),
            alpha: 3.0,
        };
        assert_eq!(matrix_file_name(&meta), "case1_alpha3_sk.csv");
        assert_eq!(parse_matrix_file_name("case1_alpha3_sk.csv"), Some(meta));
        let half = parse_matrix_file_name("case2_alpha0.5_rk.csv").unwrap();
        assert_eq!((half.case_label.as_str(), half.alpha), ("2", 0.5));
        assert_eq!(half.observable, Observable::ResidualNorm);
        assert!(parse_matrix_file_name("case1_alpha3_xx.csv").is_none());
        assert!(parse_matrix_file_name("notes.csv").is_none());
    }

    #[test]
    fn real_formatting_round_trips() {
        for v in [
            0.0,
            1.0,
            -2.5,
            0.1,
            1e12,
            1e-300,
            5e-324,
            123456.789,
            1.7976931348623157e308,
            3.3e-7,
        ] {
            let s = format_real(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(1e-300), "1e-300");
    }
}
