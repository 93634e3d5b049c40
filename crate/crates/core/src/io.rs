//! CSV and JSON file formats.
//!
//! * cubature rules: `x1,x2,x3,w`
//! * coefficients: `k,j,value`
//! * samples: a `value` column (other columns are ignored)
//!
//! Floats are written with 17 significant digits.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::approx::HarmonicCoefficients;
use crate::cubature::CubatureRule;
use crate::error::{Error, Result};
use crate::harmonics::{basis_len, HarmonicIndex, SpherePoint};

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn write_rule_csv<W: Write>(rule: &CubatureRule, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x1", "x2", "x3", "w"])?;
    for (p, wt) in rule.points().iter().zip(rule.weights()) {
        w.write_record([fmt_f64(p.x1()), fmt_f64(p.x2()), fmt_f64(p.x3()), fmt_f64(*wt)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn save_rule(rule: &CubatureRule, path: &Path) -> Result<()> {
    write_rule_csv(rule, create(path)?)
}

#[derive(Debug, Deserialize)]
struct RuleRow {
    x1: f64,
    x2: f64,
    x3: f64,
    w: f64,
}

/// Reads a rule for reconstruction degree `degree` and checks that it
/// integrates `P_{2 degree}` to within `tol`.
pub fn load_rule(path: &Path, degree: usize, tol: f64) -> Result<CubatureRule> {
    let mut r = csv::Reader::from_reader(open(path)?);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for row in r.deserialize::<RuleRow>() {
        let row = row?;
        points.push(SpherePoint::new(row.x1, row.x2, row.x3)?);
        weights.push(row.w);
    }
    let rule = CubatureRule::from_parts(degree, points, weights)?;
    let defect = rule.exactness_defect(2 * degree);
    if defect > tol {
        return Err(malformed(
            path,
            format!("rule is not exact to degree {} (defect {defect:.3e})", 2 * degree),
        ));
    }
    Ok(rule)
}

pub fn write_coefficients_csv<W: Write>(coeffs: &HarmonicCoefficients, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "j", "value"])?;
    for (idx, v) in coeffs.iter_indexed() {
        w.write_record([idx.degree().to_string(), idx.j().to_string(), fmt_f64(v)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn save_coefficients(coeffs: &HarmonicCoefficients, path: &Path) -> Result<()> {
    write_coefficients_csv(coeffs, create(path)?)
}

#[derive(Debug, Deserialize)]
struct CoefficientRow {
    k: usize,
    j: usize,
    value: f64,
}

/// Reads `k,j,value` rows; the degree is the largest `k` present and
/// missing entries are zero.
pub fn load_coefficients(path: &Path) -> Result<HarmonicCoefficients> {
    let mut r = csv::Reader::from_reader(open(path)?);
    let mut rows = Vec::new();
    for row in r.deserialize::<CoefficientRow>() {
        let row = row?;
        let idx = HarmonicIndex::new(row.k, row.j)?;
        rows.push((idx, row.value));
    }
    let degree = rows.iter().map(|(i, _)| i.degree()).max().ok_or_else(|| malformed(path, "no coefficients"))?;
    let mut values = vec![0.0; basis_len(degree)];
    for (idx, v) in rows {
        values[idx.flat()] = v;
    }
    HarmonicCoefficients::new(degree, values)
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    value: f64,
}

pub fn load_samples(path: &Path) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_reader(open(path)?);
    let headers = r.headers()?.clone();
    if !headers.iter().any(|h| h == "value") {
        return Err(malformed(path, "sample file needs a `value` column"));
    }
    let mut out = Vec::new();
    for row in r.deserialize::<SampleRow>() {
        out.push(row?.value);
    }
    Ok(out)
}

/// Writes `x1,x2,x3,value` rows.
pub fn save_samples(points: &[SpherePoint], values: &[f64], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["x1", "x2", "x3", "value"])?;
    for (p, v) in points.iter().zip(values) {
        w.write_record([fmt_f64(p.x1()), fmt_f64(p.x2()), fmt_f64(p.x3()), fmt_f64(*v)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Pretty-printed JSON followed by a newline.
pub fn save_json<T: Serialize + ?Sized>(value: &T, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(open(path)?)?)
}

pub(crate) fn create_file(path: &Path) -> Result<BufWriter<File>> {
    create(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubature::gauss_legendre_rule;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        let pi = std::f64::consts::PI;
        assert_eq!(fmt_f64(pi).parse::<f64>().unwrap(), pi);
    }

    #[test]
    fn rule_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rule.csv");
        let rule = gauss_legendre_rule(4).unwrap();
        save_rule(&rule, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("x1,x2,x3,w\n"));
        assert_eq!(text.lines().count(), rule.len() + 1);
        let back = load_rule(&path, 4, 1e-10).unwrap();
        assert_eq!(back.weights(), rule.weights());
        assert!(load_rule(&path, 5, 1e-10).is_err());
    }

    #[test]
    fn coefficient_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let c = HarmonicCoefficients::new(2, (0..9).map(|i| i as f64 / 7.0 - 0.3).collect()).unwrap();
        save_coefficients(&c, &path).unwrap();
        assert_eq!(load_coefficients(&path).unwrap(), c);
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_samples(Path::new("/nonexistent/samples.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/samples.csv"));
    }
}
