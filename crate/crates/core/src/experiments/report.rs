use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::runs::ExperimentConfig;
use crate::error::{Error, Result};
use crate::harmonics::SpherePoint;
use crate::io::{create_file, fmt_f64, save_json};
use crate::params::{write_trace_csv, BalancingOutcome, KernelSearchResult};

/// One method on one simulated data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub run_id: String,
    pub seed: u64,
    pub method: String,
    pub alpha_star: f64,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub rel_error: f64,
    pub sup_error: Option<f64>,
    pub config: serde_json::Value,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl ExperimentReport {
    pub(crate) fn check_finite(&self) -> Result<()> {
        let opt = [self.lambda1, self.lambda2, self.sup_error];
        let finite = self.alpha_star.is_finite()
            && self.rel_error.is_finite()
            && opt.iter().flatten().all(|v| v.is_finite())
            && self.diagnostics.values().all(|v| v.is_finite());
        if finite {
            Ok(())
        } else {
            Err(Error::NonFinite("experiment report"))
        }
    }
}

/// Row of an error curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub sim_index: usize,
    pub method: String,
    pub rel_error: f64,
}

/// Values on the probe grid for external plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub probes: Vec<SpherePoint>,
    pub truth: Vec<f64>,
    pub reconstruction: Vec<f64>,
    pub nodes: Vec<SpherePoint>,
    pub clean: Vec<f64>,
    pub noisy: Vec<f64>,
}

/// Everything a study produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub reports: Vec<ExperimentReport>,
    /// Ascending per method, methods in a fixed order.
    pub curves: Vec<CurveRow>,
    pub summary: BTreeMap<String, f64>,
    pub trace: Option<BalancingOutcome>,
    pub kernel_search: Option<KernelSearchResult>,
    pub plot: Option<PlotData>,
}

impl ExperimentOutput {
    /// Median of the curve of `method`.
    pub fn median(&self, method: &str) -> Option<f64> {
        let v: Vec<f64> = self
            .curves
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.rel_error)
            .collect();
        median_sorted(&v)
    }

    pub fn reports_for(&self, method: &str) -> impl Iterator<Item = &ExperimentReport> + '_ {
        let method = method.to_string();
        self.reports.iter().filter(move |r| r.method == method)
    }

    /// Writes the report files into `dir` (created if missing) and returns
    /// their paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let mut written = Vec::new();
        put_json(dir, "config.json", &self.config, &mut written)?;
        if self.reports.len() == 1 {
            put_json(dir, "report.json", &self.reports[0], &mut written)?;
        } else {
            put_json(dir, "reports.json", &self.reports, &mut written)?;
        }
        put_json(dir, "summary.json", &self.summary, &mut written)?;
        if let Some(k) = &self.kernel_search {
            put_json(dir, "kernel_search.json", k, &mut written)?;
        }

        if !self.curves.is_empty() {
            let path = dir.join("curves.csv");
            write_curves_csv(&self.curves, create_file(&path)?)?;
            written.push(path);
        }
        if let Some(t) = &self.trace {
            let path = dir.join("trace.csv");
            write_trace_csv(t, create_file(&path)?)?;
            written.push(path);
        }
        if let Some(p) = &self.plot {
            let path = dir.join("grid.csv");
            write_points_csv(&p.probes, &[("truth", &p.truth), ("reconstruction", &p.reconstruction)], create_file(&path)?)?;
            written.push(path);
            let path = dir.join("samples.csv");
            write_points_csv(&p.nodes, &[("clean", &p.clean), ("value", &p.noisy)], create_file(&path)?)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn put_json<T: Serialize + ?Sized>(dir: &Path, name: &str, value: &T, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    save_json(value, &path)?;
    written.push(path);
    Ok(())
}

pub(crate) fn median_sorted(v: &[f64]) -> Option<f64> {
    let n = v.len();
    if n == 0 {
        return None;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    Some(if n % 2 == 1 { s[n / 2] } else { 0.5 * (s[n / 2 - 1] + s[n / 2]) })
}

/// Builds the curve rows for `methods` from the reports, each sorted ascending.
pub(crate) fn curves_from_reports(reports: &[ExperimentReport], methods: &[&str]) -> Vec<CurveRow> {
    let mut rows = Vec::with_capacity(reports.len());
    for m in methods {
        let mut r: Vec<CurveRow> = reports
            .iter()
            .filter(|r| r.method == *m)
            .map(|r| CurveRow {
                sim_index: sim_index_of(&r.run_id),
                method: r.method.clone(),
                rel_error: r.rel_error,
            })
            .collect();
        r.sort_by(|a, b| a.rel_error.total_cmp(&b.rel_error).then(a.sim_index.cmp(&b.sim_index)));
        rows.extend(r);
    }
    rows
}

fn sim_index_of(run_id: &str) -> usize {
    run_id
        .rsplit('-')
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

pub fn write_curves_csv<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sim_index", "method", "rel_error"])?;
    for r in rows {
        w.write_record([r.sim_index.to_string(), r.method.clone(), fmt_f64(r.rel_error)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn write_points_csv<W: Write>(points: &[SpherePoint], cols: &[(&str, &[f64])], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x1", "x2", "x3"];
    header.extend(cols.iter().map(|(n, _)| *n));
    w.write_record(&header)?;
    for (i, p) in points.iter().enumerate() {
        let mut rec = vec![fmt_f64(p.x1()), fmt_f64(p.x2()), fmt_f64(p.x3())];
        rec.extend(cols.iter().map(|(_, v)| fmt_f64(v[i])));
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(id: &str, method: &str, e: f64) -> ExperimentReport {
        ExperimentReport {
            run_id: id.into(),
            seed: 1,
            method: method.into(),
            alpha_star: 0.1,
            lambda1: None,
            lambda2: None,
            rel_error: e,
            sup_error: None,
            config: serde_json::Value::Null,
            diagnostics: BTreeMap::new(),
        }
    }

    #[test]
    fn curves_sorted_per_method() {
        let reps = vec![
            report("x-0", "a", 0.3),
            report("x-0", "b", 0.1),
            report("x-1", "a", 0.2),
            report("x-2", "a", 0.25),
        ];
        let c = curves_from_reports(&reps, &["a", "b"]);
        let a: Vec<usize> = c.iter().filter(|r| r.method == "a").map(|r| r.sim_index).collect();
        assert_eq!(a, vec![1, 2, 0]);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn median_examples() {
        assert_eq!(median_sorted(&[]), None);
        assert_eq!(median_sorted(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median_sorted(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }

    #[test]
    fn non_finite_rejected() {
        let mut r = report("x-0", "a", 0.1);
        assert!(r.check_finite().is_ok());
        r.sup_error = Some(f64::NAN);
        assert!(r.check_finite().is_err());
    }
}
