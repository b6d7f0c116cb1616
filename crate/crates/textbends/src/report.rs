//! Report serialization: JSON, flat CSV, and per-query plot series.

use std::io::Write;

use crate::bench::RunReport;
use crate::error::{Error, Result};
use crate::model::Gender;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Plotdata,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "plotdata" => Ok(ReportFormat::Plotdata),
            other => Err(Error::Usage(format!("unknown report format {other:?}"))),
        }
    }
}

pub fn emit_report<W: Write>(reports: &[RunReport], format: ReportFormat, out: W) -> Result<()> {
    match format {
        ReportFormat::Json => emit_json(reports, out),
        ReportFormat::Csv => emit_csv(reports, out),
        ReportFormat::Plotdata => emit_plotdata(reports, out),
    }
}

fn emit_json<W: Write>(reports: &[RunReport], mut out: W) -> Result<()> {
    if reports.len() == 1 {
        serde_json::to_writer_pretty(&mut out, &reports[0])?;
    } else {
        serde_json::to_writer_pretty(&mut out, reports)?;
    }
    out.write_all(b"\n")?;
    Ok(())
}

fn gender_str(g: Option<Gender>) -> &'static str {
    g.map(Gender::as_str).unwrap_or("")
}

/// One row per (spec, engine, SF).
fn emit_csv<W: Write>(reports: &[RunReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "query_id",
        "gender",
        "scheme",
        "engine",
        "sf",
        "mean_ms",
        "stddev_ms",
        "selectivity",
        "complexity",
        "result_checksum",
    ])?;
    for report in reports {
        for r in &report.results {
            w.write_record([
                r.query_id.clone(),
                gender_str(r.gender).to_string(),
                r.scheme.clone(),
                r.engine.clone(),
                r.sf.to_string(),
                r.mean_ms.to_string(),
                r.stddev_ms.to_string(),
                r.selectivity.to_string(),
                r.complexity.to_string(),
                r.result_checksum.clone(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Per-query series with SF on the x axis, one series per
/// (query, scheme, gender, engine), suitable for external plotting.
fn emit_plotdata<W: Write>(reports: &[RunReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["series", "sf", "mean_ms", "stddev_ms"])?;
    let mut rows: Vec<(String, f64, f64, f64)> = Vec::new();
    for report in reports {
        for r in &report.results {
            rows.push((
                format!(
                    "{}/{}/{}/{}",
                    r.query_id,
                    r.scheme,
                    gender_str(r.gender),
                    r.engine
                ),
                r.sf,
                r.mean_ms,
                r.stddev_ms,
            ));
        }
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    for (series, sf, mean, stddev) in rows {
        w.write_record([series, sf.to_string(), mean.to_string(), stddev.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{run_benchmark, ProtocolConfig};
    
    use crate::gencorpus::{generate, GeneratorConfig};
    use crate::weighting::{Scheme, WeightParams};
    use crate::workload::{build_workload, ParamFile};

    fn sample_report() -> RunReport {
        let (corpus, manifest) = generate(&GeneratorConfig {
            sf: 0.0001,
            ..GeneratorConfig::default()
        })
        .unwrap();
        let specs = build_workload(
            &ParamFile::reference(),
            &[Scheme::Tfidf, Scheme::Bm25],
            5,
            WeightParams::default(),
        )
        .unwrap();
        let protocol = ProtocolConfig {
            warm_runs: 1,
            ..ProtocolConfig::default()
        };
        run_benchmark(&corpus, &manifest, &specs, &protocol).unwrap()
    }

    #[test]
    fn csv_has_one_row_per_spec_engine() {
        let report = sample_report();
        assert_eq!(report.results.len(), 64); // 32 specs x 2 engines
        let mut buf = Vec::new();
        emit_csv(&[report], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 65); // header + 64 rows
    }

    #[test]
    fn json_roundtrips() {
        let report = sample_report();
        let mut buf = Vec::new();
        emit_json(std::slice::from_ref(&report), &mut buf).unwrap();
        let back: RunReport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(report, back);
    }

    #[test]
    fn plotdata_has_one_series_per_engine() {
        let report = sample_report();
        let mut buf = Vec::new();
        emit_plotdata(&[report], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let q1_tfidf_male: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("Q1/tfidf/male/"))
            .collect();
        assert_eq!(q1_tfidf_male.len(), 2); // columnar + mapreduce
    }
}
