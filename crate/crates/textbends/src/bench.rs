//! Execution protocol and metrics: one unmeasured cold run, then measured
//! warm runs per (spec, engine), sequentially on one thread. Every execution
//! recomputes the weights; only the immutable corpus is cached. Result
//! checksums are compared across all executions of one (spec, engine) and
//! across engines, so nondeterminism and engine divergence both surface as
//! errors.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::engine::{self, Executor};
use crate::error::{Error, Result};
use crate::gencorpus::{self, CorpusManifest, GeneratorConfig};
use crate::model::{Corpus, Gender};
use crate::weighting::WeightParams;
use crate::workload::{spec_label, QuerySpec};

pub const SCORE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub warm_runs: u32,
    /// Cache-priming executions, excluded from the statistics.
    pub cold_runs: u32,
    pub engines: Vec<Executor>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            warm_runs: 10,
            cold_runs: 1,
            engines: vec![Executor::Columnar, Executor::Mapreduce],
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.warm_runs < 1 {
            return Err(Error::Config("warm_runs must be at least 1".into()));
        }
        if self.engines.is_empty() {
            return Err(Error::Config("at least one engine required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query_id: String,
    pub gender: Option<Gender>,
    pub scheme: String,
    pub engine: String,
    pub sf: f64,
    pub samples_ms: Vec<f64>,
    pub mean_ms: f64,
    pub stddev_ms: f64,
    pub selectivity: f64,
    pub complexity: u32,
    pub result_checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub manifest: CorpusManifest,
    pub protocol: ProtocolConfig,
    pub params: WeightParams,
    pub timestamp: String,
    pub host: String,
    pub results: Vec<QueryResult>,
}

pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Population (divide-by-n) standard deviation.
pub fn stddev_population(samples: &[f64]) -> f64 {
    let m = mean(samples);
    (samples.iter().map(|s| (s - m).powi(2)).sum::<f64>() / samples.len() as f64).sqrt()
}

/// The per-(spec, engine) protocol loop: `cold_runs` unmeasured executions,
/// then `warm_runs` measured ones. All executions must produce an identical
/// result or the loop aborts with a nondeterminism error. Returns the warm
/// samples in milliseconds and the (verified) result.
pub fn run_protocol<F>(
    mut execute: F,
    cold_runs: u32,
    warm_runs: u32,
    label: &str,
) -> Result<(Vec<f64>, engine::RankedResult)>
where
    F: FnMut() -> Result<engine::RankedResult>,
{
    if warm_runs < 1 {
        return Err(Error::Config("warm_runs must be at least 1".into()));
    }
    let mut reference: Option<engine::RankedResult> = None;
    let mut check = |result: engine::RankedResult| -> Result<engine::RankedResult> {
        match &reference {
            None => {
                reference = Some(result.clone());
                Ok(result)
            }
            Some(r) if *r == result => Ok(result),
            Some(_) => Err(Error::Nondeterminism(format!(
                "{label}: result checksum diverged across runs"
            ))),
        }
    };
    for _ in 0..cold_runs {
        check(execute()?)?;
    }
    let mut samples_ms = Vec::with_capacity(warm_runs as usize);
    let mut last = None;
    for _ in 0..warm_runs {
        let start = Instant::now();
        let result = execute()?;
        samples_ms.push(start.elapsed().as_secs_f64() * 1e3);
        last = Some(check(result)?);
    }
    Ok((samples_ms, last.expect("warm_runs >= 1")))
}

pub fn run_benchmark(
    corpus: &Corpus,
    manifest: &CorpusManifest,
    specs: &[QuerySpec],
    protocol: &ProtocolConfig,
) -> Result<RunReport> {
    protocol.validate()?;
    for spec in specs {
        spec.validate()?;
    }
    // the nested store is materialized once, like a pre-loaded collection
    let nested = if protocol.engines.contains(&Executor::Mapreduce) {
        crate::model::to_nested(corpus)?
    } else {
        Vec::new()
    };

    let params = specs.first().map(|s| s.params).unwrap_or_default();
    let mut results = Vec::new();
    for spec in specs {
        let mut per_engine: Vec<(Executor, engine::RankedResult)> = Vec::new();
        for &executor in &protocol.engines {
            let plan = engine::plan(spec, executor);
            let run_once = || -> Result<engine::RankedResult> {
                match executor {
                    Executor::Columnar => engine::execute_columnar(&plan, corpus, spec),
                    Executor::Mapreduce => engine::execute_mapreduce(&plan, &nested, spec),
                    Executor::Oracle => engine::execute_oracle(corpus, spec),
                }
            };
            let label = format!("{} on {}", spec_label(spec), executor.as_str());
            let (samples_ms, result) =
                run_protocol(run_once, protocol.cold_runs, protocol.warm_runs, &label)?;
            let checksum = result.checksum();
            results.push(QueryResult {
                query_id: spec.query_id.as_str().to_string(),
                gender: spec.filters.gender,
                scheme: spec.scheme.as_str().to_string(),
                engine: executor.as_str().to_string(),
                sf: manifest.sf,
                mean_ms: mean(&samples_ms),
                stddev_ms: stddev_population(&samples_ms),
                samples_ms,
                selectivity: if corpus.is_empty() {
                    0.0
                } else {
                    engine::selectivity(spec, corpus)?
                },
                complexity: spec.complexity(),
                result_checksum: checksum,
            });
            per_engine.push((executor, result));
        }
        // cross-engine equivalence: identical rankings, scores within tolerance
        if let Some((first_exec, first)) = per_engine.first() {
            for (executor, result) in &per_engine[1..] {
                if !engine::results_equivalent(first, result, SCORE_REL_TOL) {
                    return Err(Error::Nondeterminism(format!(
                        "{}: engines {} and {} disagree",
                        spec_label(spec),
                        first_exec.as_str(),
                        executor.as_str()
                    )));
                }
            }
        }
    }

    Ok(RunReport {
        manifest: manifest.clone(),
        protocol: protocol.clone(),
        params,
        timestamp: chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        host: format!("{}/{}", std::env::consts::OS, std::env::consts::ARCH),
        results,
    })
}

/// Generate one corpus per scale factor and benchmark each.
pub fn sweep_scale(
    config_base: &GeneratorConfig,
    sf_list: &[f64],
    specs: &[QuerySpec],
    protocol: &ProtocolConfig,
) -> Result<Vec<RunReport>> {
    if sf_list.windows(2).any(|w| w[0] >= w[1]) || sf_list.iter().any(|&sf| sf <= 0.0) {
        return Err(Error::Config(
            "sf_list must be strictly increasing positives".into(),
        ));
    }
    let mut reports = Vec::with_capacity(sf_list.len());
    for &sf in sf_list {
        let config = GeneratorConfig {
            sf,
            ..config_base.clone()
        };
        let (corpus, manifest) = gencorpus::generate(&config)?;
        log::info!("sweep: sf={sf} documents={}", manifest.document_count);
        reports.push(run_benchmark(&corpus, &manifest, specs, protocol)?);
    }
    // soft scaling check: mean runtime non-decreasing in SF, 20% allowance
    for w in reports.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        for (a, b) in lo.results.iter().zip(&hi.results) {
            if b.mean_ms < a.mean_ms * 0.8 {
                log::warn!(
                    "scaling anomaly: {}/{}/{} mean {:.3}ms at sf={} vs {:.3}ms at sf={}",
                    a.query_id,
                    a.scheme,
                    a.engine,
                    a.mean_ms,
                    lo.manifest.sf,
                    b.mean_ms,
                    hi.manifest.sf
                );
            }
        }
    }
    Ok(reports)
}
