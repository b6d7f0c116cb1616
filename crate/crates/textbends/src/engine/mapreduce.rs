//! Map/reduce-style executor over the nested document stream.
//!
//! Two passes: a statistics pass broadcasts the filtered subset's document
//! count, per-term document frequencies, and average length; the main pass
//! maps each admitted document to (key, partial weight) pairs, shuffles them
//! into ascending key order, and reduces by summation. Augmented TF is
//! recomputed from the co-occurrence counts embedded in each record.

use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::model::{parse_datetime, NestedDocument};
use crate::weighting::Scheme;
use crate::workload::{QuerySpec, Task};

use super::{finalize_topk, ExecutionPlan, RankedEntry, RankedResult, ResultKey};

struct BroadcastStats {
    n_docs: u64,
    doc_freq: HashMap<String, u64>,
    avgdl: f64,
}

fn admitted(doc: &NestedDocument, spec: &QuerySpec) -> Result<bool> {
    let f = &spec.filters;
    if let Some(gender) = f.gender {
        if doc.author.gender != gender {
            return Ok(false);
        }
    }
    if let Some(w) = &f.time_window {
        let ts = parse_datetime(&doc.time.date)?;
        if ts < w.start || ts > w.end {
            return Ok(false);
        }
    }
    if let Some(g) = &f.geo_box {
        if !g.contains(doc.location.x, doc.location.y) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn doc_length(doc: &NestedDocument) -> u64 {
    doc.word_facts.iter().map(|f| f.f_td as u64).sum()
}

pub fn execute_mapreduce(
    _plan: &ExecutionPlan,
    nested: &[NestedDocument],
    spec: &QuerySpec,
) -> Result<RankedResult> {
    // statistics pass
    let mut stats = BroadcastStats {
        n_docs: 0,
        doc_freq: HashMap::new(),
        avgdl: 0.0,
    };
    let mut total_len = 0u64;
    for doc in nested {
        if !admitted(doc, spec)? {
            continue;
        }
        stats.n_docs += 1;
        total_len += doc_length(doc);
        for fact in &doc.word_facts {
            *stats.doc_freq.entry(fact.lemma.clone()).or_insert(0) += 1;
        }
    }
    if stats.n_docs == 0 {
        return Ok(RankedResult::empty(spec.task));
    }
    stats.avgdl = total_len as f64 / stats.n_docs as f64;

    // map: per admitted document, emit (key, partial) pairs
    let mut shuffle: BTreeMap<ResultKey, Vec<f64>> = BTreeMap::new();
    let mut total_matching = 0u64;
    let search_terms: Vec<&str> = spec
        .filters
        .search_terms
        .as_deref()
        .unwrap_or_default()
        .iter()
        .map(String::as_str)
        .collect();
    for doc in nested {
        if !admitted(doc, spec)? {
            continue;
        }
        let f_max = doc.word_facts.iter().map(|f| f.f_td).max().unwrap_or(1);
        let dl = doc_length(doc);
        let weight_of = |f_td: u32, doc_freq: u64| -> f64 {
            let tf = spec.params.k_floor
                + (1.0 - spec.params.k_floor) * f_td as f64 / f_max as f64;
            let idf = 1.0 + (stats.n_docs as f64 / doc_freq as f64).ln();
            match spec.scheme {
                Scheme::Tfidf => tf * idf,
                Scheme::Bm25 => {
                    tf * idf * (spec.params.k1 + 1.0)
                        / (tf + spec.params.k1
                            * (1.0 - spec.params.b
                                + spec.params.b * dl as f64 / stats.avgdl))
                }
            }
        };
        match spec.task {
            Task::Keywords => {
                for fact in &doc.word_facts {
                    let w = weight_of(fact.f_td, stats.doc_freq[&fact.lemma]);
                    shuffle
                        .entry(ResultKey::Lemma(fact.lemma.clone()))
                        .or_default()
                        .push(w);
                    total_matching += 1;
                }
            }
            Task::Documents => {
                for fact in &doc.word_facts {
                    if !search_terms.contains(&fact.lemma.as_str()) {
                        continue;
                    }
                    let w = weight_of(fact.f_td, stats.doc_freq[&fact.lemma]);
                    shuffle
                        .entry(ResultKey::Doc(doc.doc_id))
                        .or_default()
                        .push(w);
                    total_matching += 1;
                }
            }
        }
    }

    // reduce: sum partials per key in shuffle (ascending-key) order
    let entries: Vec<RankedEntry> = shuffle
        .into_iter()
        .map(|(key, partials)| RankedEntry {
            key,
            score: partials.into_iter().sum(),
        })
        .collect();

    Ok(RankedResult {
        task: spec.task,
        entries: finalize_topk(entries, spec.k),
        total_matching,
    })
}
