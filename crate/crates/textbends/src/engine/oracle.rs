//! Naive reference executor.
//!
//! Recomputes everything from raw token lists with quadratic scans and
//! shares no scoring or statistics code with the two engines. Guarded to
//! small corpora; used by the verification command and the test suites.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::Corpus;
use crate::weighting::Scheme;
use crate::workload::{QuerySpec, Task};

use super::{finalize_topk, RankedEntry, RankedResult, ResultKey};

pub const ORACLE_MAX_DOCS: usize = 10_000;

pub fn execute_oracle(corpus: &Corpus, spec: &QuerySpec) -> Result<RankedResult> {
    if corpus.doc_count() > ORACLE_MAX_DOCS {
        return Err(Error::Domain(format!(
            "oracle guard: corpus has {} documents, limit {ORACLE_MAX_DOCS}",
            corpus.doc_count()
        )));
    }
    spec.validate()?;

    // filtered subset from dimension rows
    let mut subset: Vec<usize> = Vec::new();
    for (pos, doc) in corpus.documents.iter().enumerate() {
        let f = &spec.filters;
        if let Some(g) = f.gender {
            if corpus.authors[doc.author_id as usize].gender != g {
                continue;
            }
        }
        if let Some(w) = &f.time_window {
            let ts = corpus.times[doc.time_id as usize].full_date;
            if ts < w.start || ts > w.end {
                continue;
            }
        }
        if let Some(g) = &f.geo_box {
            let loc = &corpus.locations[doc.location_id as usize];
            if loc.x < g.x_min || loc.x > g.x_max || loc.y < g.y_min || loc.y > g.y_max {
                continue;
            }
        }
        subset.push(pos);
    }
    if subset.is_empty() {
        return Ok(RankedResult::empty(spec.task));
    }

    // token counts per subset document, straight from lemma_text
    let counts: Vec<BTreeMap<&str, u32>> = subset
        .iter()
        .map(|&pos| {
            let mut m = BTreeMap::new();
            for tok in corpus.documents[pos].lemma_text.split_whitespace() {
                *m.entry(tok).or_insert(0) += 1;
            }
            m
        })
        .collect();

    let n_docs = subset.len() as f64;
    let doc_lens: Vec<u64> = counts
        .iter()
        .map(|m| m.values().map(|&c| c as u64).sum())
        .collect();
    let avgdl = doc_lens.iter().sum::<u64>() as f64 / n_docs;
    let mut doc_freq: BTreeMap<&str, u64> = BTreeMap::new();
    for m in &counts {
        for term in m.keys() {
            *doc_freq.entry(term).or_insert(0) += 1;
        }
    }

    let weight_of = |i: usize, term: &str| -> f64 {
        let f_td = counts[i][term] as f64;
        let f_max = *counts[i].values().max().unwrap() as f64;
        let k = spec.params.k_floor;
        let tf = k + (1.0 - k) * f_td / f_max;
        let idf = 1.0 + (n_docs / doc_freq[term] as f64).ln();
        match spec.scheme {
            Scheme::Tfidf => tf * idf,
            Scheme::Bm25 => {
                tf * idf * (spec.params.k1 + 1.0)
                    / (tf + spec.params.k1
                        * (1.0 - spec.params.b
                            + spec.params.b * doc_lens[i] as f64 / avgdl))
            }
        }
    };

    let mut entries = Vec::new();
    let mut total_matching = 0u64;
    match spec.task {
        Task::Keywords => {
            let mut vocabulary: Vec<&str> = counts
                .iter()
                .flat_map(|m| m.keys().copied())
                .collect();
            vocabulary.sort_unstable();
            vocabulary.dedup();
            for term in vocabulary {
                let mut sum = 0.0;
                for (i, m) in counts.iter().enumerate() {
                    if m.contains_key(term) {
                        sum += weight_of(i, term);
                        total_matching += 1;
                    }
                }
                entries.push(RankedEntry {
                    key: ResultKey::Lemma(term.to_string()),
                    score: sum,
                });
            }
        }
        Task::Documents => {
            let mut terms: Vec<&str> = spec
                .filters
                .search_terms
                .as_deref()
                .unwrap()
                .iter()
                .map(String::as_str)
                .collect();
            terms.sort_unstable();
            terms.dedup();
            for (i, &pos) in subset.iter().enumerate() {
                let mut sum = 0.0;
                let mut hit = false;
                for &term in &terms {
                    if counts[i].contains_key(term) {
                        sum += weight_of(i, term);
                        total_matching += 1;
                        hit = true;
                    }
                }
                if hit {
                    entries.push(RankedEntry {
                        key: ResultKey::Doc(corpus.documents[pos].doc_id),
                        score: sum,
                    });
                }
            }
        }
    }

    Ok(RankedResult {
        task: spec.task,
        entries: finalize_topk(entries, spec.k),
        total_matching,
    })
}
