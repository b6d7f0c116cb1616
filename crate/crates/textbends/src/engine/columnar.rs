//! Columnar join/aggregate executor.
//!
//! Mirrors the relational plan: dimension filters resolve the document
//! subset, a statistics pass computes the nested-query values (document
//! count, per-term document frequency, document lengths), then the fact
//! table is aggregated per group key in ascending key order. The augmented
//! TF comes from the materialized fact column when the query's K matches
//! the one used at load time, otherwise it is recomputed.

use crate::error::Result;
use crate::model::Corpus;
use crate::weighting::Scheme;
use crate::workload::{QuerySpec, Task};

use super::{
    compute_stats, filtered_positions, finalize_topk, query_word_ids, ExecutionPlan, RankedEntry,
    RankedResult, ResultKey,
};

pub fn execute_columnar(
    _plan: &ExecutionPlan,
    corpus: &Corpus,
    spec: &QuerySpec,
) -> Result<RankedResult> {
    if corpus.is_empty() {
        return Ok(RankedResult::empty(spec.task));
    }
    let in_subset = filtered_positions(corpus, spec);
    let stats = compute_stats(corpus, &in_subset);
    if stats.n_docs == 0 {
        return Ok(RankedResult::empty(spec.task));
    }

    let reuse_stored_tf = (spec.params.k_floor - corpus.tf_floor).abs() < 1e-15;
    let doc_fmax: Vec<u32> = (0..corpus.doc_count())
        .map(|pos| {
            if in_subset[pos] {
                corpus
                    .facts_for_doc(pos)
                    .iter()
                    .map(|f| f.f_td)
                    .max()
                    .unwrap_or(1)
            } else {
                0
            }
        })
        .collect();
    let tf_of = |fact: &crate::model::WordFact, pos: usize| -> f64 {
        if reuse_stored_tf {
            fact.tf
        } else {
            spec.params.k_floor
                + (1.0 - spec.params.k_floor) * fact.f_td as f64 / doc_fmax[pos] as f64
        }
    };
    let weight_of = |fact: &crate::model::WordFact, pos: usize, doc_freq: u64| -> f64 {
        let tf = tf_of(fact, pos);
        let idf = 1.0 + (stats.n_docs as f64 / doc_freq as f64).ln();
        match spec.scheme {
            Scheme::Tfidf => tf * idf,
            Scheme::Bm25 => {
                let dl = stats.doc_len[&pos] as f64;
                tf * idf * (spec.params.k1 + 1.0)
                    / (tf + spec.params.k1
                        * (1.0 - spec.params.b + spec.params.b * dl / stats.avgdl))
            }
        }
    };

    let mut total_matching: u64 = 0;
    let mut entries: Vec<RankedEntry> = Vec::new();
    match spec.task {
        Task::Keywords => {
            // group by word: walk postings in ascending word_id, documents
            // ascending within each
            for word in &corpus.words {
                let Some(&doc_freq) = stats.doc_freq.get(&word.word_id) else {
                    continue;
                };
                let mut sum = 0.0;
                for &fact_idx in corpus.postings(word.word_id) {
                    let fact = &corpus.facts[fact_idx as usize];
                    let pos = corpus.doc_position(fact.doc_id).unwrap();
                    if !in_subset[pos] {
                        continue;
                    }
                    sum += weight_of(fact, pos, doc_freq);
                    total_matching += 1;
                }
                entries.push(RankedEntry {
                    key: ResultKey::Lemma(word.lemma.clone()),
                    score: sum,
                });
            }
        }
        Task::Documents => {
            let words = query_word_ids(corpus, spec);
            for (pos, &included) in in_subset.iter().enumerate() {
                if !included {
                    continue;
                }
                let facts = corpus.facts_for_doc(pos);
                let mut sum = 0.0;
                let mut hit = false;
                for &word in &words {
                    let Ok(idx) = facts.binary_search_by_key(&word, |f| f.word_id) else {
                        continue;
                    };
                    sum += weight_of(&facts[idx], pos, stats.doc_freq[&word]);
                    total_matching += 1;
                    hit = true;
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
