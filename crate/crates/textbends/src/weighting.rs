//! Scoring kernels: augmented TF, IDF, TF-IDF, Okapi BM25, and the two
//! aggregate scores (summed per-term weights for the keywords task, summed
//! per-query-term weights for the documents task).
//!
//! All statistics are relative to the *filtered* sub-corpus of a query, never
//! to precomputed global values. IDF uses the natural logarithm; the log
//! base is a fixed part of this kit's contract.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::WordId;

/// Free parameters of the weighting formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    /// Augmented-TF floor, in [0, 1).
    pub k_floor: f64,
    pub k1: f64,
    pub b: f64,
}

impl Default for WeightParams {
    fn default() -> Self {
        WeightParams {
            k_floor: 0.5,
            k1: 1.2,
            b: 0.75,
        }
    }
}

impl WeightParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.k_floor) {
            return Err(Error::Config(format!(
                "K must be in [0, 1), got {}",
                self.k_floor
            )));
        }
        if !(1.2..=2.0).contains(&self.k1) {
            return Err(Error::Config(format!(
                "k1 must be in [1.2, 2.0], got {}",
                self.k1
            )));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Error::Config(format!("b must be in [0, 1], got {}", self.b)));
        }
        Ok(())
    }
}

/// How a document's length ||d|| is counted. The default counts every token
/// occurrence (sum of f_td); the alternative counts distinct terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocLengthMode {
    #[default]
    TokenOccurrences,
    DistinctTerms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Tfidf,
    Bm25,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Tfidf => "tfidf",
            Scheme::Bm25 => "bm25",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfidf" => Ok(Scheme::Tfidf),
            "bm25" => Ok(Scheme::Bm25),
            other => Err(Error::Usage(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Statistics of the filtered document subset, computed once per query
/// execution and shared by every kernel call.
#[derive(Debug, Clone, Default)]
pub struct FilteredStats {
    /// Number of documents in the subset.
    pub n_docs: u64,
    /// Per-term document frequency within the subset.
    pub doc_freq: HashMap<WordId, u64>,
    /// Document length per document position (corpus-wide index; only
    /// positions inside the subset are meaningful).
    pub doc_len: HashMap<usize, u64>,
    /// Mean document length over the subset.
    pub avgdl: f64,
}

pub fn tf_augmented(f_td: u32, f_max: u32, k_floor: f64) -> Result<f64> {
    if f_max == 0 {
        return Err(Error::Domain("f_max must be positive".into()));
    }
    if f_td == 0 || f_td > f_max {
        return Err(Error::Domain(format!(
            "f_td must satisfy 1 <= f_td <= f_max, got f_td={f_td} f_max={f_max}"
        )));
    }
    Ok(k_floor + (1.0 - k_floor) * f_td as f64 / f_max as f64)
}

pub fn idf(n_docs: u64, doc_freq: u64) -> Result<f64> {
    if n_docs == 0 || doc_freq == 0 {
        return Err(Error::Domain(format!(
            "idf needs N >= n >= 1, got N={n_docs} n={doc_freq}"
        )));
    }
    if doc_freq > n_docs {
        return Err(Error::Domain(format!(
            "doc frequency {doc_freq} exceeds document count {n_docs}"
        )));
    }
    Ok(1.0 + (n_docs as f64 / doc_freq as f64).ln())
}

pub fn tfidf(f_td: u32, f_max: u32, n_docs: u64, doc_freq: u64, params: &WeightParams) -> Result<f64> {
    Ok(tf_augmented(f_td, f_max, params.k_floor)? * idf(n_docs, doc_freq)?)
}

/// Okapi BM25 with the TF-IDF product in the numerator and the augmented TF
/// in the denominator.
pub fn bm25(
    f_td: u32,
    f_max: u32,
    n_docs: u64,
    doc_freq: u64,
    doc_len: u64,
    avgdl: f64,
    params: &WeightParams,
) -> Result<f64> {
    if avgdl <= 0.0 {
        return Err(Error::Domain("avgdl must be positive".into()));
    }
    let tf = tf_augmented(f_td, f_max, params.k_floor)?;
    let tfidf = tf * idf(n_docs, doc_freq)?;
    let denom = tf + params.k1 * (1.0 - params.b + params.b * doc_len as f64 / avgdl);
    Ok(tfidf * (params.k1 + 1.0) / denom)
}

/// Per-(term, document) weight under the selected scheme.
#[allow(clippy::too_many_arguments)]
pub fn weight(
    scheme: Scheme,
    f_td: u32,
    f_max: u32,
    n_docs: u64,
    doc_freq: u64,
    doc_len: u64,
    avgdl: f64,
    params: &WeightParams,
) -> Result<f64> {
    match scheme {
        Scheme::Tfidf => tfidf(f_td, f_max, n_docs, doc_freq, params),
        Scheme::Bm25 => bm25(f_td, f_max, n_docs, doc_freq, doc_len, avgdl, params),
    }
}

/// Keywords-task aggregate: sum of the term's per-document weights over the
/// subset documents containing it, in ascending document position.
pub fn score_topk_keywords(
    corpus: &crate::model::Corpus,
    in_subset: &[bool],
    stats: &FilteredStats,
    word: WordId,
    params: &WeightParams,
    scheme: Scheme,
) -> Result<f64> {
    let doc_freq = *stats
        .doc_freq
        .get(&word)
        .ok_or_else(|| Error::Domain(format!("word {word} absent from subset")))?;
    let mut sum = 0.0;
    for &fact_idx in corpus.postings(word) {
        let fact = &corpus.facts[fact_idx as usize];
        let pos = corpus
            .doc_position(fact.doc_id)
            .expect("fact row references loaded document");
        if !in_subset[pos] {
            continue;
        }
        let f_max = corpus
            .facts_for_doc(pos)
            .iter()
            .map(|f| f.f_td)
            .max()
            .unwrap();
        sum += weight(
            scheme,
            fact.f_td,
            f_max,
            stats.n_docs,
            doc_freq,
            stats.doc_len[&pos],
            stats.avgdl,
            params,
        )?;
    }
    Ok(sum)
}

/// Documents-task aggregate: sum of the per-query-term weights for one
/// document, in ascending word_id. Terms absent from the document add 0.
pub fn score_topk_documents(
    corpus: &crate::model::Corpus,
    query_words: &[WordId],
    doc_pos: usize,
    stats: &FilteredStats,
    params: &WeightParams,
    scheme: Scheme,
) -> Result<f64> {
    if query_words.is_empty() {
        return Err(Error::Domain("empty search query".into()));
    }
    let facts = corpus.facts_for_doc(doc_pos);
    let f_max = facts.iter().map(|f| f.f_td).max().unwrap();
    let mut sorted: Vec<WordId> = query_words.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut sum = 0.0;
    for word in sorted {
        let Ok(idx) = facts.binary_search_by_key(&word, |f| f.word_id) else {
            continue;
        };
        let doc_freq = match stats.doc_freq.get(&word) {
            Some(&n) => n,
            None => continue,
        };
        sum += weight(
            scheme,
            facts[idx].f_td,
            f_max,
            stats.n_docs,
            doc_freq,
            stats.doc_len[&doc_pos],
            stats.avgdl,
            params,
        )?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn tf_augmented_values() {
        // maximal term hits 1.0 regardless of K
        assert_eq!(tf_augmented(3, 3, 0.5).unwrap(), 1.0);
        assert_eq!(tf_augmented(5, 5, 0.0).unwrap(), 1.0);
        assert!((tf_augmented(1, 2, 0.5).unwrap() - 0.75).abs() < EPS);
        assert!((tf_augmented(1, 4, 0.5).unwrap() - 0.625).abs() < EPS);
    }

    #[test]
    fn tf_augmented_domain_errors() {
        assert!(tf_augmented(1, 0, 0.5).is_err());
        assert!(tf_augmented(0, 3, 0.5).is_err());
        assert!(tf_augmented(4, 3, 0.5).is_err());
    }

    #[test]
    fn idf_values() {
        assert_eq!(idf(7, 7).unwrap(), 1.0);
        assert!((idf(10, 1).unwrap() - (1.0 + 10f64.ln())).abs() < EPS);
        assert!((idf(4, 2).unwrap() - (1.0 + 2f64.ln())).abs() < EPS);
        assert!(idf(0, 0).is_err());
        assert!(idf(3, 0).is_err());
        assert!(idf(2, 3).is_err());
    }

    #[test]
    fn tfidf_hand_values() {
        let p = WeightParams::default();
        // term present in all docs with f_td = f_max
        assert_eq!(tfidf(2, 2, 5, 5, &p).unwrap(), 1.0);
        // 2-doc corpus, d1 = "a a b", t = b: tf 0.75, idf 1+ln2
        let got = tfidf(1, 2, 2, 1, &p).unwrap();
        assert!((got - 0.75 * (1.0 + 2f64.ln())).abs() < EPS);
        assert!((got - 1.269860).abs() < 1e-6);
    }

    #[test]
    fn bm25_single_doc_maximal_term_is_one() {
        let p = WeightParams::default();
        // DL = avgdl, tf = 1, idf = 1: numerator k1+1 equals denominator
        let got = bm25(2, 2, 1, 1, 3, 3.0, &p).unwrap();
        assert!((got - 1.0).abs() < EPS);
    }

    #[test]
    fn bm25_b_zero_is_length_independent() {
        let p = WeightParams {
            b: 0.0,
            ..WeightParams::default()
        };
        let short = bm25(1, 2, 10, 3, 5, 20.0, &p).unwrap();
        let long = bm25(1, 2, 10, 3, 500, 20.0, &p).unwrap();
        assert_eq!(short, long);
        // denominator reduces to TF + k1
        let tf = tf_augmented(1, 2, p.k_floor).unwrap();
        let expected = tf * idf(10, 3).unwrap() * (p.k1 + 1.0) / (tf + p.k1);
        assert!((short - expected).abs() < EPS);
    }

    #[test]
    fn bm25_penalizes_longer_documents() {
        let p = WeightParams::default();
        let short = bm25(1, 2, 10, 3, 10, 20.0, &p).unwrap();
        let long = bm25(1, 2, 10, 3, 30, 20.0, &p).unwrap();
        assert!(long < short);
    }

    #[test]
    fn bm25_avgdl_zero_rejected() {
        let p = WeightParams::default();
        assert!(bm25(1, 1, 1, 1, 1, 0.0, &p).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(WeightParams::default().validate().is_ok());
        assert!(WeightParams {
            k_floor: 1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(WeightParams {
            k1: 0.5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(WeightParams {
            b: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
