//! Query execution: a columnar join/aggregate executor, a map/reduce-style
//! executor over nested documents, and a naive oracle used for verification.
//!
//! The engines share nothing but the spec contract: columnar consumes the
//! materialized fact table (stored augmented TF), map/reduce recomputes TF
//! from co-occurrence counts in nested records, and the oracle works from
//! raw token lists. Agreement across the three is the correctness check.

mod columnar;
mod mapreduce;
mod oracle;

pub use columnar::execute_columnar;
pub use mapreduce::execute_mapreduce;
pub use oracle::{execute_oracle, ORACLE_MAX_DOCS};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{Corpus, DocId, WordId};
use crate::weighting::{FilteredStats, Scheme};
use crate::workload::{QuerySpec, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Executor {
    Columnar,
    Mapreduce,
    Oracle,
}

impl Executor {
    pub fn as_str(self) -> &'static str {
        match self {
            Executor::Columnar => "columnar",
            Executor::Mapreduce => "mapreduce",
            Executor::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Executor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "columnar" => Ok(Executor::Columnar),
            "mapreduce" => Ok(Executor::Mapreduce),
            "oracle" => Ok(Executor::Oracle),
            other => Err(Error::Usage(format!("unknown engine {other:?}"))),
        }
    }
}

/// Filter constraints c1..c4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    C1Gender,
    C2TimeWindow,
    C3GeoBox,
    C4SearchTerms,
}

/// Join constraints c5..c8 between the fact table and each dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JoinConstraint {
    C5Word,
    C6Author,
    C7Time,
    C8Location,
}

/// Nested statistics queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NestedQuery {
    /// Document count of the filtered subset.
    QnD,
    /// Per-document length over the filtered subset.
    QDL,
    /// Per-document word counts (documents task only).
    QnW,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKey {
    Word,
    DocId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Stage {
    Filter(Constraint),
    Join(JoinConstraint),
    Nested(NestedQuery),
    GroupBy(GroupKey),
    TopK(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionPlan {
    pub executor: Executor,
    pub stages: Vec<Stage>,
}

/// Derive the stage list from a spec's query shape.
pub fn plan(spec: &QuerySpec, executor: Executor) -> ExecutionPlan {
    let mut stages = vec![
        Stage::Join(JoinConstraint::C5Word),
        Stage::Join(JoinConstraint::C6Author),
    ];
    if spec.query_id.uses_time() {
        stages.push(Stage::Join(JoinConstraint::C7Time));
    }
    if spec.query_id.uses_location() {
        stages.push(Stage::Join(JoinConstraint::C8Location));
    }
    stages.push(Stage::Filter(Constraint::C1Gender));
    if spec.query_id.uses_time() {
        stages.push(Stage::Filter(Constraint::C2TimeWindow));
    }
    if spec.query_id.uses_location() {
        stages.push(Stage::Filter(Constraint::C3GeoBox));
    }
    if spec.task == Task::Documents {
        stages.push(Stage::Filter(Constraint::C4SearchTerms));
        stages.push(Stage::Nested(NestedQuery::QnW));
    }
    stages.push(Stage::Nested(match spec.scheme {
        Scheme::Tfidf => NestedQuery::QnD,
        Scheme::Bm25 => NestedQuery::QDL,
    }));
    stages.push(Stage::GroupBy(match spec.task {
        Task::Keywords => GroupKey::Word,
        Task::Documents => GroupKey::DocId,
    }));
    stages.push(Stage::TopK(spec.k));
    ExecutionPlan { executor, stages }
}

impl ExecutionPlan {
    pub fn joins(&self) -> Vec<JoinConstraint> {
        self.stages
            .iter()
            .filter_map(|s| match s {
                Stage::Join(j) => Some(*j),
                _ => None,
            })
            .collect()
    }

    pub fn nested(&self) -> Vec<NestedQuery> {
        self.stages
            .iter()
            .filter_map(|s| match s {
                Stage::Nested(n) => Some(*n),
                _ => None,
            })
            .collect()
    }
}

/// Result key: word lemma for the keywords task, document id otherwise.
/// The derived order (lexicographic for lemmas, numeric for doc ids) is the
/// deterministic tie-break.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResultKey {
    Lemma(String),
    Doc(DocId),
}

impl std::fmt::Display for ResultKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResultKey::Lemma(s) => write!(f, "{s}"),
            ResultKey::Doc(id) => write!(f, "{id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub key: ResultKey,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub task: Task,
    pub entries: Vec<RankedEntry>,
    /// Rows admitted by the query's filter stage before grouping and the
    /// top-k cut; the n(Q) of the selectivity formula.
    pub total_matching: u64,
}

impl RankedResult {
    pub fn empty(task: Task) -> Self {
        RankedResult {
            task,
            entries: Vec::new(),
            total_matching: 0,
        }
    }

    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_string(self).expect("result serializes").as_bytes());
        let bytes = hasher.finalize();
        let mut s = String::with_capacity(bytes.len() * 2);
        for b in bytes {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

/// Sort score-descending with ascending-key tie-break, then cut to k.
pub(crate) fn finalize_topk(mut entries: Vec<RankedEntry>, k: usize) -> Vec<RankedEntry> {
    entries.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("scores are finite")
            .then_with(|| a.key.cmp(&b.key))
    });
    entries.truncate(k);
    entries
}

/// Positions of documents admitted by the dimension filters c1..c3.
pub(crate) fn filtered_positions(corpus: &Corpus, spec: &QuerySpec) -> Vec<bool> {
    let f = &spec.filters;
    corpus
        .documents
        .iter()
        .map(|doc| {
            if let Some(gender) = f.gender {
                if corpus.authors[doc.author_id as usize].gender != gender {
                    return false;
                }
            }
            if let Some(w) = &f.time_window {
                let ts = corpus.times[doc.time_id as usize].full_date;
                if ts < w.start || ts > w.end {
                    return false;
                }
            }
            if let Some(g) = &f.geo_box {
                let loc = &corpus.locations[doc.location_id as usize];
                if !g.contains(loc.x, loc.y) {
                    return false;
                }
            }
            true
        })
        .collect()
}

/// Statistics pass shared by the columnar executor (and selectivity).
pub(crate) fn compute_stats(corpus: &Corpus, in_subset: &[bool]) -> FilteredStats {
    let mut stats = FilteredStats::default();
    let mut total_len: u64 = 0;
    for (pos, &included) in in_subset.iter().enumerate() {
        if !included {
            continue;
        }
        stats.n_docs += 1;
        let mut len = 0u64;
        for fact in corpus.facts_for_doc(pos) {
            len += fact.f_td as u64;
            *stats.doc_freq.entry(fact.word_id).or_insert(0) += 1;
        }
        stats.doc_len.insert(pos, len);
        total_len += len;
    }
    if stats.n_docs > 0 {
        stats.avgdl = total_len as f64 / stats.n_docs as f64;
    }
    stats
}

/// Resolve search terms to word ids; terms outside the vocabulary drop out.
pub(crate) fn query_word_ids(corpus: &Corpus, spec: &QuerySpec) -> Vec<WordId> {
    let mut ids: Vec<WordId> = spec
        .filters
        .search_terms
        .as_deref()
        .unwrap_or_default()
        .iter()
        .filter_map(|t| corpus.word_id(t))
        .collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// Fraction of the fact table a query's filter stage excludes:
/// S(Q) = 1 - n(Q)/N with N the total fact-row count.
pub fn selectivity(spec: &QuerySpec, corpus: &Corpus) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::Domain("selectivity undefined on empty corpus".into()));
    }
    let in_subset = filtered_positions(corpus, spec);
    let admitted = match spec.task {
        Task::Keywords => in_subset
            .iter()
            .enumerate()
            .filter(|(_, &ok)| ok)
            .map(|(pos, _)| corpus.facts_for_doc(pos).len() as u64)
            .sum::<u64>(),
        Task::Documents => {
            let words = query_word_ids(corpus, spec);
            in_subset
                .iter()
                .enumerate()
                .filter(|(_, &ok)| ok)
                .map(|(pos, _)| {
                    corpus
                        .facts_for_doc(pos)
                        .iter()
                        .filter(|f| words.binary_search(&f.word_id).is_ok())
                        .count() as u64
                })
                .sum::<u64>()
        }
    };
    Ok(1.0 - admitted as f64 / corpus.facts.len() as f64)
}

/// Execute a spec with the chosen executor.
pub fn execute(executor: Executor, corpus: &Corpus, spec: &QuerySpec) -> Result<RankedResult> {
    spec.validate()?;
    match executor {
        Executor::Columnar => execute_columnar(&plan(spec, executor), corpus, spec),
        Executor::Mapreduce => {
            let nested = crate::model::to_nested(corpus)?;
            execute_mapreduce(&plan(spec, executor), &nested, spec)
        }
        Executor::Oracle => execute_oracle(corpus, spec),
    }
}

/// Run all three executors for each spec and compare: identical rankings,
/// scores within `rel_tol` relative. Returns one (label, passed) per spec.
pub fn verify_specs(
    corpus: &Corpus,
    specs: &[QuerySpec],
    rel_tol: f64,
) -> Result<Vec<(String, bool)>> {
    let nested = crate::model::to_nested(corpus)?;
    let mut report = Vec::with_capacity(specs.len());
    for spec in specs {
        let columnar = execute_columnar(&plan(spec, Executor::Columnar), corpus, spec)?;
        let mapreduce = execute_mapreduce(&plan(spec, Executor::Mapreduce), &nested, spec)?;
        let oracle = execute_oracle(corpus, spec)?;
        let ok = results_equivalent(&columnar, &mapreduce, rel_tol)
            && results_equivalent(&columnar, &oracle, rel_tol);
        report.push((crate::workload::spec_label(spec), ok));
    }
    Ok(report)
}

/// Relative-difference check used by the equivalence suites.
pub fn scores_close(a: f64, b: f64, rel_tol: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= rel_tol * scale
}

/// Compare two results: identical key order, scores within `rel_tol`
/// relative, equal candidate counts.
pub fn results_equivalent(a: &RankedResult, b: &RankedResult, rel_tol: f64) -> bool {
    a.task == b.task
        && a.total_matching == b.total_matching
        && a.entries.len() == b.entries.len()
        && a.entries
            .iter()
            .zip(&b.entries)
            .all(|(x, y)| x.key == y.key && scores_close(x.score, y.score, rel_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighting::WeightParams;
    use crate::workload::{build_workload, ParamFile, QueryId};

    fn specs() -> Vec<QuerySpec> {
        build_workload(
            &ParamFile::reference(),
            &[Scheme::Tfidf, Scheme::Bm25],
            10,
            WeightParams::default(),
        )
        .unwrap()
    }

    fn find(specs: &[QuerySpec], id: QueryId, scheme: Scheme) -> QuerySpec {
        specs
            .iter()
            .find(|s| s.query_id == id && s.scheme == scheme)
            .cloned()
            .unwrap()
    }

    #[test]
    fn plan_join_sets_match_query_shape() {
        let all = specs();
        let p = plan(&find(&all, QueryId::Q1, Scheme::Tfidf), Executor::Columnar);
        assert_eq!(p.joins(), [JoinConstraint::C5Word, JoinConstraint::C6Author]);
        assert_eq!(p.nested(), [NestedQuery::QnD]);
        assert!(p.stages.contains(&Stage::GroupBy(GroupKey::Word)));

        let p = plan(&find(&all, QueryId::Q4, Scheme::Bm25), Executor::Columnar);
        assert_eq!(
            p.joins(),
            [
                JoinConstraint::C5Word,
                JoinConstraint::C6Author,
                JoinConstraint::C7Time,
                JoinConstraint::C8Location
            ]
        );
        assert_eq!(p.nested(), [NestedQuery::QDL]);

        let p = plan(&find(&all, QueryId::Q2d, Scheme::Bm25), Executor::Columnar);
        assert_eq!(
            p.joins(),
            [
                JoinConstraint::C5Word,
                JoinConstraint::C6Author,
                JoinConstraint::C7Time
            ]
        );
        assert_eq!(p.nested(), [NestedQuery::QnW, NestedQuery::QDL]);
        assert!(p.stages.contains(&Stage::GroupBy(GroupKey::DocId)));
    }

    #[test]
    fn topk_tie_break_is_ascending_key() {
        let entries = vec![
            RankedEntry {
                key: ResultKey::Lemma("b".into()),
                score: 1.0,
            },
            RankedEntry {
                key: ResultKey::Lemma("a".into()),
                score: 1.0,
            },
            RankedEntry {
                key: ResultKey::Lemma("c".into()),
                score: 2.0,
            },
        ];
        let sorted = finalize_topk(entries, 10);
        let keys: Vec<String> = sorted.iter().map(|e| e.key.to_string()).collect();
        assert_eq!(keys, ["c", "a", "b"]);
    }

    #[test]
    fn selectivity_rejects_empty_corpus() {
        let corpus = crate::model::from_nested(Vec::new(), 0.5).unwrap();
        let spec = find(&specs(), QueryId::Q1, Scheme::Tfidf);
        assert!(selectivity(&spec, &corpus).is_err());
    }
}
