//! Shared fixtures for the integration suites.
#![allow(dead_code)] // each test target compiles its own copy

use textbends::model::{parse_datetime, Corpus, CorpusBuilder, DocumentInput, Gender};
use textbends::weighting::{Scheme, WeightParams};
use textbends::workload::{FilterSet, QueryId, QuerySpec};

/// Three documents, two male and one female:
/// d1 = "a a b" (male), d2 = "b c" (male), d3 = "a" (female).
pub fn hand_corpus() -> Corpus {
    let mut builder = CorpusBuilder::new(0.5);
    let docs = [
        (1u64, "a a b", Gender::Male, "Ann", 30u32),
        (2, "b c", Gender::Male, "Bob", 40),
        (3, "a", Gender::Female, "Cam", 50),
    ];
    for (doc_id, text, gender, name, age) in docs {
        builder
            .add_document(DocumentInput {
                doc_id,
                raw_text: text.to_string(),
                clean_text: text.to_string(),
                tokens: text.split_whitespace().map(str::to_string).collect(),
                author: (gender, age, name.to_string(), "Smith".to_string()),
                timestamp: parse_datetime("2015-09-17T12:00:00").unwrap(),
                location: (30.0, 0.0),
                tags: vec![],
                entities: vec![],
            })
            .unwrap();
    }
    builder.finish().unwrap()
}

/// Q1: keywords filtered by gender only.
pub fn keyword_spec(gender: Gender, scheme: Scheme) -> QuerySpec {
    QuerySpec {
        query_id: QueryId::Q1,
        task: QueryId::Q1.task(),
        scheme,
        filters: FilterSet {
            gender: Some(gender),
            ..FilterSet::default()
        },
        k: 10,
        params: WeightParams::default(),
    }
}

/// Q'1: documents filtered by gender, scored over `terms`.
pub fn document_spec(gender: Gender, scheme: Scheme, terms: &[&str]) -> QuerySpec {
    QuerySpec {
        query_id: QueryId::Q1d,
        task: QueryId::Q1d.task(),
        scheme,
        filters: FilterSet {
            gender: Some(gender),
            search_terms: Some(terms.iter().map(|t| t.to_string()).collect()),
            ..FilterSet::default()
        },
        k: 10,
        params: WeightParams::default(),
    }
}
