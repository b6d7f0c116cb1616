//! Fault injection: corrupted inputs must be rejected at load time, and a
//! corrupted in-memory fact table must surface as executor divergence.

mod common;

use std::fs;

use textbends::engine::verify_specs;
use textbends::gencorpus::{export_snowflake, import_snowflake};
use textbends::model::Gender;
use textbends::weighting::Scheme;

use common::{hand_corpus, keyword_spec};

#[test]
fn snowflake_roundtrip_is_lossless() {
    let corpus = hand_corpus();
    let dir = tempfile::tempdir().unwrap();
    export_snowflake(&corpus, dir.path()).unwrap();
    let back = import_snowflake(dir.path(), 0.5).unwrap();
    assert_eq!(corpus.facts, back.facts);
    assert_eq!(corpus.documents, back.documents);
}

#[test]
fn corrupted_tf_column_fails_import() {
    let corpus = hand_corpus();
    let dir = tempfile::tempdir().unwrap();
    export_snowflake(&corpus, dir.path()).unwrap();

    let facts = dir.path().join("document_facts.csv");
    let text = fs::read_to_string(&facts).unwrap();
    // tf is the last column; flip one materialized value
    let corrupted = text.replacen(",1\n", ",0.9\n", 1);
    assert_ne!(text, corrupted);
    fs::write(&facts, corrupted).unwrap();

    let err = import_snowflake(dir.path(), 0.5).unwrap_err();
    assert!(matches!(err, textbends::Error::Integrity(_)), "{err}");
    assert!(err.to_string().contains("tf"), "{err}");
}

#[test]
fn missing_export_file_fails_import() {
    let corpus = hand_corpus();
    let dir = tempfile::tempdir().unwrap();
    export_snowflake(&corpus, dir.path()).unwrap();
    fs::remove_file(dir.path().join("word_dim.csv")).unwrap();
    let err = import_snowflake(dir.path(), 0.5).unwrap_err();
    assert!(err.to_string().contains("word_dim.csv"), "{err}");
}

#[test]
fn corrupted_in_memory_tf_surfaces_as_divergence() {
    let mut corpus = hand_corpus();
    let specs = [
        keyword_spec(Gender::Male, Scheme::Tfidf),
        keyword_spec(Gender::Female, Scheme::Tfidf),
    ];
    let clean = verify_specs(&corpus, &specs, 1e-9).unwrap();
    assert!(clean.iter().all(|(_, ok)| *ok));

    // doc 1 is male: poison one of its stored tf values; the columnar engine
    // trusts the column while the oracle recomputes from the token stream
    let fact = corpus
        .facts
        .iter_mut()
        .find(|f| f.doc_id == 1)
        .unwrap();
    fact.tf *= 1.5;

    let outcomes = verify_specs(&corpus, &specs, 1e-9).unwrap();
    let male = outcomes.iter().find(|(l, _)| l.ends_with("/male")).unwrap();
    let female = outcomes.iter().find(|(l, _)| l.ends_with("/female")).unwrap();
    assert!(!male.1, "male spec should diverge: {outcomes:?}");
    assert!(female.1, "female spec is untouched: {outcomes:?}");
}
