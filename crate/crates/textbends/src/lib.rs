//! textbends: a self-contained benchmark kit for top-k text analytics with
//! dynamically computed term weights.
//!
//! The kit generates scale-factor-controlled synthetic corpora in a
//! snowflake schema, runs eight parameterized top-k keyword/document queries
//! with TF-IDF and Okapi BM25 weights computed over the filtered subset, and
//! reports runtime, selectivity, and traversal complexity under a
//! cold-run/warm-run protocol.

pub mod bench;
pub mod engine;
pub mod error;
pub mod gencorpus;
pub mod model;
pub mod report;
pub mod weighting;
pub mod workload;

pub use error::{Error, Result};
