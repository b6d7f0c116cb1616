//! Corpus generation and file I/O.
//!
//! The generator is deterministic: one seeded stream of randomness consumed
//! in document order, so equal configs produce byte-identical corpora.
//! Documents are balanced across genders (alternating), spread evenly over
//! the time range and the four quadrants of the geo box, and token
//! frequencies follow a Zipf law over a synthetic vocabulary. A small list of
//! guaranteed terms is injected at a fixed rate so that search-term queries
//! are never empty.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{Duration, NaiveDateTime};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rand_distr::Zipf;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{
    self, format_datetime, parse_datetime, Author, Corpus, CorpusBuilder, Document, DocumentInput,
    EntityKind, GeoLocation, Gender, NamedEntity, NestedDocument, Tag, TagKind, TimePoint, Word,
    WordFact,
};

/// Documents carrying a given guaranteed term: one in `GUARANTEE_PERIOD`.
const GUARANTEE_PERIOD: u64 = 250;

const FIRST_NAMES: [&str; 8] = [
    "alice", "bob", "carol", "dan", "erin", "frank", "grace", "henry",
];
const LAST_NAMES: [&str; 8] = [
    "smith", "jones", "brown", "davis", "miller", "wilson", "moore", "taylor",
];
const ENTITY_LABELS: [(&str, EntityKind); 5] = [
    ("london", EntityKind::Location),
    ("acme", EntityKind::Organization),
    ("turing", EntityKind::Person),
    ("widget", EntityKind::Product),
    ("equinox", EntityKind::Other),
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub sf: f64,
    pub docs_per_unit_sf: u64,
    pub seed: u64,
    pub vocab_size: usize,
    pub min_tokens: usize,
    pub max_tokens: usize,
    pub time_start: NaiveDateTime,
    pub time_end: NaiveDateTime,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub zipf_exponent: f64,
    pub guaranteed_terms: Vec<String>,
    /// 0 means one author per document.
    pub author_pool: usize,
    /// Augmented-TF floor materialized into the fact table.
    pub tf_floor: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            sf: 0.001,
            docs_per_unit_sf: 1_000_000,
            seed: 42,
            vocab_size: 1000,
            min_tokens: 5,
            max_tokens: 30,
            // ten whole days covering the reference query window
            time_start: parse_datetime("2015-09-10T00:00:00").unwrap(),
            time_end: parse_datetime("2015-09-20T00:00:00").unwrap(),
            // covers the reference geo box [20,40]x[-100,100]
            x_min: 0.0,
            x_max: 60.0,
            y_min: -150.0,
            y_max: 150.0,
            zipf_exponent: 1.07,
            guaranteed_terms: vec!["think".into(), "today".into(), "friday".into()],
            author_pool: 0,
            tf_floor: 0.5,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        // NaN must fail too, hence the negated comparison
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.sf > 0.0) {
            return Err(Error::Config(format!("sf must be positive, got {}", self.sf)));
        }
        if self.docs_per_unit_sf == 0 {
            return Err(Error::Config("docs_per_unit_sf must be positive".into()));
        }
        if self.vocab_size < 1 {
            return Err(Error::Config("vocab_size must be at least 1".into()));
        }
        if self.min_tokens < 1 || self.min_tokens > self.max_tokens {
            return Err(Error::Config(format!(
                "token range [{}, {}] invalid",
                self.min_tokens, self.max_tokens
            )));
        }
        if self.time_start >= self.time_end {
            return Err(Error::Config("time range start must precede end".into()));
        }
        if self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(Error::Config("degenerate geo range".into()));
        }
        if !(0.0..1.0).contains(&self.tf_floor) {
            return Err(Error::Config("tf_floor must be in [0, 1)".into()));
        }
        Ok(())
    }

    pub fn document_count(&self) -> u64 {
        (self.sf * self.docs_per_unit_sf as f64).round() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub sf: f64,
    pub seed: u64,
    pub document_count: u64,
    pub vocabulary_size: u64,
    pub checksum: String,
}

/// SHA-256 over the canonical JSONL serialization of the nested view.
pub fn corpus_checksum(corpus: &Corpus) -> Result<String> {
    let mut hasher = Sha256::new();
    for rec in model::to_nested(corpus)? {
        hasher.update(serde_json::to_string(&rec)?.as_bytes());
        hasher.update(b"\n");
    }
    Ok(hex_digest(hasher))
}

fn hex_digest(hasher: Sha256) -> String {
    let bytes = hasher.finalize();
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

pub fn generate(config: &GeneratorConfig) -> Result<(Corpus, CorpusManifest)> {
    config.validate()?;
    let n_docs = config.document_count();
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let zipf = Zipf::new(config.vocab_size as f64, config.zipf_exponent)
        .map_err(|e| Error::Config(format!("bad zipf exponent: {e}")))?;

    // pre-generated author pool, alternating gender so document order keeps
    // the gender counts balanced
    let pool: Vec<(Gender, u32, String, String)> = (0..config.author_pool)
        .map(|i| {
            (
                if i % 2 == 0 { Gender::Male } else { Gender::Female },
                rng.random_range(18..80),
                FIRST_NAMES[rng.random_range(0..FIRST_NAMES.len())].to_string(),
                LAST_NAMES[rng.random_range(0..LAST_NAMES.len())].to_string(),
            )
        })
        .collect();

    let range_secs = (config.time_end - config.time_start).num_seconds();
    let quad_x = (config.x_min + config.x_max) / 2.0;
    let quad_y = (config.y_min + config.y_max) / 2.0;

    let mut builder = CorpusBuilder::new(config.tf_floor);
    for i in 0..n_docs {
        let author = if pool.is_empty() {
            (
                if i % 2 == 0 { Gender::Male } else { Gender::Female },
                rng.random_range(18..80),
                format!(
                    "{}{}",
                    FIRST_NAMES[rng.random_range(0..FIRST_NAMES.len())],
                    i
                ),
                LAST_NAMES[rng.random_range(0..LAST_NAMES.len())].to_string(),
            )
        } else {
            pool[(i as usize) % pool.len()].clone()
        };

        // even spread over the time range; per-bucket counts differ by <= 1
        let offset = (i as i128 * range_secs as i128 / n_docs.max(1) as i128) as i64;
        let timestamp = config.time_start + Duration::seconds(offset);

        // round-robin quadrant, uniform position inside it
        let (x_lo, x_hi) = if i % 2 == 0 {
            (config.x_min, quad_x)
        } else {
            (quad_x, config.x_max)
        };
        let (y_lo, y_hi) = if (i / 2) % 2 == 0 {
            (config.y_min, quad_y)
        } else {
            (quad_y, config.y_max)
        };
        let location = (
            rng.random_range(x_lo..x_hi),
            rng.random_range(y_lo..y_hi),
        );

        let len = rng.random_range(config.min_tokens..=config.max_tokens);
        let mut tokens: Vec<String> = (0..len)
            .map(|_| {
                let rank = zipf.sample(&mut rng) as u64;
                format!("w{rank:05}")
            })
            .collect();
        for (j, term) in config.guaranteed_terms.iter().enumerate() {
            if (i + j as u64 * 83).is_multiple_of(GUARANTEE_PERIOD) {
                tokens.push(term.clone());
            }
        }

        let n_tags = rng.random_range(0..3);
        let tags: Vec<(String, TagKind)> = (0..n_tags)
            .map(|_| {
                if rng.random_bool(0.7) {
                    (format!("#topic{}", rng.random_range(0..20)), TagKind::Hashtag)
                } else {
                    (format!("@user{}", rng.random_range(0..50)), TagKind::Mention)
                }
            })
            .collect();
        let entities: Vec<(String, EntityKind)> = if rng.random_bool(0.3) {
            let (label, kind) = ENTITY_LABELS[rng.random_range(0..ENTITY_LABELS.len())];
            vec![(label.to_string(), kind)]
        } else {
            Vec::new()
        };

        let text = tokens.join(" ");
        builder.add_document(DocumentInput {
            doc_id: i,
            raw_text: text.clone(),
            clean_text: text,
            tokens,
            author,
            timestamp,
            location,
            tags,
            entities,
        })?;
    }
    let corpus = builder.finish()?;
    let manifest = CorpusManifest {
        sf: config.sf,
        seed: config.seed,
        document_count: corpus.doc_count() as u64,
        vocabulary_size: corpus.vocab_size() as u64,
        checksum: corpus_checksum(&corpus)?,
    };
    Ok((corpus, manifest))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenizerMode {
    /// `lemma_text` is split on whitespace as-is.
    #[default]
    Pretokenized,
    /// `lemma_text` is lowercased before splitting.
    WhitespaceLower,
}

impl std::str::FromStr for TokenizerMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pretokenized" => Ok(TokenizerMode::Pretokenized),
            "whitespace_lower" => Ok(TokenizerMode::WhitespaceLower),
            other => Err(Error::Usage(format!("unknown tokenizer mode {other:?}"))),
        }
    }
}

/// Load a corpus from newline-delimited nested-document records.
pub fn ingest_jsonl(path: &Path, mode: TokenizerMode, tf_floor: f64) -> Result<Corpus> {
    let file = fs::File::open(path)?;
    ingest_jsonl_reader(BufReader::new(file), mode, tf_floor)
}

pub fn ingest_jsonl_reader<R: BufRead>(
    reader: R,
    mode: TokenizerMode,
    tf_floor: f64,
) -> Result<Corpus> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut rec: NestedDocument =
            serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
        if mode == TokenizerMode::WhitespaceLower {
            rec.lemma_text = rec.lemma_text.to_lowercase();
        }
        records.push(rec);
    }
    model::from_nested(records, tf_floor)
}

/// Write the nested view as JSONL, one canonical record per line.
pub fn write_jsonl(corpus: &Corpus, path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    for rec in model::to_nested(corpus)? {
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_manifest(manifest: &CorpusManifest, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(manifest)?)?;
    Ok(())
}

pub fn read_manifest(path: &Path) -> Result<CorpusManifest> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

const SNOWFLAKE_FILES: [&str; 9] = [
    "document_facts.csv",
    "document_dim.csv",
    "word_dim.csv",
    "time_dim.csv",
    "author_dim.csv",
    "location_dim.csv",
    "tag_dim.csv",
    "named_entity_dim.csv",
    "document_bridge.csv",
];

/// Dump the corpus as one delimited file per entity, plus a single bridge
/// file for the document/tag and document/entity many-to-many links.
pub fn export_snowflake(corpus: &Corpus, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;

    let mut w = csv::Writer::from_path(dir.join("document_facts.csv"))?;
    w.write_record(["doc_id", "word_id", "f_td", "tf"])?;
    for f in &corpus.facts {
        w.write_record([
            f.doc_id.to_string(),
            f.word_id.to_string(),
            f.f_td.to_string(),
            f.tf.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("document_dim.csv"))?;
    w.write_record([
        "doc_id",
        "raw_text",
        "clean_text",
        "lemma_text",
        "author_id",
        "time_id",
        "location_id",
    ])?;
    for d in &corpus.documents {
        w.write_record([
            d.doc_id.to_string(),
            d.raw_text.clone(),
            d.clean_text.clone(),
            d.lemma_text.clone(),
            d.author_id.to_string(),
            d.time_id.to_string(),
            d.location_id.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("word_dim.csv"))?;
    w.write_record(["word_id", "lemma"])?;
    for word in &corpus.words {
        w.write_record([word.word_id.to_string(), word.lemma.clone()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("time_dim.csv"))?;
    w.write_record(["time_id", "full_date", "minute", "hour", "day", "month", "year"])?;
    for t in &corpus.times {
        w.write_record([
            t.time_id.to_string(),
            format_datetime(t.full_date),
            t.minute.to_string(),
            t.hour.to_string(),
            t.day.to_string(),
            t.month.to_string(),
            t.year.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("author_dim.csv"))?;
    w.write_record(["author_id", "gender", "age", "firstname", "lastname"])?;
    for a in &corpus.authors {
        w.write_record([
            a.author_id.to_string(),
            a.gender.as_str().to_string(),
            a.age.to_string(),
            a.firstname.clone(),
            a.lastname.clone(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("location_dim.csv"))?;
    w.write_record(["location_id", "x", "y"])?;
    for l in &corpus.locations {
        w.write_record([l.location_id.to_string(), l.x.to_string(), l.y.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("tag_dim.csv"))?;
    w.write_record(["tag_id", "label", "kind"])?;
    for t in &corpus.tags {
        let kind = serde_json::to_value(t.kind)?;
        w.write_record([
            t.id.to_string(),
            t.label.clone(),
            kind.as_str().unwrap().to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("named_entity_dim.csv"))?;
    w.write_record(["entity_id", "label", "kind"])?;
    for e in &corpus.entities {
        let kind = serde_json::to_value(e.kind)?;
        w.write_record([
            e.id.to_string(),
            e.label.clone(),
            kind.as_str().unwrap().to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("document_bridge.csv"))?;
    w.write_record(["doc_id", "dim", "ref_id"])?;
    for d in &corpus.documents {
        for &t in &d.tag_ids {
            w.write_record([d.doc_id.to_string(), "tag".to_string(), t.to_string()])?;
        }
        for &e in &d.named_entity_ids {
            w.write_record([
                d.doc_id.to_string(),
                "named_entity".to_string(),
                e.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize, file: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = rec
        .get(idx)
        .ok_or_else(|| Error::Integrity(format!("{file}: missing column {idx}")))?;
    raw.parse().map_err(|e| {
        Error::Integrity(format!("{file}: bad value {raw:?} in column {idx}: {e}"))
    })
}

/// Load a snowflake export back into memory; the inverse of
/// [`export_snowflake`] and the round-trip oracle for it.
pub fn import_snowflake(dir: &Path, tf_floor: f64) -> Result<Corpus> {
    for name in SNOWFLAKE_FILES {
        if !dir.join(name).exists() {
            return Err(Error::Integrity(format!("missing export file {name}")));
        }
    }
    let read = |name: &str| -> Result<Vec<csv::StringRecord>> {
        let mut rdr = csv::Reader::from_path(dir.join(name))?;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            rows.push(rec?);
        }
        Ok(rows)
    };

    let words = read("word_dim.csv")?
        .iter()
        .map(|r| {
            Ok(Word {
                word_id: parse_field(r, 0, "word_dim")?,
                lemma: r.get(1).unwrap_or_default().to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let authors = read("author_dim.csv")?
        .iter()
        .map(|r| {
            Ok(Author {
                author_id: parse_field(r, 0, "author_dim")?,
                gender: parse_field(r, 1, "author_dim")?,
                age: parse_field(r, 2, "author_dim")?,
                firstname: r.get(3).unwrap_or_default().to_string(),
                lastname: r.get(4).unwrap_or_default().to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let times = read("time_dim.csv")?
        .iter()
        .map(|r| {
            let id = parse_field(r, 0, "time_dim")?;
            let ts = parse_datetime(r.get(1).unwrap_or_default())?;
            Ok(TimePoint::from_datetime(id, ts))
        })
        .collect::<Result<Vec<_>>>()?;
    let locations = read("location_dim.csv")?
        .iter()
        .map(|r| {
            Ok(GeoLocation {
                location_id: parse_field(r, 0, "location_dim")?,
                x: parse_field(r, 1, "location_dim")?,
                y: parse_field(r, 2, "location_dim")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let parse_kind = |s: &str| -> Result<TagKind> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Integrity(format!("unknown tag kind {s:?}")))
    };
    let tags = read("tag_dim.csv")?
        .iter()
        .map(|r| {
            Ok(Tag {
                id: parse_field(r, 0, "tag_dim")?,
                label: r.get(1).unwrap_or_default().to_string(),
                kind: parse_kind(r.get(2).unwrap_or_default())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let entities = read("named_entity_dim.csv")?
        .iter()
        .map(|r| {
            let kind: EntityKind =
                serde_json::from_value(serde_json::Value::String(
                    r.get(2).unwrap_or_default().to_string(),
                ))
                .map_err(|_| {
                    Error::Integrity(format!("unknown entity kind {:?}", r.get(2)))
                })?;
            Ok(NamedEntity {
                id: parse_field(r, 0, "named_entity_dim")?,
                label: r.get(1).unwrap_or_default().to_string(),
                kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut documents = read("document_dim.csv")?
        .iter()
        .map(|r| {
            Ok(Document {
                doc_id: parse_field(r, 0, "document_dim")?,
                raw_text: r.get(1).unwrap_or_default().to_string(),
                clean_text: r.get(2).unwrap_or_default().to_string(),
                lemma_text: r.get(3).unwrap_or_default().to_string(),
                author_id: parse_field(r, 4, "document_dim")?,
                time_id: parse_field(r, 5, "document_dim")?,
                location_id: parse_field(r, 6, "document_dim")?,
                tag_ids: Vec::new(),
                named_entity_ids: Vec::new(),
            })
        })
        .collect::<Result<Vec<Document>>>()?;
    let mut by_doc: std::collections::HashMap<u64, usize> = documents
        .iter()
        .enumerate()
        .map(|(i, d)| (d.doc_id, i))
        .collect();
    for r in read("document_bridge.csv")? {
        let doc_id: u64 = parse_field(&r, 0, "document_bridge")?;
        let pos = *by_doc.get_mut(&doc_id).ok_or_else(|| {
            Error::Integrity(format!("document_bridge references unknown doc_id {doc_id}"))
        })?;
        let ref_id: u32 = parse_field(&r, 2, "document_bridge")?;
        match r.get(1) {
            Some("tag") => documents[pos].tag_ids.push(ref_id),
            Some("named_entity") => documents[pos].named_entity_ids.push(ref_id),
            other => {
                return Err(Error::Integrity(format!(
                    "document_bridge: unknown dim {other:?}"
                )))
            }
        }
    }

    let facts = read("document_facts.csv")?
        .iter()
        .map(|r| {
            Ok(WordFact {
                doc_id: parse_field(r, 0, "document_facts")?,
                word_id: parse_field(r, 1, "document_facts")?,
                f_td: parse_field(r, 2, "document_facts")?,
                tf: parse_field(r, 3, "document_facts")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Corpus::from_parts(
        documents, words, authors, times, locations, tags, entities, facts, tf_floor,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn small_config() -> GeneratorConfig {
        GeneratorConfig {
            sf: 0.001,
            ..GeneratorConfig::default()
        }
    }

    #[test]
    fn document_count_scales_with_sf() {
        let (c, m) = generate(&small_config()).unwrap();
        assert_eq!(c.doc_count(), 1000);
        assert_eq!(m.document_count, 1000);
        let (c2, _) = generate(&GeneratorConfig {
            sf: 0.002,
            ..small_config()
        })
        .unwrap();
        assert_eq!(c2.doc_count(), 2 * c.doc_count());
    }

    #[test]
    fn generation_is_deterministic() {
        let (_, m1) = generate(&small_config()).unwrap();
        let (_, m2) = generate(&small_config()).unwrap();
        assert_eq!(m1.checksum, m2.checksum);
        let (_, m3) = generate(&GeneratorConfig {
            seed: 7,
            ..small_config()
        })
        .unwrap();
        assert_ne!(m1.checksum, m3.checksum);
    }

    #[test]
    fn gender_counts_balanced() {
        let (c, _) = generate(&GeneratorConfig {
            sf: 0.002,
            ..small_config()
        })
        .unwrap();
        let mut counts: HashMap<Gender, u64> = HashMap::new();
        for d in &c.documents {
            *counts
                .entry(c.authors[d.author_id as usize].gender)
                .or_insert(0) += 1;
        }
        assert_eq!(counts[&Gender::Male], 1000);
        assert_eq!(counts[&Gender::Female], 1000);
    }

    #[test]
    fn day_and_quadrant_buckets_balanced() {
        let cfg = small_config();
        let (c, _) = generate(&cfg).unwrap();
        let mut day_counts: HashMap<(i32, u32, u32), u64> = HashMap::new();
        for d in &c.documents {
            let t = &c.times[d.time_id as usize];
            *day_counts.entry((t.year, t.month, t.day)).or_insert(0) += 1;
        }
        let mean = c.doc_count() as f64 / day_counts.len() as f64;
        let allowance = (0.01 * mean).max(1.0);
        for &n in day_counts.values() {
            assert!((n as f64 - mean).abs() <= allowance, "day bucket {n} vs mean {mean}");
        }

        let mid_x = (cfg.x_min + cfg.x_max) / 2.0;
        let mid_y = (cfg.y_min + cfg.y_max) / 2.0;
        let mut quads = [0u64; 4];
        for d in &c.documents {
            let l = &c.locations[d.location_id as usize];
            let q = (l.x >= mid_x) as usize + 2 * (l.y >= mid_y) as usize;
            quads[q] += 1;
        }
        let mean = c.doc_count() as f64 / 4.0;
        for &n in &quads {
            assert!((n as f64 - mean).abs() <= (0.01 * mean).max(1.0));
        }
    }

    #[test]
    fn guaranteed_terms_present_in_enough_documents() {
        let (c, _) = generate(&small_config()).unwrap();
        for term in ["think", "today", "friday"] {
            let wid = c.word_id(term).expect("guaranteed term in vocabulary");
            let n = c.postings(wid).len() as f64;
            assert!(
                n >= 0.001 * c.doc_count() as f64,
                "{term} in only {n} documents"
            );
        }
    }

    #[test]
    fn invalid_sf_rejected() {
        let err = generate(&GeneratorConfig {
            sf: 0.0,
            ..small_config()
        })
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn ingest_recomputes_augmented_tf() {
        let line = r#"{"doc_id":0,"raw_text":"a b a","clean_text":"a b a","lemma_text":"a b a","author":{"gender":"male","age":30,"firstname":"x","lastname":"y"},"time":{"date":"2015-09-17T00:00:00"},"location":{"x":1.0,"y":2.0},"tags":[],"named_entities":[]}"#;
        let corpus =
            ingest_jsonl_reader(line.as_bytes(), TokenizerMode::Pretokenized, 0.5).unwrap();
        assert_eq!(corpus.doc_count(), 1);
        let facts = corpus.facts_for_doc(0);
        let a = corpus.word_id("a").unwrap();
        let b = corpus.word_id("b").unwrap();
        let fa = facts.iter().find(|f| f.word_id == a).unwrap();
        let fb = facts.iter().find(|f| f.word_id == b).unwrap();
        assert_eq!((fa.f_td, fb.f_td), (2, 1));
        assert_eq!(fa.tf, 1.0);
        assert_eq!(fb.tf, 0.75);
    }

    #[test]
    fn ingest_empty_file_gives_empty_corpus() {
        let corpus =
            ingest_jsonl_reader(&b""[..], TokenizerMode::Pretokenized, 0.5).unwrap();
        assert!(corpus.is_empty());
    }

    #[test]
    fn ingest_reports_line_and_missing_field() {
        let line = r#"{"doc_id":0,"raw_text":"a","clean_text":"a","lemma_text":"a","author":{"age":30,"firstname":"x","lastname":"y"},"time":{"date":"2015-09-17T00:00:00"},"location":{"x":1.0,"y":2.0},"tags":[],"named_entities":[]}"#;
        let err = ingest_jsonl_reader(line.as_bytes(), TokenizerMode::Pretokenized, 0.5)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1"), "{msg}");
        assert!(msg.contains("gender"), "{msg}");
    }

    #[test]
    fn ingest_lowercase_mode() {
        let line = r#"{"doc_id":0,"raw_text":"A B","clean_text":"A B","lemma_text":"A B","author":{"gender":"male","age":30,"firstname":"x","lastname":"y"},"time":{"date":"2015-09-17T00:00:00"},"location":{"x":1.0,"y":2.0},"tags":[],"named_entities":[]}"#;
        let corpus =
            ingest_jsonl_reader(line.as_bytes(), TokenizerMode::WhitespaceLower, 0.5).unwrap();
        assert!(corpus.word_id("a").is_some());
        assert!(corpus.word_id("A").is_none());
    }

    #[test]
    fn snowflake_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let (corpus, manifest) = generate(&GeneratorConfig {
            sf: 0.0001,
            ..small_config()
        })
        .unwrap();
        export_snowflake(&corpus, dir.path()).unwrap();
        for name in SNOWFLAKE_FILES {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        let back = import_snowflake(dir.path(), corpus.tf_floor).unwrap();
        assert_eq!(corpus_checksum(&back).unwrap(), manifest.checksum);
    }

    #[test]
    fn snowflake_export_of_empty_corpus_has_headers_only() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = model::from_nested(Vec::new(), 0.5).unwrap();
        export_snowflake(&corpus, dir.path()).unwrap();
        let mut files = 0;
        for name in SNOWFLAKE_FILES {
            let text = fs::read_to_string(dir.path().join(name)).unwrap();
            assert_eq!(text.lines().count(), 1, "{name} should be header only");
            files += 1;
        }
        assert_eq!(files, 9);
    }

    #[test]
    fn corrupted_tf_column_rejected_on_import() {
        let dir = tempfile::tempdir().unwrap();
        let (corpus, _) = generate(&GeneratorConfig {
            sf: 0.00002,
            ..small_config()
        })
        .unwrap();
        export_snowflake(&corpus, dir.path()).unwrap();
        let path = dir.path().join("document_facts.csv");
        let text = fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let mut cols: Vec<String> = lines[1].split(',').map(str::to_string).collect();
        cols[3] = "0.123456".into();
        lines[1] = cols.join(",");
        fs::write(&path, lines.join("\n")).unwrap();
        let err = import_snowflake(dir.path(), corpus.tf_floor).unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
    }

    #[test]
    fn jsonl_roundtrip_preserves_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let (corpus, manifest) = generate(&GeneratorConfig {
            sf: 0.0001,
            ..small_config()
        })
        .unwrap();
        let path = dir.path().join("corpus.jsonl");
        write_jsonl(&corpus, &path).unwrap();
        let back = ingest_jsonl(&path, TokenizerMode::Pretokenized, corpus.tf_floor).unwrap();
        assert_eq!(corpus_checksum(&back).unwrap(), manifest.checksum);
    }
}
