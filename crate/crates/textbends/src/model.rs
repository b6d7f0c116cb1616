//! Snowflake-schema domain types and the nested-document view.
//!
//! A [`Corpus`] is a fact table of word/document co-occurrences plus six
//! normalized dimensions (word, author, time, location, tag, named entity).
//! Everything is immutable after load and safe to share across concurrent
//! query executions. [`to_nested`] / [`from_nested`] convert between the
//! relational layout and the denormalized one-record-per-document layout
//! consumed by the map/reduce executor and the JSONL external format.

use std::collections::HashMap;
use std::ops::Range;

use chrono::{Datelike, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// External document identifier (assigned by the generator or the source file).
pub type DocId = u64;
/// Dense surrogate key into `Corpus::words`.
pub type WordId = u32;
pub type AuthorId = u32;
pub type TimeId = u32;
pub type LocationId = u32;
pub type TagId = u32;
pub type EntityId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
        }
    }
}

impl std::str::FromStr for Gender {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "male" => Ok(Gender::Male),
            "female" => Ok(Gender::Female),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("unknown gender {other:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagKind {
    Hashtag,
    Mention,
    Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Person,
    Location,
    Organization,
    Product,
    Other,
}

/// One row of the fact table: a word occurring in a document.
///
/// `tf` is the augmented term frequency, materialized at load time with the
/// corpus's TF floor K. It is always recomputable from `f_td` and the
/// document's maximum co-occurrence count; the loader verifies the stored
/// value against the recomputed one to 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordFact {
    pub doc_id: DocId,
    pub word_id: WordId,
    pub f_td: u32,
    pub tf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_id: DocId,
    pub raw_text: String,
    pub clean_text: String,
    pub lemma_text: String,
    pub author_id: AuthorId,
    pub time_id: TimeId,
    pub location_id: LocationId,
    pub tag_ids: Vec<TagId>,
    pub named_entity_ids: Vec<EntityId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub word_id: WordId,
    pub lemma: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimePoint {
    pub time_id: TimeId,
    pub full_date: NaiveDateTime,
    pub minute: u32,
    pub hour: u32,
    pub day: u32,
    pub month: u32,
    pub year: i32,
}

impl TimePoint {
    pub fn from_datetime(time_id: TimeId, ts: NaiveDateTime) -> Self {
        TimePoint {
            time_id,
            full_date: ts,
            minute: ts.minute(),
            hour: ts.hour(),
            day: ts.day(),
            month: ts.month(),
            year: ts.year(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Author {
    pub author_id: AuthorId,
    pub gender: Gender,
    pub age: u32,
    pub firstname: String,
    pub lastname: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoLocation {
    pub location_id: LocationId,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tag {
    pub id: TagId,
    pub label: String,
    pub kind: TagKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedEntity {
    pub id: EntityId,
    pub label: String,
    pub kind: EntityKind,
}

/// The loaded snowflake-schema dataset plus derived indexes.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub words: Vec<Word>,
    pub authors: Vec<Author>,
    pub times: Vec<TimePoint>,
    pub locations: Vec<GeoLocation>,
    pub tags: Vec<Tag>,
    pub entities: Vec<NamedEntity>,
    /// Fact rows sorted by (document position, word_id).
    pub facts: Vec<WordFact>,
    /// The augmented-TF floor K used to materialize `WordFact::tf`.
    pub tf_floor: f64,
    doc_fact_ranges: Vec<Range<usize>>,
    doc_pos: HashMap<DocId, usize>,
    lemma_index: HashMap<String, WordId>,
    /// Per word_id: fact-row indexes in ascending document position.
    postings: Vec<Vec<u32>>,
}

impl Corpus {
    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn doc_count(&self) -> usize {
        self.documents.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.words.len()
    }

    /// Fact rows of the document at position `pos`, ascending word_id.
    pub fn facts_for_doc(&self, pos: usize) -> &[WordFact] {
        &self.facts[self.doc_fact_ranges[pos].clone()]
    }

    /// Fact-row indexes for a word, ascending document position.
    pub fn postings(&self, word: WordId) -> &[u32] {
        &self.postings[word as usize]
    }

    pub fn word_id(&self, lemma: &str) -> Option<WordId> {
        self.lemma_index.get(lemma).copied()
    }

    pub fn doc_position(&self, doc_id: DocId) -> Option<usize> {
        self.doc_pos.get(&doc_id).copied()
    }
}

/// Denormalized per-document record mirroring the nested physical layout:
/// every dimension value is reachable without joins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedDocument {
    pub doc_id: DocId,
    pub raw_text: String,
    pub clean_text: String,
    pub lemma_text: String,
    pub author: NestedAuthor,
    pub time: NestedTime,
    pub location: NestedLocation,
    pub tags: Vec<NestedTag>,
    pub named_entities: Vec<NestedEntity>,
    /// Word-fact sub-records. Not part of the external JSONL format:
    /// `lemma_text` is the authoritative token source there, so these are
    /// recomputed on load rather than serialized.
    #[serde(skip)]
    pub word_facts: Vec<NestedWordFact>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedAuthor {
    pub gender: Gender,
    pub age: u32,
    pub firstname: String,
    pub lastname: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedTime {
    /// ISO-8601, second precision.
    pub date: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedLocation {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedTag {
    pub label: String,
    pub kind: TagKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedEntity {
    pub label: String,
    pub kind: EntityKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestedWordFact {
    pub lemma: String,
    pub f_td: u32,
    pub tf: f64,
}

pub const TIME_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

pub fn format_datetime(ts: NaiveDateTime) -> String {
    ts.format(TIME_FORMAT).to_string()
}

/// Accepts both `2015-09-17T00:00:00` and the space-separated variant.
pub fn parse_datetime(s: &str) -> Result<NaiveDateTime> {
    NaiveDateTime::parse_from_str(s, TIME_FORMAT)
        .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S"))
        .map_err(|e| Error::Parse {
            line: 0,
            msg: format!("bad timestamp {s:?}: {e}"),
        })
}

/// Augmented term frequency with floor K, shared by the loader. The scoring
/// kernels in `weighting` carry their own copy with domain checks.
pub(crate) fn augmented_tf(f_td: u32, f_max: u32, k_floor: f64) -> f64 {
    k_floor + (1.0 - k_floor) * f_td as f64 / f_max as f64
}

/// Incrementally assembles a [`Corpus`], interning dimension rows and
/// computing fact rows from token lists.
pub struct CorpusBuilder {
    tf_floor: f64,
    documents: Vec<Document>,
    words: Vec<Word>,
    authors: Vec<Author>,
    times: Vec<TimePoint>,
    locations: Vec<GeoLocation>,
    tags: Vec<Tag>,
    entities: Vec<NamedEntity>,
    facts: Vec<WordFact>,
    doc_fact_ranges: Vec<Range<usize>>,
    doc_pos: HashMap<DocId, usize>,
    lemma_index: HashMap<String, WordId>,
    author_index: HashMap<(Gender, u32, String, String), AuthorId>,
    time_index: HashMap<NaiveDateTime, TimeId>,
    location_index: HashMap<(u64, u64), LocationId>,
    tag_index: HashMap<(String, TagKind), TagId>,
    entity_index: HashMap<(String, EntityKind), EntityId>,
}

pub struct DocumentInput {
    pub doc_id: DocId,
    pub raw_text: String,
    pub clean_text: String,
    pub tokens: Vec<String>,
    pub author: (Gender, u32, String, String),
    pub timestamp: NaiveDateTime,
    pub location: (f64, f64),
    pub tags: Vec<(String, TagKind)>,
    pub entities: Vec<(String, EntityKind)>,
}

impl CorpusBuilder {
    pub fn new(tf_floor: f64) -> Self {
        CorpusBuilder {
            tf_floor,
            documents: Vec::new(),
            words: Vec::new(),
            authors: Vec::new(),
            times: Vec::new(),
            locations: Vec::new(),
            tags: Vec::new(),
            entities: Vec::new(),
            facts: Vec::new(),
            doc_fact_ranges: Vec::new(),
            doc_pos: HashMap::new(),
            lemma_index: HashMap::new(),
            author_index: HashMap::new(),
            time_index: HashMap::new(),
            location_index: HashMap::new(),
            tag_index: HashMap::new(),
            entity_index: HashMap::new(),
        }
    }

    fn intern_word(&mut self, lemma: &str) -> Result<WordId> {
        if lemma.is_empty() {
            return Err(Error::Integrity("empty lemma".into()));
        }
        if let Some(&id) = self.lemma_index.get(lemma) {
            return Ok(id);
        }
        let id = self.words.len() as WordId;
        self.words.push(Word {
            word_id: id,
            lemma: lemma.to_string(),
        });
        self.lemma_index.insert(lemma.to_string(), id);
        Ok(id)
    }

    pub fn add_document(&mut self, input: DocumentInput) -> Result<()> {
        if self.doc_pos.contains_key(&input.doc_id) {
            return Err(Error::Integrity(format!(
                "duplicate doc_id {}",
                input.doc_id
            )));
        }
        if input.tokens.is_empty() {
            return Err(Error::Integrity(format!(
                "document {} has no tokens",
                input.doc_id
            )));
        }

        let (gender, age, first, last) = input.author;
        let author_id = match self
            .author_index
            .get(&(gender, age, first.clone(), last.clone()))
        {
            Some(&id) => id,
            None => {
                let id = self.authors.len() as AuthorId;
                self.authors.push(Author {
                    author_id: id,
                    gender,
                    age,
                    firstname: first.clone(),
                    lastname: last.clone(),
                });
                self.author_index.insert((gender, age, first, last), id);
                id
            }
        };

        let time_id = match self.time_index.get(&input.timestamp) {
            Some(&id) => id,
            None => {
                let id = self.times.len() as TimeId;
                self.times.push(TimePoint::from_datetime(id, input.timestamp));
                self.time_index.insert(input.timestamp, id);
                id
            }
        };

        let (x, y) = input.location;
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Integrity(format!(
                "document {}: non-finite coordinates",
                input.doc_id
            )));
        }
        let loc_key = (x.to_bits(), y.to_bits());
        let location_id = match self.location_index.get(&loc_key) {
            Some(&id) => id,
            None => {
                let id = self.locations.len() as LocationId;
                self.locations.push(GeoLocation {
                    location_id: id,
                    x,
                    y,
                });
                self.location_index.insert(loc_key, id);
                id
            }
        };

        let mut tag_ids = Vec::with_capacity(input.tags.len());
        for (label, kind) in input.tags {
            if label.is_empty() {
                return Err(Error::Integrity("empty tag label".into()));
            }
            let id = match self.tag_index.get(&(label.clone(), kind)) {
                Some(&id) => id,
                None => {
                    let id = self.tags.len() as TagId;
                    self.tags.push(Tag {
                        id,
                        label: label.clone(),
                        kind,
                    });
                    self.tag_index.insert((label, kind), id);
                    id
                }
            };
            tag_ids.push(id);
        }

        let mut named_entity_ids = Vec::with_capacity(input.entities.len());
        for (label, kind) in input.entities {
            if label.is_empty() {
                return Err(Error::Integrity("empty entity label".into()));
            }
            let id = match self.entity_index.get(&(label.clone(), kind)) {
                Some(&id) => id,
                None => {
                    let id = self.entities.len() as EntityId;
                    self.entities.push(NamedEntity {
                        id,
                        label: label.clone(),
                        kind,
                    });
                    self.entity_index.insert((label, kind), id);
                    id
                }
            };
            named_entity_ids.push(id);
        }

        // f_td per word, then augmented TF against the document maximum.
        let mut counts: HashMap<WordId, u32> = HashMap::new();
        for token in &input.tokens {
            let wid = self.intern_word(token)?;
            *counts.entry(wid).or_insert(0) += 1;
        }
        let f_max = *counts.values().max().expect("non-empty token list");
        let mut doc_facts: Vec<WordFact> = counts
            .into_iter()
            .map(|(word_id, f_td)| WordFact {
                doc_id: input.doc_id,
                word_id,
                f_td,
                tf: augmented_tf(f_td, f_max, self.tf_floor),
            })
            .collect();
        doc_facts.sort_by_key(|f| f.word_id);

        let start = self.facts.len();
        self.facts.extend(doc_facts);
        self.doc_fact_ranges.push(start..self.facts.len());

        let pos = self.documents.len();
        self.doc_pos.insert(input.doc_id, pos);
        self.documents.push(Document {
            doc_id: input.doc_id,
            raw_text: input.raw_text,
            clean_text: input.clean_text,
            lemma_text: input.tokens.join(" "),
            author_id,
            time_id,
            location_id,
            tag_ids,
            named_entity_ids,
        });
        Ok(())
    }

    pub fn finish(self) -> Result<Corpus> {
        let mut postings: Vec<Vec<u32>> = vec![Vec::new(); self.words.len()];
        for (idx, fact) in self.facts.iter().enumerate() {
            postings[fact.word_id as usize].push(idx as u32);
        }
        let corpus = Corpus {
            documents: self.documents,
            words: self.words,
            authors: self.authors,
            times: self.times,
            locations: self.locations,
            tags: self.tags,
            entities: self.entities,
            facts: self.facts,
            tf_floor: self.tf_floor,
            doc_fact_ranges: self.doc_fact_ranges,
            doc_pos: self.doc_pos,
            lemma_index: self.lemma_index,
            postings,
        };
        corpus.validate()?;
        Ok(corpus)
    }
}

impl Corpus {
    /// Assemble a corpus from already-keyed rows (the snowflake import path).
    /// Fact rows may arrive in any order; they are re-sorted into the
    /// canonical (document position, word_id) order before index build.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        documents: Vec<Document>,
        words: Vec<Word>,
        authors: Vec<Author>,
        times: Vec<TimePoint>,
        locations: Vec<GeoLocation>,
        tags: Vec<Tag>,
        entities: Vec<NamedEntity>,
        mut facts: Vec<WordFact>,
        tf_floor: f64,
    ) -> Result<Corpus> {
        let mut doc_pos = HashMap::with_capacity(documents.len());
        for (pos, doc) in documents.iter().enumerate() {
            if doc_pos.insert(doc.doc_id, pos).is_some() {
                return Err(Error::Integrity(format!("duplicate doc_id {}", doc.doc_id)));
            }
        }
        for fact in &facts {
            if !doc_pos.contains_key(&fact.doc_id) {
                return Err(Error::Integrity(format!(
                    "fact row references unknown doc_id {}",
                    fact.doc_id
                )));
            }
        }
        facts.sort_by_key(|f| (doc_pos[&f.doc_id], f.word_id));
        let mut doc_fact_ranges = vec![0..0; documents.len()];
        let mut i = 0;
        while i < facts.len() {
            let pos = doc_pos[&facts[i].doc_id];
            let start = i;
            while i < facts.len() && facts[i].doc_id == facts[start].doc_id {
                i += 1;
            }
            doc_fact_ranges[pos] = start..i;
        }
        let mut lemma_index = HashMap::with_capacity(words.len());
        for (idx, w) in words.iter().enumerate() {
            if w.word_id as usize != idx {
                return Err(Error::Integrity(format!(
                    "word_id {} out of place at row {idx}",
                    w.word_id
                )));
            }
            if w.lemma.is_empty() {
                return Err(Error::Integrity(format!("word {idx}: empty lemma", )));
            }
            if lemma_index.insert(w.lemma.clone(), w.word_id).is_some() {
                return Err(Error::Integrity(format!("duplicate lemma {:?}", w.lemma)));
            }
        }
        let mut postings: Vec<Vec<u32>> = vec![Vec::new(); words.len()];
        for (idx, fact) in facts.iter().enumerate() {
            if fact.word_id as usize >= words.len() {
                return Err(Error::Integrity(format!(
                    "fact row references unknown word_id {}",
                    fact.word_id
                )));
            }
            postings[fact.word_id as usize].push(idx as u32);
        }
        let corpus = Corpus {
            documents,
            words,
            authors,
            times,
            locations,
            tags,
            entities,
            facts,
            tf_floor,
            doc_fact_ranges,
            doc_pos,
            lemma_index,
            postings,
        };
        corpus.validate()?;
        Ok(corpus)
    }

    /// Referential-integrity and materialized-TF check; run after every load.
    pub fn validate(&self) -> Result<()> {
        for doc in &self.documents {
            if doc.author_id as usize >= self.authors.len() {
                return Err(Error::Integrity(format!(
                    "document {}: dangling author_id {}",
                    doc.doc_id, doc.author_id
                )));
            }
            if doc.time_id as usize >= self.times.len() {
                return Err(Error::Integrity(format!(
                    "document {}: dangling time_id {}",
                    doc.doc_id, doc.time_id
                )));
            }
            if doc.location_id as usize >= self.locations.len() {
                return Err(Error::Integrity(format!(
                    "document {}: dangling location_id {}",
                    doc.doc_id, doc.location_id
                )));
            }
            for &t in &doc.tag_ids {
                if t as usize >= self.tags.len() {
                    return Err(Error::Integrity(format!(
                        "document {}: dangling tag_id {t}",
                        doc.doc_id
                    )));
                }
            }

            for &e in &doc.named_entity_ids {
                if e as usize >= self.entities.len() {
                    return Err(Error::Integrity(format!(
                        "document {}: dangling named_entity_id {e}",
                        doc.doc_id
                    )));
                }
            }
        }
        for (pos, doc) in self.documents.iter().enumerate() {
            let facts = self.facts_for_doc(pos);
            if facts.is_empty() {
                return Err(Error::Integrity(format!(
                    "document {}: no fact rows",
                    doc.doc_id
                )));
            }
            let f_max = facts.iter().map(|f| f.f_td).max().unwrap();
            for fact in facts {
                if fact.doc_id != doc.doc_id {
                    return Err(Error::Integrity(format!(
                        "fact range of document {} contains doc_id {}",
                        doc.doc_id, fact.doc_id
                    )));
                }
                if fact.f_td == 0 {
                    return Err(Error::Integrity(format!(
                        "document {}: fact row with f_td = 0",
                        doc.doc_id
                    )));
                }
                if fact.word_id as usize >= self.words.len() {
                    return Err(Error::Integrity(format!(
                        "document {}: dangling word_id {}",
                        doc.doc_id, fact.word_id
                    )));
                }
                let expected = augmented_tf(fact.f_td, f_max, self.tf_floor);
                if (fact.tf - expected).abs() > 1e-12 {
                    return Err(Error::Integrity(format!(
                        "document {} word {}: stored tf {} disagrees with recomputed {}",
                        doc.doc_id, fact.word_id, fact.tf, expected
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Denormalize a corpus into one nested record per document.
pub fn to_nested(corpus: &Corpus) -> Result<Vec<NestedDocument>> {
    let mut out = Vec::with_capacity(corpus.documents.len());
    for (pos, doc) in corpus.documents.iter().enumerate() {
        let author = corpus
            .authors
            .get(doc.author_id as usize)
            .ok_or_else(|| {
                Error::Integrity(format!(
                    "document {}: dangling author_id {}",
                    doc.doc_id, doc.author_id
                ))
            })?;
        let time = corpus.times.get(doc.time_id as usize).ok_or_else(|| {
            Error::Integrity(format!(
                "document {}: dangling time_id {}",
                doc.doc_id, doc.time_id
            ))
        })?;
        let location = corpus
            .locations
            .get(doc.location_id as usize)
            .ok_or_else(|| {
                Error::Integrity(format!(
                    "document {}: dangling location_id {}",
                    doc.doc_id, doc.location_id
                ))
            })?;
        let tags = doc
            .tag_ids
            .iter()
            .map(|&t| {
                corpus
                    .tags
                    .get(t as usize)
                    .map(|tag| NestedTag {
                        label: tag.label.clone(),
                        kind: tag.kind,
                    })
                    .ok_or_else(|| {
                        Error::Integrity(format!(
                            "document {}: dangling tag_id {t}",
                            doc.doc_id
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let named_entities = doc
            .named_entity_ids
            .iter()
            .map(|&e| {
                corpus
                    .entities
                    .get(e as usize)
                    .map(|ent| NestedEntity {
                        label: ent.label.clone(),
                        kind: ent.kind,
                    })
                    .ok_or_else(|| {
                        Error::Integrity(format!(
                            "document {}: dangling named_entity_id {e}",
                            doc.doc_id
                        ))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let word_facts = corpus
            .facts_for_doc(pos)
            .iter()
            .map(|f| NestedWordFact {
                lemma: corpus.words[f.word_id as usize].lemma.clone(),
                f_td: f.f_td,
                tf: f.tf,
            })
            .collect();
        out.push(NestedDocument {
            doc_id: doc.doc_id,
            raw_text: doc.raw_text.clone(),
            clean_text: doc.clean_text.clone(),
            lemma_text: doc.lemma_text.clone(),
            author: NestedAuthor {
                gender: author.gender,
                age: author.age,
                firstname: author.firstname.clone(),
                lastname: author.lastname.clone(),
            },
            time: NestedTime {
                date: format_datetime(time.full_date),
            },
            location: NestedLocation {
                x: location.x,
                y: location.y,
            },
            tags,
            named_entities,
            word_facts,
        });
    }
    Ok(out)
}

/// Rebuild a corpus from nested records. `lemma_text` is the authoritative
/// token source; fact rows and augmented TF are recomputed with `tf_floor`.
pub fn from_nested<I>(records: I, tf_floor: f64) -> Result<Corpus>
where
    I: IntoIterator<Item = NestedDocument>,
{
    let mut builder = CorpusBuilder::new(tf_floor);
    for rec in records {
        let timestamp = parse_datetime(&rec.time.date)?;
        let tokens: Vec<String> = rec
            .lemma_text
            .split_whitespace()
            .map(str::to_string)
            .collect();
        builder.add_document(DocumentInput {
            doc_id: rec.doc_id,
            raw_text: rec.raw_text,
            clean_text: rec.clean_text,
            tokens,
            author: (
                rec.author.gender,
                rec.author.age,
                rec.author.firstname,
                rec.author.lastname,
            ),
            timestamp,
            location: (rec.location.x, rec.location.y),
            tags: rec.tags.into_iter().map(|t| (t.label, t.kind)).collect(),
            entities: rec
                .named_entities
                .into_iter()
                .map(|e| (e.label, e.kind))
                .collect(),
        })?;
    }
    builder.finish()
}
