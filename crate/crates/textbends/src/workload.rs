//! The eight benchmark queries as declarative specs.
//!
//! Q1..Q4 rank keywords, Q'1..Q'4 rank documents. All eight filter by author
//! gender (c1); Q2/Q'2 add a time window (c2), Q3/Q'3 a geo box (c3), Q4/Q'4
//! both; the document queries additionally carry search terms (c4).

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{format_datetime, parse_datetime, Gender};
use crate::weighting::{Scheme, WeightParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QueryId {
    Q1,
    Q2,
    Q3,
    Q4,
    Q1d,
    Q2d,
    Q3d,
    Q4d,
}

impl QueryId {
    pub const ALL: [QueryId; 8] = [
        QueryId::Q1,
        QueryId::Q2,
        QueryId::Q3,
        QueryId::Q4,
        QueryId::Q1d,
        QueryId::Q2d,
        QueryId::Q3d,
        QueryId::Q4d,
    ];

    pub fn task(self) -> Task {
        match self {
            QueryId::Q1 | QueryId::Q2 | QueryId::Q3 | QueryId::Q4 => Task::Keywords,
            _ => Task::Documents,
        }
    }

    pub fn uses_time(self) -> bool {
        matches!(self, QueryId::Q2 | QueryId::Q4 | QueryId::Q2d | QueryId::Q4d)
    }

    pub fn uses_location(self) -> bool {
        matches!(self, QueryId::Q3 | QueryId::Q4 | QueryId::Q3d | QueryId::Q4d)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QueryId::Q1 => "Q1",
            QueryId::Q2 => "Q2",
            QueryId::Q3 => "Q3",
            QueryId::Q4 => "Q4",
            QueryId::Q1d => "Q'1",
            QueryId::Q2d => "Q'2",
            QueryId::Q3d => "Q'3",
            QueryId::Q4d => "Q'4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Keywords,
    Documents,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: NaiveDateTime,
    pub end: NaiveDateTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl GeoBox {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        // closed intervals on both axes
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// The bound filter constraints of one query.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FilterSet {
    /// c1
    pub gender: Option<Gender>,
    /// c2, closed interval
    pub time_window: Option<TimeWindow>,
    /// c3, closed box
    pub geo_box: Option<GeoBox>,
    /// c4
    pub search_terms: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuerySpec {
    pub query_id: QueryId,
    pub task: Task,
    pub scheme: Scheme,
    pub filters: FilterSet,
    pub k: usize,
    pub params: WeightParams,
}

impl QuerySpec {
    pub fn validate(&self) -> Result<()> {
        if self.task != self.query_id.task() {
            return Err(Error::Config(format!(
                "{} is a {:?} query, spec says {:?}",
                self.query_id.as_str(),
                self.query_id.task(),
                self.task
            )));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be positive".into()));
        }
        self.params.validate()?;
        if self.filters.gender.is_none() {
            return Err(Error::Config(format!(
                "{}: missing gender filter (c1)",
                self.query_id.as_str()
            )));
        }
        match &self.filters.time_window {
            Some(w) if self.query_id.uses_time() => {
                if w.start >= w.end {
                    return Err(Error::Config(format!(
                        "{}: time window start must precede end (c2)",
                        self.query_id.as_str()
                    )));
                }
            }
            Some(_) => {
                return Err(Error::Config(format!(
                    "{}: unexpected time window (c2)",
                    self.query_id.as_str()
                )))
            }
            None if self.query_id.uses_time() => {
                return Err(Error::Config(format!(
                    "{}: missing time window (c2)",
                    self.query_id.as_str()
                )))
            }
            None => {}
        }
        match &self.filters.geo_box {
            Some(g) if self.query_id.uses_location() => {
                if g.x_min >= g.x_max || g.y_min >= g.y_max {
                    return Err(Error::Config(format!(
                        "{}: degenerate geo box (c3)",
                        self.query_id.as_str()
                    )));
                }
            }
            Some(_) => {
                return Err(Error::Config(format!(
                    "{}: unexpected geo box (c3)",
                    self.query_id.as_str()
                )))
            }
            None if self.query_id.uses_location() => {
                return Err(Error::Config(format!(
                    "{}: missing geo box (c3)",
                    self.query_id.as_str()
                )))
            }
            None => {}
        }
        match (&self.filters.search_terms, self.task) {
            (Some(terms), Task::Documents) => {
                if terms.is_empty() {
                    return Err(Error::Config(format!(
                        "{}: empty search terms (c4)",
                        self.query_id.as_str()
                    )));
                }
            }
            (Some(_), Task::Keywords) => {
                return Err(Error::Config(format!(
                    "{}: unexpected search terms (c4)",
                    self.query_id.as_str()
                )))
            }
            (None, Task::Documents) => {
                return Err(Error::Config(format!(
                    "{}: missing search terms (c4)",
                    self.query_id.as_str()
                )))
            }
            (None, Task::Keywords) => {}
        }
        Ok(())
    }

    /// Traversal count under the fixed counting model. The main query
    /// and each nested statistics query re-traverse the time and location
    /// dimensions when the query filters on them, so every extra dimension
    /// adds (1 + number of nested queries) traversals; BM25 adds one because
    /// its length query is traversed in the main query too.
    pub fn complexity(&self) -> u32 {
        let (base, per_dim) = match (self.task, self.scheme) {
            (Task::Keywords, Scheme::Tfidf) => (3, 2),
            (Task::Keywords, Scheme::Bm25) => (4, 2),
            (Task::Documents, Scheme::Tfidf) => (5, 3),
            (Task::Documents, Scheme::Bm25) => (6, 3),
        };
        let dims = self.query_id.uses_time() as u32 + self.query_id.uses_location() as u32;
        base + per_dim * dims
    }
}

/// Parameter bindings; the JSON field names are part of the file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamFile {
    #[serde(rename = "pGender")]
    pub genders: Vec<Gender>,
    #[serde(rename = "pStartDate")]
    pub start_date: Option<String>,
    #[serde(rename = "pEndDate")]
    pub end_date: Option<String>,
    #[serde(rename = "pStartX")]
    pub start_x: Option<f64>,
    #[serde(rename = "pEndX")]
    pub end_x: Option<f64>,
    #[serde(rename = "pStartY")]
    pub start_y: Option<f64>,
    #[serde(rename = "pEndY")]
    pub end_y: Option<f64>,
    #[serde(rename = "pWords")]
    pub words: Option<Vec<String>>,
    #[serde(default)]
    pub k: Option<usize>,
}

impl ParamFile {
    /// The built-in reference bindings.
    pub fn reference() -> Self {
        ParamFile {
            genders: vec![Gender::Male, Gender::Female],
            start_date: Some("2015-09-17T00:00:00".into()),
            end_date: Some("2015-09-18T00:00:00".into()),
            start_x: Some(20.0),
            end_x: Some(40.0),
            start_y: Some(-100.0),
            end_y: Some(100.0),
            words: Some(vec!["think".into(), "today".into(), "friday".into()]),
            k: Some(10),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn time_window(&self) -> Result<TimeWindow> {
        let start = self
            .start_date
            .as_deref()
            .ok_or_else(|| Error::Config("missing parameter pStartDate".into()))?;
        let end = self
            .end_date
            .as_deref()
            .ok_or_else(|| Error::Config("missing parameter pEndDate".into()))?;
        Ok(TimeWindow {
            start: parse_datetime(start)?,
            end: parse_datetime(end)?,
        })
    }

    fn geo_box(&self) -> Result<GeoBox> {
        Ok(GeoBox {
            x_min: self
                .start_x
                .ok_or_else(|| Error::Config("missing parameter pStartX".into()))?,
            x_max: self
                .end_x
                .ok_or_else(|| Error::Config("missing parameter pEndX".into()))?,
            y_min: self
                .start_y
                .ok_or_else(|| Error::Config("missing parameter pStartY".into()))?,
            y_max: self
                .end_y
                .ok_or_else(|| Error::Config("missing parameter pEndY".into()))?,
        })
    }
}

/// Bind the full workload: every query shape crossed with the requested
/// schemes and the parameter file's gender values.
pub fn build_workload(
    params_file: &ParamFile,
    schemes: &[Scheme],
    k: usize,
    weight_params: WeightParams,
) -> Result<Vec<QuerySpec>> {
    if params_file.genders.is_empty() {
        return Err(Error::Config("missing parameter pGender".into()));
    }
    let k = params_file.k.unwrap_or(k);
    let mut specs = Vec::new();
    for &query_id in &QueryId::ALL {
        for &scheme in schemes {
            for &gender in &params_file.genders {
                let mut filters = FilterSet {
                    gender: Some(gender),
                    ..FilterSet::default()
                };
                if query_id.uses_time() {
                    filters.time_window = Some(params_file.time_window()?);
                }
                if query_id.uses_location() {
                    filters.geo_box = Some(params_file.geo_box()?);
                }
                if query_id.task() == Task::Documents {
                    let words = params_file
                        .words
                        .clone()
                        .ok_or_else(|| Error::Config("missing parameter pWords".into()))?;
                    if words.is_empty() {
                        return Err(Error::Config("pWords must be non-empty".into()));
                    }
                    filters.search_terms = Some(words);
                }
                let spec = QuerySpec {
                    query_id,
                    task: query_id.task(),
                    scheme,
                    filters,
                    k,
                    params: weight_params,
                };
                spec.validate()?;
                specs.push(spec);
            }
        }
    }
    Ok(specs)
}

/// Stable one-line label for reports and logs.
pub fn spec_label(spec: &QuerySpec) -> String {
    format!(
        "{}/{}/{}",
        spec.query_id.as_str(),
        spec.scheme.as_str(),
        spec.filters
            .gender
            .map(Gender::as_str)
            .unwrap_or("unfiltered"),
    )
}

pub fn describe_window(w: &TimeWindow) -> String {
    format!("[{}, {}]", format_datetime(w.start), format_datetime(w.end))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_workload_has_32_specs() {
        let specs = build_workload(
            &ParamFile::reference(),
            &[Scheme::Tfidf, Scheme::Bm25],
            10,
            WeightParams::default(),
        )
        .unwrap();
        assert_eq!(specs.len(), 32);
        for spec in &specs {
            spec.validate().unwrap();
            if spec.task == Task::Documents {
                assert_eq!(
                    spec.filters.search_terms.as_deref().unwrap(),
                    ["think", "today", "friday"]
                );
            }
        }
    }

    #[test]
    fn single_scheme_single_gender_is_8() {
        let mut p = ParamFile::reference();
        p.genders = vec![Gender::Male];
        let specs = build_workload(&p, &[Scheme::Tfidf], 10, WeightParams::default()).unwrap();
        assert_eq!(specs.len(), 8);
    }

    #[test]
    fn missing_binding_is_named() {
        let mut p = ParamFile::reference();
        p.words = None;
        let err = build_workload(&p, &[Scheme::Tfidf], 10, WeightParams::default()).unwrap_err();
        assert!(err.to_string().contains("pWords"));

        let mut p = ParamFile::reference();
        p.start_date = None;
        let err = build_workload(&p, &[Scheme::Tfidf], 10, WeightParams::default()).unwrap_err();
        assert!(err.to_string().contains("pStartDate"));
    }

    #[test]
    fn validate_names_violated_constraint() {
        let base = build_workload(
            &ParamFile::reference(),
            &[Scheme::Tfidf],
            10,
            WeightParams::default(),
        )
        .unwrap();
        let mut q2 = base
            .iter()
            .find(|s| s.query_id == QueryId::Q2)
            .unwrap()
            .clone();
        q2.filters.time_window = None;
        assert!(q2.validate().unwrap_err().to_string().contains("c2"));

        let mut q1d = base
            .iter()
            .find(|s| s.query_id == QueryId::Q1d)
            .unwrap()
            .clone();
        q1d.filters.search_terms = Some(vec![]);
        assert!(q1d.validate().unwrap_err().to_string().contains("c4"));

        let q4d = base.iter().find(|s| s.query_id == QueryId::Q4d).unwrap();
        q4d.validate().unwrap();
    }

    #[test]
    fn complexity_golden_values() {
        let spec = |query_id: QueryId, scheme: Scheme| {
            let mut s = build_workload(
                &ParamFile::reference(),
                &[scheme],
                10,
                WeightParams::default(),
            )
            .unwrap();
            s.retain(|s| s.query_id == query_id);
            s.remove(0)
        };
        let table = [
            (QueryId::Q1, Scheme::Tfidf, 3),
            (QueryId::Q2, Scheme::Tfidf, 5),
            (QueryId::Q3, Scheme::Tfidf, 5),
            (QueryId::Q4, Scheme::Tfidf, 7),
            (QueryId::Q1, Scheme::Bm25, 4),
            (QueryId::Q2, Scheme::Bm25, 6),
            (QueryId::Q3, Scheme::Bm25, 6),
            (QueryId::Q4, Scheme::Bm25, 8),
            (QueryId::Q1d, Scheme::Tfidf, 5),
            (QueryId::Q2d, Scheme::Tfidf, 8),
            (QueryId::Q3d, Scheme::Tfidf, 8),
            (QueryId::Q4d, Scheme::Tfidf, 11),
            (QueryId::Q1d, Scheme::Bm25, 6),
            (QueryId::Q2d, Scheme::Bm25, 9),
            (QueryId::Q3d, Scheme::Bm25, 9),
            (QueryId::Q4d, Scheme::Bm25, 12),
        ];
        for (qid, scheme, expected) in table {
            assert_eq!(spec(qid, scheme).complexity(), expected, "{qid:?} {scheme:?}");
        }
    }

    #[test]
    fn bm25_complexity_is_tfidf_plus_one() {
        for &qid in &QueryId::ALL {
            let mk = |scheme| QuerySpec {
                query_id: qid,
                task: qid.task(),
                scheme,
                filters: FilterSet::default(),
                k: 10,
                params: WeightParams::default(),
            };
            assert_eq!(mk(Scheme::Bm25).complexity(), mk(Scheme::Tfidf).complexity() + 1);
        }
    }
}
