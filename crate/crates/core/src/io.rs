//! Query input files and the versioned JSON artifacts exchanged between
//! CLI subcommands. Every parser treats its input as untrusted.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ExpoError, Result};
use crate::types::{ExposureVector, FrontPoint, ParetoFront, PbmModel, RankingDistribution, RelevanceVector, WeightedRanking};

pub const SCHEMA_VERSION: u32 = 1;

/// One query: relevance per item, optionally with external item ids.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    pub query_id: String,
    pub relevances: RelevanceVector,
    pub item_ids: Option<Vec<String>>,
}

impl QueryRecord {
    /// Rejects queries with fewer than two items or constant relevance.
    pub fn check_interesting(&self) -> Result<()> {
        if self.relevances.len() < 2 {
            return Err(ExpoError::InvalidInput(format!(
                "query {:?} has {} item(s); at least 2 required",
                self.query_id,
                self.relevances.len()
            )));
        }
        if self.relevances.is_constant() {
            return Err(ExpoError::InvalidInput(format!(
                "query {:?} has all relevances equal",
                self.query_id
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryFormat {
    Csv,
    Jsonl,
}

impl QueryFormat {
    /// `.jsonl`, `.ndjson` and `.json` are JSONL; anything else is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson" | "json") => Self::Jsonl,
            _ => Self::Csv,
        }
    }
}

pub fn parse_queries(text: &str, format: QueryFormat) -> Result<Vec<QueryRecord>> {
    match format {
        QueryFormat::Csv => parse_queries_csv(text),
        QueryFormat::Jsonl => parse_queries_jsonl(text),
    }
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    query_id: String,
    item_id: String,
    relevance: f64,
}

/// CSV with header `query_id,item_id,relevance`, one row per item. Items keep
/// file order within a query; queries are returned in order of first
/// appearance.
pub fn parse_queries_csv(text: &str) -> Result<Vec<QueryRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| csv_error(&e, 1))?.clone();
    for required in ["query_id", "item_id", "relevance"] {
        if !headers.iter().any(|h| h == required) {
            return Err(ExpoError::Parse {
                line: 1,
                message: format!("missing column {required:?}"),
            });
        }
    }
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<(String, Vec<String>, Vec<f64>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: CsvRow = record
            .deserialize(Some(&headers))
            .map_err(|e| ExpoError::Parse { line, message: e.to_string() })?;
        if !(0.0..=1.0).contains(&row.relevance) {
            return Err(ExpoError::Parse {
                line,
                message: format!("relevance {} outside [0, 1]", row.relevance),
            });
        }
        let slot = *index.entry(row.query_id.clone()).or_insert_with(|| {
            groups.push((row.query_id.clone(), Vec::new(), Vec::new()));
            groups.len() - 1
        });
        let (_, items, rels) = &mut groups[slot];
        if items.contains(&row.item_id) {
            return Err(ExpoError::Parse {
                line,
                message: format!("duplicate item {:?} in query {:?}", row.item_id, row.query_id),
            });
        }
        items.push(row.item_id);
        rels.push(row.relevance);
    }
    groups
        .into_iter()
        .map(|(query_id, items, rels)| {
            Ok(QueryRecord {
                query_id,
                relevances: RelevanceVector::new(rels)?,
                item_ids: Some(items),
            })
        })
        .collect()
}

fn csv_error(e: &csv::Error, fallback: usize) -> ExpoError {
    let line = e.position().map_or(fallback, |p| p.line() as usize);
    ExpoError::Parse { line, message: e.to_string() }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonQuery {
    query_id: String,
    relevances: Vec<f64>,
    #[serde(default)]
    item_ids: Option<Vec<String>>,
}

/// One JSON object per line: `{"query_id": ..., "relevances": [...],
/// "item_ids": [...]}` with `item_ids` optional. Blank lines are skipped.
pub fn parse_queries_jsonl(text: &str) -> Result<Vec<QueryRecord>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let q: JsonQuery = serde_json::from_str(raw).map_err(|e| ExpoError::Parse {
            line,
            message: e.to_string(),
        })?;
        if let Some(ids) = &q.item_ids {
            if ids.len() != q.relevances.len() {
                return Err(ExpoError::Parse {
                    line,
                    message: format!("{} item ids for {} relevances", ids.len(), q.relevances.len()),
                });
            }
        }
        let relevances = RelevanceVector::new(q.relevances).map_err(|e| ExpoError::Parse {
            line,
            message: e.to_string(),
        })?;
        out.push(QueryRecord {
            query_id: q.query_id,
            relevances,
            item_ids: q.item_ids,
        });
    }
    Ok(out)
}

/// Position-based exposure model family; `build` instantiates it for `n` items.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ModelSpec {
    /// `gamma_k = 1 / log2(k + 2)`, ranks from 1.
    Dcg,
    /// `gamma_k = 1 / log2(k + 1)`, ranks from 1.
    DcgUnit,
    /// `gamma_k = (1 - p) p^(k - 1)`.
    Rbp { p: f64 },
}

impl ModelSpec {
    pub fn build(&self, n: usize) -> Result<PbmModel> {
        match *self {
            Self::Dcg => PbmModel::dcg(n),
            Self::DcgUnit => PbmModel::dcg_unit(n),
            Self::Rbp { p } => PbmModel::rbp(n, p),
        }
    }
}

/// Query that produced no result, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryFailure {
    pub query_id: String,
    pub skipped: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPointRecord {
    pub exposure: Vec<f64>,
    pub utility: f64,
    pub unfairness: f64,
    pub normalized_unfairness: f64,
    pub ndcg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryFront {
    pub query_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item_ids: Option<Vec<String>>,
    pub relevances: Vec<f64>,
    pub target: Vec<f64>,
    /// Barycenter blend weight used to make the target feasible.
    pub blend: f64,
    pub iterations: usize,
    pub points: Vec<FrontPointRecord>,
}

impl QueryFront {
    pub fn to_front(&self) -> ParetoFront {
        ParetoFront {
            target: ExposureVector::from(self.target.clone()),
            points: self
                .points
                .iter()
                .map(|p| FrontPoint {
                    exposure: ExposureVector::from(p.exposure.clone()),
                    utility: p.utility,
                    unfairness: p.unfairness,
                })
                .collect(),
            iterations: self.iterations,
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.relevances.len();
        let bad = |m: String| Err(ExpoError::InvalidInput(format!("query {:?}: {m}", self.query_id)));
        if n < 2 {
            return bad("fewer than 2 items".into());
        }
        RelevanceVector::new(self.relevances.clone())?;
        if self.target.len() != n {
            return bad(format!("target has {} entries, expected {n}", self.target.len()));
        }
        if self.item_ids.as_ref().is_some_and(|ids| ids.len() != n) {
            return bad("item id count differs from relevance count".into());
        }
        if self.points.is_empty() {
            return bad("front has no points".into());
        }
        for p in &self.points {
            if p.exposure.len() != n {
                return bad(format!("front point has {} entries, expected {n}", p.exposure.len()));
            }
            if !p.exposure.iter().all(|x| x.is_finite()) {
                return bad("non-finite exposure".into());
            }
        }
        Ok(())
    }
}

/// Mean metrics over queries at one scalarization weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub alpha: f64,
    pub mean_ndcg: f64,
    pub mean_normalized_unfairness: f64,
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontFile {
    pub schema_version: u32,
    pub model: ModelSpec,
    pub utility_tol: f64,
    pub queries: Vec<QueryFront>,
    pub failures: Vec<QueryFailure>,
    pub aggregate: Vec<AggregateRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryDistribution {
    pub query_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub item_ids: Option<Vec<String>>,
    /// Exposure that was decomposed.
    pub point: Vec<f64>,
    pub entries: Vec<WeightedRanking>,
    /// Largest coordinate error of the reconstructed expectation.
    pub max_abs_error: f64,
}

impl QueryDistribution {
    pub fn distribution(&self) -> Result<RankingDistribution> {
        let dist = RankingDistribution::new(self.entries.clone())?;
        if dist.item_count() != self.point.len() {
            return Err(ExpoError::DimensionMismatch {
                expected: self.point.len(),
                got: dist.item_count(),
            });
        }
        Ok(dist)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionFile {
    pub schema_version: u32,
    pub model: ModelSpec,
    pub distributions: Vec<QueryDistribution>,
    pub failures: Vec<QueryFailure>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| ExpoError::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

fn check_version(found: u32) -> Result<()> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(ExpoError::InvalidInput(format!(
            "unsupported schema version {found}, expected {SCHEMA_VERSION}"
        )))
    }
}

fn check_model(model: &ModelSpec) -> Result<()> {
    model.build(2).map(|_| ())
}

pub fn parse_front_file(text: &str) -> Result<FrontFile> {
    let file: FrontFile = parse_json(text)?;
    check_version(file.schema_version)?;
    check_model(&file.model)?;
    for q in &file.queries {
        q.check()?;
    }
    Ok(file)
}

pub fn parse_distribution_file(text: &str) -> Result<DistributionFile> {
    let file: DistributionFile = parse_json(text)?;
    check_version(file.schema_version)?;
    check_model(&file.model)?;
    for d in &file.distributions {
        d.distribution()?;
    }
    Ok(file)
}

/// Pretty JSON with a trailing newline. Floats use the shortest
/// representation that parses back to the same value.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| ExpoError::InvalidInput(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}
