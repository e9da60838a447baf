//! JSON query documents: one query per file, optionally with a split.

use std::fmt;
use std::fs;
use std::io::Read;

use serde::{Deserialize, Serialize};
use verlinde::verlinde::VerlindeQuery;
use verlinde::weights::{MarkedPoint, ParabolicData, SplitContext};
use verlinde::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryDocument {
    pub genus: u32,
    pub rank: usize,
    pub degree: i64,
    pub level: i64,
    #[serde(default)]
    pub points: Vec<PointDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDocument {
    pub label: String,
    pub flag: Vec<usize>,
    pub weights: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitDocument {
    pub g1: u32,
    pub g2: u32,
    #[serde(default)]
    pub i1: Vec<String>,
    pub c1: i64,
    pub c2: i64,
}

/// A problem with a document, located by a field path such as
/// `points[0].weights`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentError {
    pub path: String,
    pub message: String,
}

impl DocumentError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub query: VerlindeQuery,
    pub split: Option<SplitContext>,
}

pub fn parse(text: &str) -> Result<QueryDocument, DocumentError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: QueryDocument = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| DocumentError::new(e.path().to_string(), e.inner().to_string()))?;
    de.end().map_err(|e| DocumentError::new("", e.to_string()))?;
    Ok(doc)
}

/// Reads a document from a file, or from stdin when `source` is `-`.
pub fn load(source: &str) -> Result<QueryDocument, DocumentError> {
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| DocumentError::new("", format!("cannot read stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(source).map_err(|e| DocumentError::new("", format!("cannot read {source}: {e}")))?
    };
    parse(&text)
}

fn from_core(e: Error) -> DocumentError {
    match e {
        Error::InvalidData { path, message } => DocumentError::new(path, message),
        other => DocumentError::new("", other.to_string()),
    }
}

impl QueryDocument {
    pub fn resolve(&self) -> Result<Resolved, DocumentError> {
        let points = self
            .points
            .iter()
            .map(|p| MarkedPoint::new(p.label.clone(), p.flag.clone(), p.weights.clone()))
            .collect();
        let omega = ParabolicData::new(self.rank, self.level, points).map_err(from_core)?;
        let split = match &self.split {
            None => None,
            Some(s) => {
                if s.g1.checked_add(s.g2) != Some(self.genus) {
                    return Err(DocumentError::new(
                        "split.g2",
                        format!("g1 + g2 must equal the genus {}", self.genus),
                    ));
                }
                for (i, label) in s.i1.iter().enumerate() {
                    if omega.point(label).is_err() {
                        return Err(DocumentError::new(
                            format!("split.i1[{i}]"),
                            format!("unknown point label `{label}`"),
                        ));
                    }
                }
                let ctx = SplitContext::new(&omega, self.genus, self.degree, s.g1, &s.i1, s.c1, s.c2)
                    .map_err(|e| DocumentError::new("split", e.to_string()))?;
                Some(ctx)
            }
        };
        Ok(Resolved {
            query: VerlindeQuery::new(self.genus, self.degree, omega),
            split,
        })
    }

    pub fn from_query(q: &VerlindeQuery, split: Option<&SplitContext>) -> Self {
        QueryDocument {
            genus: q.genus,
            rank: q.rank(),
            degree: q.degree,
            level: q.level(),
            points: q
                .omega
                .points()
                .iter()
                .map(|p| PointDocument {
                    label: p.label().to_string(),
                    flag: p.flag().to_vec(),
                    weights: p.weights().to_vec(),
                })
                .collect(),
            split: split.map(|c| SplitDocument {
                g1: c.g1,
                g2: c.g2,
                i1: c.i1.clone(),
                c1: c.c1,
                c2: c.c2,
            }),
        }
    }

    pub fn to_compact(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}
