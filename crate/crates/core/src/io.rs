//! JSON interchange: polyhedron and embedding files.
//!
//! Every number is a string (`"p/q"`, an integer, or a decimal) so exact
//! values survive. Serialization is canonical: fields in alphabetical order,
//! maps keyed by sorted vertex id, two-space indentation and a trailing LF.

use std::collections::BTreeMap;

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, IndefiniteMetricPolyhedron, RawPolyhedron};
use crate::embed::{EmbedError, Embedding, EmbeddingMeta};
use crate::linalg::{LinalgError, MinkVector};
use crate::scalar::{is_rational_literal, Backend, ParseScalarError, Scalar};
use crate::verify::VerificationReport;

pub const POLYHEDRON_FORMAT: &str = "minkembed-polyhedron/1";
pub const EMBEDDING_FORMAT: &str = "minkembed-embedding/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format tag `{found}`, expected `{expected}`")]
    Format { expected: &'static str, found: String },
    #[error("{context}: {source}")]
    Number {
        context: String,
        #[source]
        source: ParseScalarError,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("coordinates of `{vertex}`: {source}")]
    Coordinates {
        vertex: String,
        #[source]
        source: LinalgError,
    },
    #[error("{0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthEntry {
    pub edge: [String; 2],
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub format: String,
    pub maximal_simplices: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_embedding: Option<BTreeMap<String, Vec<String>>>,
    pub squared_lengths: Vec<LengthEntry>,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub assignment: BTreeMap<String, Vec<String>>,
    pub backend: Backend,
    pub d: usize,
    pub format: String,
    pub meta: EmbeddingMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
}

/// Pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

fn parse_number<S: Scalar>(s: &str, context: impl FnOnce() -> String) -> Result<S, IoError> {
    S::parse_str(s).map_err(|source| IoError::Number {
        context: context(),
        source,
    })
}

fn parse_coords<S: Scalar>(id: &str, coords: &[String]) -> Result<MinkVector<S>, IoError> {
    let values = coords
        .iter()
        .enumerate()
        .map(|(i, c)| parse_number(c, || format!("coordinate {i} of `{id}`")))
        .collect::<Result<Vec<S>, _>>()?;
    MinkVector::new(values).map_err(|source| IoError::Coordinates {
        vertex: id.to_string(),
        source,
    })
}

impl PolyhedronFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let file: PolyhedronFile = parse_json(text)?;
        if file.format != POLYHEDRON_FORMAT {
            return Err(IoError::Format {
                expected: POLYHEDRON_FORMAT,
                found: file.format,
            });
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_polyhedron<S: Scalar>(p: &IndefiniteMetricPolyhedron<S>) -> Self {
        let raw = p.to_raw();
        PolyhedronFile {
            d: None,
            format: POLYHEDRON_FORMAT.to_string(),
            maximal_simplices: raw.maximal_simplices,
            partial_embedding: None,
            squared_lengths: raw
                .squared_lengths
                .into_iter()
                .map(|(a, b, g)| LengthEntry {
                    edge: [a, b],
                    value: g.to_canonical(),
                })
                .collect(),
            vertices: raw.vertices,
        }
    }

    pub fn with_partial<S: Scalar>(mut self, partial: &Embedding<S>) -> Self {
        self.d = Some(partial.d());
        self.partial_embedding = Some(
            partial
                .points()
                .map(|(id, v)| (id.clone(), v.coords().iter().map(Scalar::to_canonical).collect()))
                .collect(),
        );
        self
    }

    /// `Rational` when every number in the file is an integer or `p/q`.
    pub fn literal_backend(&self) -> Backend {
        let lengths = self.squared_lengths.iter().map(|e| e.value.as_str());
        let coords = self
            .partial_embedding
            .iter()
            .flat_map(|m| m.values())
            .flatten()
            .map(String::as_str);
        if lengths.chain(coords).all(is_rational_literal) {
            Backend::Rational
        } else {
            Backend::Float
        }
    }

    pub fn raw<S: Scalar>(&self) -> Result<RawPolyhedron<S>, IoError> {
        let squared_lengths = self
            .squared_lengths
            .iter()
            .map(|e| {
                let g = parse_number(&e.value, || format!("length of {}--{}", e.edge[0], e.edge[1]))?;
                Ok((e.edge[0].clone(), e.edge[1].clone(), g))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(RawPolyhedron {
            vertices: self.vertices.clone(),
            maximal_simplices: self.maximal_simplices.clone(),
            squared_lengths,
        })
    }

    pub fn polyhedron<S: Scalar>(&self) -> Result<IndefiniteMetricPolyhedron<S>, IoError> {
        Ok(self.raw()?.build()?)
    }

    /// The partial map, if present. Its dimension is `d` when given, else
    /// inferred from the coordinate vectors.
    pub fn partial<S: Scalar>(&self) -> Result<Option<Embedding<S>>, IoError> {
        let Some(map) = &self.partial_embedding else {
            return Ok(None);
        };
        let d = match (self.d, map.values().next()) {
            (Some(d), _) => d,
            (None, Some(coords)) => coords.len() / 2,
            (None, None) => {
                return Err(IoError::Inconsistent(
                    "empty partial_embedding needs an explicit d".into(),
                ))
            }
        };
        let mut tau = Embedding::new(d);
        for (id, coords) in map {
            let v = parse_coords(id, coords)?;
            tau.insert(id.clone(), v).map_err(|e| match e {
                EmbedError::PartialDimension { expected, found } => IoError::Inconsistent(format!(
                    "partial image of `{id}` has {found} coordinates, expected {expected}"
                )),
                other => IoError::Inconsistent(other.to_string()),
            })?;
        }
        Ok(Some(tau))
    }
}

impl EmbeddingFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let file: EmbeddingFile = parse_json(text)?;
        if file.format != EMBEDDING_FORMAT {
            return Err(IoError::Format {
                expected: EMBEDDING_FORMAT,
                found: file.format,
            });
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_embedding<S: Scalar>(tau: &Embedding<S>, report: Option<VerificationReport>) -> Self {
        EmbeddingFile {
            assignment: tau
                .points()
                .map(|(id, v)| (id.clone(), v.coords().iter().map(Scalar::to_canonical).collect()))
                .collect(),
            backend: S::BACKEND,
            d: tau.d(),
            format: EMBEDDING_FORMAT.to_string(),
            meta: tau.meta.clone(),
            report,
        }
    }

    pub fn embedding<S: Scalar>(&self) -> Result<Embedding<S>, IoError> {
        let mut tau = Embedding::new(self.d);
        for (id, coords) in &self.assignment {
            let v = parse_coords(id, coords)?;
            if v.d() != self.d {
                return Err(IoError::Inconsistent(format!(
                    "image of `{id}` has {} coordinates, expected {}",
                    coords.len(),
                    2 * self.d
                )));
            }
            tau.insert(id.clone(), v).expect("dimension checked");
        }
        tau.meta = self.meta.clone();
        Ok(tau)
    }
}
