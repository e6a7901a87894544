//! The JSON model document.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "fiber": {
//!     "components": [{"id": "A", "name": "A", "multiplicity": 1}, ...],
//!     "strata": [{"id": "e1", "components": ["A", "B"], "parents": {"A": "B", "B": "A"}}, ...]
//!   },
//!   "forms": [{"name": "omega", "degree": 1, "vertical_mults": {"A": 0, "B": 0}}],
//!   "deltas": {"crepant": {"A": "1", "B": "1/2"}},
//!   "metadata": {}
//! }
//! ```
//!
//! Rationals are written as `"p/q"` strings; integers (JSON numbers or
//! strings) are accepted on input.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use skeleta::rational::{format_rational, parse_rational};
use skeleta::{
    validate_fiber, ComponentId, DeltaAssignment, PluricanonicalForm, Rational, StratifiedFiber,
    ValidationReport,
};
use thiserror::Error;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDocument {
    pub schema_version: String,
    pub fiber: StratifiedFiber,
    pub forms: Vec<PluricanonicalForm>,
    pub deltas: BTreeMap<String, DeltaAssignment>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct RationalText(Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalText;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<RationalText, E> {
                parse_rational(v).map(RationalText).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<RationalText, E> {
                Ok(RationalText(skeleta::rational::int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<RationalText, E> {
                i64::try_from(v)
                    .map(|v| RationalText(skeleta::rational::int(v)))
                    .map_err(|_| E::custom("integer out of range"))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema_version: String,
    fiber: StratifiedFiber,
    #[serde(default)]
    forms: Vec<PluricanonicalForm>,
    #[serde(default)]
    deltas: BTreeMap<String, BTreeMap<ComponentId, RationalText>>,
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema_version `{0}` (expected `{SCHEMA_VERSION}`)")]
    SchemaVersion(String),
    #[error("invalid fiber:\n{0}")]
    InvalidFiber(ValidationReport),
    #[error("form `{form}` has no multiplicity for component `{component}`")]
    IncompleteForm { form: String, component: ComponentId },
    #[error("form `{0}` has degree 0")]
    ZeroDegree(String),
    #[error("{owner} refers to unknown component `{component}`")]
    UnknownComponent { owner: String, component: ComponentId },
    #[error("form name `{0}` is used more than once")]
    DuplicateForm(String),
}

impl DocumentError {
    pub fn code(&self) -> &'static str {
        match self {
            DocumentError::Io { .. } => "io",
            DocumentError::Syntax { .. } => "syntax",
            DocumentError::SchemaVersion(_) => "schema-version",
            DocumentError::InvalidFiber(_) => "invalid-fiber",
            DocumentError::IncompleteForm { .. } => "incomplete-form",
            DocumentError::ZeroDegree(_) => "zero-degree",
            DocumentError::UnknownComponent { .. } => "unknown-component",
            DocumentError::DuplicateForm(_) => "duplicate-form",
        }
    }
}

/// Parses JSON and checks the schema version, without semantic validation.
pub fn parse_model_unchecked(bytes: &[u8]) -> Result<ModelDocument, DocumentError> {
    let raw: RawDocument = serde_json::from_slice(bytes).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(DocumentError::SchemaVersion(raw.schema_version));
    }
    Ok(ModelDocument {
        schema_version: raw.schema_version,
        fiber: raw.fiber,
        forms: raw.forms,
        deltas: raw
            .deltas
            .into_iter()
            .map(|(name, m)| {
                let mults = m.into_iter().map(|(c, r)| (c, r.0)).collect();
                (name, DeltaAssignment { mults })
            })
            .collect(),
        metadata: raw.metadata,
    })
}

/// Parses and validates a document: fiber invariants, form totality and
/// that every component reference resolves. Delta values are not checked
/// against the dlt bound here.
pub fn parse_model(bytes: &[u8]) -> Result<ModelDocument, DocumentError> {
    let doc = parse_model_unchecked(bytes)?;
    doc.check()?;
    Ok(doc)
}

pub fn read_model(path: &Path) -> Result<ModelDocument, DocumentError> {
    let bytes = std::fs::read(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&bytes)
}

impl ModelDocument {
    pub fn new(fiber: StratifiedFiber, forms: Vec<PluricanonicalForm>) -> Self {
        ModelDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            fiber,
            forms,
            deltas: BTreeMap::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn check(&self) -> Result<(), DocumentError> {
        let report = validate_fiber(&self.fiber);
        if !report.is_valid() {
            return Err(DocumentError::InvalidFiber(report));
        }
        let mut names = std::collections::BTreeSet::new();
        for form in &self.forms {
            if !names.insert(&form.name) {
                return Err(DocumentError::DuplicateForm(form.name.clone()));
            }
            if form.degree == 0 {
                return Err(DocumentError::ZeroDegree(form.name.clone()));
            }
            for c in &self.fiber.components {
                if !form.vertical_mults.contains_key(&c.id) {
                    return Err(DocumentError::IncompleteForm {
                        form: form.name.clone(),
                        component: c.id.clone(),
                    });
                }
            }
            for c in form.vertical_mults.keys() {
                if self.fiber.component(c).is_none() {
                    return Err(DocumentError::UnknownComponent {
                        owner: format!("form `{}`", form.name),
                        component: c.clone(),
                    });
                }
            }
        }
        for (name, delta) in &self.deltas {
            for c in delta.mults.keys() {
                if self.fiber.component(c).is_none() {
                    return Err(DocumentError::UnknownComponent {
                        owner: format!("delta `{name}`"),
                        component: c.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn raw(&self) -> RawDocument {
        RawDocument {
            schema_version: self.schema_version.clone(),
            fiber: self.fiber.clone(),
            forms: self.forms.clone(),
            deltas: self
                .deltas
                .iter()
                .map(|(name, d)| {
                    let m = d
                        .mults
                        .iter()
                        .map(|(c, r)| (c.clone(), RationalText(r.clone())))
                        .collect();
                    (name.clone(), m)
                })
                .collect(),
            metadata: self.metadata.clone(),
        }
    }

    /// Pretty canonical JSON, newline terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.raw()).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.raw()).expect("document serializes")
    }

    /// SHA-256 of the compact canonical serialization, hex encoded.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(&self.raw()).expect("document serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn form(&self, name: &str) -> Option<&PluricanonicalForm> {
        self.forms.iter().find(|f| f.name == name)
    }
}
