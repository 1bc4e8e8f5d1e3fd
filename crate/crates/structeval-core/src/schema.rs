//! Schema model and conformance checking.
//!
//! The supported keyword subset is exactly `type`, `properties`, `required`,
//! `additionalProperties` and `items`. Other keywords are ignored with a
//! recorded warning. Absent `additionalProperties` means additional keys are
//! NOT allowed: a response must match the schema's key strings exactly, which
//! the permissive default of standard JSON Schema would not enforce.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::json::{parse_strict, JsonValue, KeyPath, Segment};

/// A target schema as a typed tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaNode {
    Object {
        /// Declared keys in declaration order.
        properties: Vec<(String, SchemaNode)>,
        /// Keys that must be present. Always a subset of `properties`.
        required: BTreeSet<String>,
        /// Whether keys outside `properties` are tolerated.
        additional_allowed: bool,
    },
    Array {
        /// Element schema; `None` leaves elements unconstrained.
        items: Option<Box<SchemaNode>>,
    },
    String,
    Number,
    Integer,
    Boolean,
    Null,
}

impl SchemaNode {
    pub fn property(&self, key: &str) -> Option<&SchemaNode> {
        match self {
            SchemaNode::Object { properties, .. } => {
                properties.iter().find(|(k, _)| k == key).map(|(_, v)| v)
            }
            _ => None,
        }
    }
}

/// Schema text could not be interpreted.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SchemaError {
    #[error("schema root must be an object, got {0}")]
    NotAnObject(String),
    #[error("schema at {path} is missing `type`")]
    MissingType { path: KeyPath },
    #[error("schema at {path} has unsupported type {kind:?}")]
    UnsupportedType { path: KeyPath, kind: String },
    #[error("schema at {path}: keyword {keyword:?} is ill-typed: {detail}")]
    IllTypedKeyword {
        path: KeyPath,
        keyword: String,
        detail: String,
    },
    #[error("schema at {path}: required key {key:?} is not declared in properties")]
    RequiredNotDeclared { path: KeyPath, key: String },
}

/// A keyword that was present but not interpreted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaWarning {
    pub path: KeyPath,
    pub keyword: String,
}

/// Output of [`parse_schema`]: the typed tree plus any ignored-keyword
/// warnings collected on the way.
#[derive(Debug, Clone)]
pub struct ParsedSchema {
    pub root: SchemaNode,
    pub warnings: Vec<SchemaWarning>,
}

/// Build a [`SchemaNode`] from a raw schema value (the `json_schema` field
/// of a dataset record).
pub fn parse_schema(raw: &JsonValue) -> Result<ParsedSchema, SchemaError> {
    let mut warnings = Vec::new();
    let root = parse_node(raw, &KeyPath::root(), &mut warnings)?;
    Ok(ParsedSchema { root, warnings })
}

fn parse_node(
    raw: &JsonValue,
    path: &KeyPath,
    warnings: &mut Vec<SchemaWarning>,
) -> Result<SchemaNode, SchemaError> {
    let entries = match raw {
        JsonValue::Object(entries) => entries,
        other => return Err(SchemaError::NotAnObject(other.type_name().to_string())),
    };

    let mut kind: Option<&str> = None;
    let mut properties_raw: Option<&JsonValue> = None;
    let mut required_raw: Option<&JsonValue> = None;
    let mut additional_raw: Option<&JsonValue> = None;
    let mut items_raw: Option<&JsonValue> = None;

    for (keyword, value) in entries {
        match keyword.as_str() {
            "type" => {
                kind = Some(value.as_str().ok_or_else(|| SchemaError::IllTypedKeyword {
                    path: path.clone(),
                    keyword: "type".to_string(),
                    detail: format!("expected string, got {}", value.type_name()),
                })?);
            }
            "properties" => properties_raw = Some(value),
            "required" => required_raw = Some(value),
            "additionalProperties" => additional_raw = Some(value),
            "items" => items_raw = Some(value),
            other => warnings.push(SchemaWarning {
                path: path.clone(),
                keyword: other.to_string(),
            }),
        }
    }

    let kind = kind.ok_or_else(|| SchemaError::MissingType { path: path.clone() })?;
    match kind {
        "object" => {
            let mut properties = Vec::new();
            if let Some(raw_props) = properties_raw {
                let prop_entries = match raw_props {
                    JsonValue::Object(e) => e,
                    other => {
                        return Err(SchemaError::IllTypedKeyword {
                            path: path.clone(),
                            keyword: "properties".to_string(),
                            detail: format!("expected object, got {}", other.type_name()),
                        })
                    }
                };
                for (key, sub) in prop_entries {
                    let mut sub_path = path.clone();
                    sub_path.0.push(Segment::Key(key.clone()));
                    properties.push((key.clone(), parse_node(sub, &sub_path, warnings)?));
                }
            }
            let mut required = BTreeSet::new();
            if let Some(raw_req) = required_raw {
                let items = match raw_req {
                    JsonValue::Array(items) => items,
                    other => {
                        return Err(SchemaError::IllTypedKeyword {
                            path: path.clone(),
                            keyword: "required".to_string(),
                            detail: format!("expected array, got {}", other.type_name()),
                        })
                    }
                };
                for item in items {
                    let key = item.as_str().ok_or_else(|| SchemaError::IllTypedKeyword {
                        path: path.clone(),
                        keyword: "required".to_string(),
                        detail: format!("expected string entries, got {}", item.type_name()),
                    })?;
                    if !properties.iter().any(|(k, _)| k == key) {
                        return Err(SchemaError::RequiredNotDeclared {
                            path: path.clone(),
                            key: key.to_string(),
                        });
                    }
                    required.insert(key.to_string());
                }
            }
            let additional_allowed = match additional_raw {
                None => false,
                Some(JsonValue::Bool(b)) => *b,
                Some(other) => {
                    return Err(SchemaError::IllTypedKeyword {
                        path: path.clone(),
                        keyword: "additionalProperties".to_string(),
                        detail: format!("expected boolean, got {}", other.type_name()),
                    })
                }
            };
            Ok(SchemaNode::Object {
                properties,
                required,
                additional_allowed,
            })
        }
        "array" => {
            let items = match items_raw {
                None => None,
                Some(raw_items) => {
                    let mut sub_path = path.clone();
                    sub_path.0.push(Segment::Key("items".to_string()));
                    Some(Box::new(parse_node(raw_items, &sub_path, warnings)?))
                }
            };
            Ok(SchemaNode::Array { items })
        }
        "string" => Ok(SchemaNode::String),
        "number" => Ok(SchemaNode::Number),
        "integer" => Ok(SchemaNode::Integer),
        "boolean" => Ok(SchemaNode::Boolean),
        "null" => Ok(SchemaNode::Null),
        other => Err(SchemaError::UnsupportedType {
            path: path.clone(),
            kind: other.to_string(),
        }),
    }
}

/// Why a value does not conform at some path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    MissingRequired,
    UnexpectedKey,
    TypeMismatch,
    Unparsable,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationCode::MissingRequired => "MISSING_REQUIRED",
            ViolationCode::UnexpectedKey => "UNEXPECTED_KEY",
            ViolationCode::TypeMismatch => "TYPE_MISMATCH",
            ViolationCode::Unparsable => "UNPARSABLE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: KeyPath,
    pub code: ViolationCode,
    pub detail: String,
}

/// Outcome of a conformance check. `ok` iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConformanceResult {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ConformanceResult {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ConformanceResult {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Check a value against a schema: every required key present, every present
/// key declared (or additional allowed), every value's JSON type matching its
/// declared kind, every array element conforming to `items` when given.
/// Violations are data, not failures.
pub fn conforms(value: &JsonValue, schema: &SchemaNode) -> ConformanceResult {
    let mut violations = Vec::new();
    check_node(value, schema, &KeyPath::root(), &mut violations);
    ConformanceResult::from_violations(violations)
}

fn check_node(
    value: &JsonValue,
    schema: &SchemaNode,
    path: &KeyPath,
    violations: &mut Vec<Violation>,
) {
    match schema {
        SchemaNode::Object {
            properties,
            required,
            additional_allowed,
        } => {
            let entries = match value {
                JsonValue::Object(entries) => entries,
                other => {
                    violations.push(type_mismatch(path, "object", other));
                    return;
                }
            };
            for key in required {
                if !entries.iter().any(|(k, _)| k == key) {
                    let mut key_path = path.clone();
                    key_path.0.push(Segment::Key(key.clone()));
                    violations.push(Violation {
                        path: key_path,
                        code: ViolationCode::MissingRequired,
                        detail: format!("required key {key:?} is absent"),
                    });
                }
            }
            for (key, child) in entries {
                let mut child_path = path.clone();
                child_path.0.push(Segment::Key(key.clone()));
                match properties.iter().find(|(k, _)| k == key) {
                    Some((_, child_schema)) => {
                        check_node(child, child_schema, &child_path, violations)
                    }
                    None if *additional_allowed => {}
                    None => violations.push(Violation {
                        path: child_path,
                        code: ViolationCode::UnexpectedKey,
                        detail: format!("key {key:?} is not declared in the schema"),
                    }),
                }
            }
        }
        SchemaNode::Array { items } => {
            let elements = match value {
                JsonValue::Array(elements) => elements,
                other => {
                    violations.push(type_mismatch(path, "array", other));
                    return;
                }
            };
            if let Some(item_schema) = items {
                for (index, element) in elements.iter().enumerate() {
                    let mut child_path = path.clone();
                    child_path.0.push(Segment::Index(index));
                    check_node(element, item_schema, &child_path, violations);
                }
            }
        }
        SchemaNode::String => {
            if !matches!(value, JsonValue::String(_)) {
                violations.push(type_mismatch(path, "string", value));
            }
        }
        SchemaNode::Number => {
            if !matches!(value, JsonValue::Number(_)) {
                violations.push(type_mismatch(path, "number", value));
            }
        }
        SchemaNode::Integer => match value {
            JsonValue::Number(n) if n.is_integral() => {}
            JsonValue::Number(n) => violations.push(Violation {
                path: path.clone(),
                code: ViolationCode::TypeMismatch,
                detail: format!("expected integer, got non-integral number {}", n.lexeme()),
            }),
            other => violations.push(type_mismatch(path, "integer", other)),
        },
        SchemaNode::Boolean => {
            if !matches!(value, JsonValue::Bool(_)) {
                violations.push(type_mismatch(path, "boolean", value));
            }
        }
        SchemaNode::Null => {
            if !matches!(value, JsonValue::Null) {
                violations.push(type_mismatch(path, "null", value));
            }
        }
    }
}

fn type_mismatch(path: &KeyPath, expected: &str, got: &JsonValue) -> Violation {
    Violation {
        path: path.clone(),
        code: ViolationCode::TypeMismatch,
        detail: format!("expected {expected}, got {}", got.type_name()),
    }
}

/// Schema accuracy of a raw response: the text must be one valid JSON
/// document by itself AND conform to the schema. Parse failures are reported
/// as a single `UNPARSABLE` violation at the root; `.ok` is the accuracy bit.
pub fn schema_accuracy(response_text: &str, schema: &SchemaNode) -> ConformanceResult {
    match parse_strict(response_text) {
        Ok(value) => conforms(&value, schema),
        Err(err) => ConformanceResult::from_violations(vec![Violation {
            path: KeyPath::root(),
            code: ViolationCode::Unparsable,
            detail: err.to_string(),
        }]),
    }
}
