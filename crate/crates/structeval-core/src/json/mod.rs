//! Canonical JSON value model: strict parsing, leaf flattening by key path,
//! and the reference serializer every metric is pinned to.
//!
//! Values are immutable after construction and all operations here are pure
//! functions, so they can be shared freely across evaluation threads.

mod number;
mod parse;

pub use number::JsonNumber;
pub use parse::{extract_lenient, parse_strict, ExtractError, Extracted, ParseError};

use std::fmt;

use serde::Serialize;

/// A parsed JSON document.
///
/// Objects keep their keys in insertion order and are guaranteed free of
/// duplicates (duplicate keys are a parse error). Numbers keep their source
/// lexeme so serialization is byte-faithful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Number(JsonNumber),
    String(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

impl JsonValue {
    pub fn is_primitive(&self) -> bool {
        !matches!(self, JsonValue::Array(_) | JsonValue::Object(_))
    }

    /// Look up a key in an object; `None` for non-objects or absent keys.
    pub fn get(&self, key: &str) -> Option<&JsonValue> {
        match self {
            JsonValue::Object(entries) => {
                entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
            }
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            JsonValue::String(s) => Some(s),
            _ => None,
        }
    }

    /// Name of the JSON type, used in diagnostics.
    pub fn type_name(&self) -> &'static str {
        match self {
            JsonValue::Null => "null",
            JsonValue::Bool(_) => "boolean",
            JsonValue::Number(_) => "number",
            JsonValue::String(_) => "string",
            JsonValue::Array(_) => "array",
            JsonValue::Object(_) => "object",
        }
    }
}

/// One step from a node to a child: either an object key or an array index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Key(String),
    Index(usize),
}

/// Address of a node as the full chain of ancestor keys and array indices.
/// The empty path denotes the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KeyPath(pub Vec<Segment>);

impl KeyPath {
    pub fn root() -> Self {
        KeyPath(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    fn child_key(&self, key: &str) -> Self {
        let mut segments = self.0.clone();
        segments.push(Segment::Key(key.to_string()));
        KeyPath(segments)
    }

    fn child_index(&self, index: usize) -> Self {
        let mut segments = self.0.clone();
        segments.push(Segment::Index(index));
        KeyPath(segments)
    }
}

impl fmt::Display for KeyPath {
    /// Renders as `$`, `$.a.b`, `$.items[0].id`. Diagnostic form only; keys
    /// containing `.` or `[` are not re-escaped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("$")?;
        for segment in &self.0 {
            match segment {
                Segment::Key(k) => write!(f, ".{k}")?,
                Segment::Index(i) => write!(f, "[{i}]")?,
            }
        }
        Ok(())
    }
}

impl Serialize for KeyPath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A scalar leaf (never an array or object).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarValue {
    Null,
    Bool(bool),
    Number(JsonNumber),
    String(String),
}

/// One scalar leaf of a document together with its full path and the
/// canonical text used for pairwise comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatEntry {
    pub path: KeyPath,
    pub scalar: ScalarValue,
    /// Deterministic text for the scalar: string content verbatim, numbers
    /// as their normalized decimal, booleans as `true`/`false`, null as
    /// `null`. Equal scalars always render identically.
    pub rendered: String,
}

/// Flatten a document into its scalar leaves in depth-first document order.
///
/// Every scalar leaf appears exactly once with its full ancestor path; array
/// elements contribute index segments; empty objects and arrays contribute
/// no entries.
pub fn flatten(value: &JsonValue) -> Vec<FlatEntry> {
    let mut entries = Vec::new();
    flatten_into(value, &KeyPath::root(), &mut entries);
    entries
}

fn flatten_into(value: &JsonValue, path: &KeyPath, out: &mut Vec<FlatEntry>) {
    match value {
        JsonValue::Object(entries) => {
            for (key, child) in entries {
                flatten_into(child, &path.child_key(key), out);
            }
        }
        JsonValue::Array(items) => {
            for (index, child) in items.iter().enumerate() {
                flatten_into(child, &path.child_index(index), out);
            }
        }
        JsonValue::Null => out.push(FlatEntry {
            path: path.clone(),
            scalar: ScalarValue::Null,
            rendered: "null".to_string(),
        }),
        JsonValue::Bool(b) => out.push(FlatEntry {
            path: path.clone(),
            scalar: ScalarValue::Bool(*b),
            rendered: if *b { "true" } else { "false" }.to_string(),
        }),
        JsonValue::Number(n) => out.push(FlatEntry {
            path: path.clone(),
            scalar: ScalarValue::Number(n.clone()),
            rendered: n.canonical_text(),
        }),
        JsonValue::String(s) => out.push(FlatEntry {
            path: path.clone(),
            scalar: ScalarValue::String(s.clone()),
            rendered: s.clone(),
        }),
    }
}

/// Serialize with the reference profile: keys in insertion order, `", "`
/// between elements, `": "` after keys, numbers re-emitted from their
/// preserved lexeme, non-ASCII characters raw (not escaped).
///
/// The byte length of this string is the size complexity dimension, so the
/// separator conventions here are load-bearing and must not change.
pub fn serialize_canonical(value: &JsonValue) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &JsonValue, out: &mut String) {
    match value {
        JsonValue::Null => out.push_str("null"),
        JsonValue::Bool(true) => out.push_str("true"),
        JsonValue::Bool(false) => out.push_str("false"),
        JsonValue::Number(n) => out.push_str(n.lexeme()),
        JsonValue::String(s) => write_string(s, out),
        JsonValue::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(item, out);
            }
            out.push(']');
        }
        JsonValue::Object(entries) => {
            out.push('{');
            for (i, (key, val)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_string(key, out);
                out.push_str(": ");
                write_value(val, out);
            }
            out.push('}');
        }
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\u{08}' => out.push_str("\\b"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\u{0c}' => out.push_str("\\f"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}
