//! Seven-dimension complexity profile of a JSON value: depth, key count,
//! byte size, element count, cyclomatic complexity, schema complexity and
//! content complexity.
//!
//! The integer dimensions are exact; the two real-valued dimensions follow
//! fixed piecewise recursions over the tree. All functions are pure.

use serde::Serialize;

use crate::json::{serialize_canonical, JsonValue};
use crate::scalar::Real;
use crate::Score;

/// Substrings whose presence marks a string as code-like for the content
/// complexity structure factor. The pattern `{` + `}` (both present) is
/// checked in addition to this list. Overridable per run; the version tag is
/// echoed into reports so scores stay attributable.
pub const DEFAULT_CODE_PATTERNS: &[&str] = &[
    "def ",
    "class ",
    "import ",
    "return ",
    "Traceback",
    "://",
    "();",
    "=>",
    "</",
];

/// Version tag of [`DEFAULT_CODE_PATTERNS`]. Bump when the list changes.
pub const CODE_PATTERNS_VERSION: &str = "v1";

/// The seven dimensions for one value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityProfile<F = Score> {
    /// Maximum nesting level; 0 for a primitive root.
    pub depth: usize,
    /// Total count of keys at all levels.
    pub keys: usize,
    /// Byte length of the canonical serialization in UTF-8.
    pub size_bytes: usize,
    /// Total count of all values, containers included.
    pub elements: usize,
    /// Structural decision points: object keys plus non-empty arrays.
    pub cyclomatic: usize,
    /// Structure complexity considering types and nesting.
    pub schema_complexity: F,
    /// Data complexity of the actual values.
    pub content_complexity: F,
}

/// Maximum nesting level: primitives are 0, containers are 1 plus the
/// deepest child (1 for an empty container).
pub fn depth(value: &JsonValue) -> usize {
    match value {
        JsonValue::Object(entries) => {
            1 + entries.iter().map(|(_, v)| depth(v)).max().unwrap_or(0)
        }
        JsonValue::Array(items) => 1 + items.iter().map(depth).max().unwrap_or(0),
        _ => 0,
    }
}

/// Total count of keys at all levels.
pub fn count_keys(value: &JsonValue) -> usize {
    match value {
        JsonValue::Object(entries) => {
            entries.len() + entries.iter().map(|(_, v)| count_keys(v)).sum::<usize>()
        }
        JsonValue::Array(items) => items.iter().map(count_keys).sum(),
        _ => 0,
    }
}

/// Byte length of the canonical serialization encoded in UTF-8.
pub fn size_bytes(value: &JsonValue) -> usize {
    serialize_canonical(value).len()
}

/// Total count of all values in the tree; containers count once themselves.
pub fn count_elements(value: &JsonValue) -> usize {
    match value {
        JsonValue::Object(entries) => {
            1 + entries.iter().map(|(_, v)| count_elements(v)).sum::<usize>()
        }
        JsonValue::Array(items) => 1 + items.iter().map(count_elements).sum::<usize>(),
        _ => 1,
    }
}

/// Structural decision points: the sum of every object's key count plus 1
/// per non-empty array.
pub fn cyclomatic(value: &JsonValue) -> usize {
    match value {
        JsonValue::Object(entries) => {
            entries.len() + entries.iter().map(|(_, v)| cyclomatic(v)).sum::<usize>()
        }
        JsonValue::Array(items) => {
            usize::from(!items.is_empty()) + items.iter().map(cyclomatic).sum::<usize>()
        }
        _ => 0,
    }
}

fn same_json_type(a: &JsonValue, b: &JsonValue) -> bool {
    a.type_name() == b.type_name()
}

/// Structure complexity:
/// string -> `1 + min(len, 100)/10`; object -> `1 + #keys + sum over children`;
/// array -> `1 + len +` (first element's complexity when all elements share a
/// JSON type, the sum over elements otherwise); other primitives -> 1.
/// An empty array counts as homogeneous with a zero-complexity first element.
pub fn schema_complexity<F: Real>(value: &JsonValue) -> F {
    let one = F::one();
    match value {
        JsonValue::String(s) => {
            let len = s.chars().count().min(100);
            one + F::from_count(len) / F::from_count(10)
        }
        JsonValue::Object(entries) => {
            let children = entries
                .iter()
                .fold(F::zero(), |acc, (_, v)| acc + schema_complexity(v));
            one + F::from_count(entries.len()) + children
        }
        JsonValue::Array(items) => {
            let homogeneous = items
                .windows(2)
                .all(|pair| same_json_type(&pair[0], &pair[1]));
            let inner = if items.is_empty() {
                F::zero()
            } else if homogeneous {
                schema_complexity(&items[0])
            } else {
                items
                    .iter()
                    .fold(F::zero(), |acc, v| acc + schema_complexity(v))
            };
            one + F::from_count(items.len()) + inner
        }
        _ => one,
    }
}

/// Content complexity with the default code-like pattern list.
pub fn content_complexity<F: Real>(value: &JsonValue) -> F {
    content_complexity_with(value, DEFAULT_CODE_PATTERNS)
}

/// Content complexity:
/// containers sum over children; strings score
/// `lf + ef + sf + tf` (length, entropy, special-character and structure
/// factors); numbers score `min(digits/5, 1)` over the 0-9 characters of
/// their lexeme; booleans and null score 0. An empty string scores 0.
pub fn content_complexity_with<F: Real>(value: &JsonValue, code_patterns: &[&str]) -> F {
    match value {
        JsonValue::Object(entries) => entries.iter().fold(F::zero(), |acc, (_, v)| {
            acc + content_complexity_with(v, code_patterns)
        }),
        JsonValue::Array(items) => items.iter().fold(F::zero(), |acc, v| {
            acc + content_complexity_with(v, code_patterns)
        }),
        JsonValue::String(s) => string_content_complexity(s, code_patterns),
        JsonValue::Number(n) => {
            let digits = n.lexeme().chars().filter(char::is_ascii_digit).count();
            (F::from_count(digits) / F::from_count(5)).min(F::one())
        }
        _ => F::zero(),
    }
}

fn string_content_complexity<F: Real>(s: &str, code_patterns: &[&str]) -> F {
    let len = s.chars().count();
    if len == 0 {
        return F::zero();
    }
    let len_f = F::from_count(len);

    let length_factor = (len_f / F::from_count(20)).min(F::from_count(5));

    let unique: std::collections::HashSet<char> = s.chars().collect();
    let entropy_factor = F::from_count(unique.len()) / len_f * F::from_count(3);

    // "Special" means neither alphanumeric nor the plain space character.
    let special = s
        .chars()
        .filter(|c| !c.is_alphanumeric() && *c != ' ')
        .count();
    let special_factor = (F::from_count(special) / len_f * F::from_count(5)).min(F::from_count(3));

    let code_like = code_patterns.iter().any(|p| s.contains(p))
        || (s.contains('{') && s.contains('}'));
    let structure_factor = if code_like {
        F::from_count(2)
    } else {
        F::zero()
    };

    length_factor + entropy_factor + special_factor + structure_factor
}

/// Compute all seven dimensions at once.
pub fn analyze<F: Real>(value: &JsonValue) -> ComplexityProfile<F> {
    ComplexityProfile {
        depth: depth(value),
        keys: count_keys(value),
        size_bytes: size_bytes(value),
        elements: count_elements(value),
        cyclomatic: cyclomatic(value),
        schema_complexity: schema_complexity(value),
        content_complexity: content_complexity(value),
    }
}
