//! Strict recursive-descent JSON parser and the opt-in lenient extractor.
//!
//! `parse_strict` accepts exactly the RFC 8259 grammar, requires the whole
//! input to be a single document (modulo surrounding whitespace), and
//! additionally rejects duplicate object keys, since the key-path metrics
//! are undefined under duplicates.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use super::{JsonNumber, JsonValue};

/// Nesting deeper than this is rejected to keep recursion bounded.
const MAX_DEPTH: usize = 128;

/// A parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid JSON at byte {}: {}", self.position, self.reason)
    }
}

impl std::error::Error for ParseError {}

/// No parsable candidate substring was found by [`extract_lenient`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractError;

impl fmt::Display for ExtractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("no parsable JSON object or array found in text")
    }
}

impl std::error::Error for ExtractError {}

/// Result of [`extract_lenient`]: the parsed value and the byte span of the
/// substring it was parsed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    pub value: JsonValue,
    pub span: Range<usize>,
}

/// Parse `text` iff the entire input (modulo leading/trailing whitespace) is
/// one valid JSON document. No prefix extraction, no trailing content.
pub fn parse_strict(text: &str) -> Result<JsonValue, ParseError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        text,
        pos: 0,
        depth: 0,
    };
    parser.skip_whitespace();
    let value = parser.parse_value()?;
    parser.skip_whitespace();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("trailing content after JSON document"));
    }
    Ok(value)
}

/// Find the first maximal balanced `{...}` or `[...]` substring that parses
/// under [`parse_strict`]. Opt-in helper for scoring prose-wrapped outputs;
/// never used for schema accuracy.
pub fn extract_lenient(text: &str) -> Result<Extracted, ExtractError> {
    let bytes = text.as_bytes();
    let mut start = 0;
    while let Some(offset) = bytes[start..]
        .iter()
        .position(|&b| b == b'{' || b == b'[')
    {
        let open = start + offset;
        if let Some(end) = balanced_end(bytes, open) {
            let candidate = &text[open..end];
            if let Ok(value) = parse_strict(candidate) {
                return Ok(Extracted {
                    value,
                    span: open..end,
                });
            }
        }
        start = open + 1;
    }
    Err(ExtractError)
}

/// Scan from an opening bracket to the end of its maximal balanced span,
/// honoring string literals and escapes. Returns the exclusive end offset.
fn balanced_end(bytes: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    let mut i = open;
    while i < bytes.len() {
        let b = bytes[i];
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
        } else {
            match b {
                b'"' => in_string = true,
                b'{' | b'[' => depth += 1,
                b'}' | b']' => {
                    depth = depth.checked_sub(1)?;
                    if depth == 0 {
                        return Some(i + 1);
                    }
                }
                _ => {}
            }
        }
        i += 1;
    }
    None
}

struct Parser<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, reason: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn parse_value(&mut self) -> Result<JsonValue, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'{') => self.parse_object(),
            Some(b'[') => self.parse_array(),
            Some(b'"') => Ok(JsonValue::String(self.parse_string()?)),
            Some(b't') => self.parse_literal("true", JsonValue::Bool(true)),
            Some(b'f') => self.parse_literal("false", JsonValue::Bool(false)),
            Some(b'n') => self.parse_literal("null", JsonValue::Null),
            Some(b'-' | b'0'..=b'9') => self.parse_number(),
            Some(b) => Err(self.error(format!("unexpected character {:?}", b as char))),
        }
    }

    fn parse_literal(&mut self, word: &str, value: JsonValue) -> Result<JsonValue, ParseError> {
        if self.bytes[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            Ok(value)
        } else {
            Err(self.error(format!("invalid literal, expected `{word}`")))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("nesting too deep"));
        }
        Ok(())
    }

    fn parse_object(&mut self) -> Result<JsonValue, ParseError> {
        self.enter()?;
        self.pos += 1; // consume '{'
        let mut entries: Vec<(String, JsonValue)> = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        self.skip_whitespace();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            self.depth -= 1;
            return Ok(JsonValue::Object(entries));
        }
        loop {
            self.skip_whitespace();
            if self.peek() != Some(b'"') {
                return Err(self.error("expected object key"));
            }
            let key_pos = self.pos;
            let key = self.parse_string()?;
            if !seen.insert(key.clone()) {
                return Err(ParseError {
                    position: key_pos,
                    reason: format!("duplicate object key {key:?}"),
                });
            }
            self.skip_whitespace();
            if self.peek() != Some(b':') {
                return Err(self.error("expected `:` after object key"));
            }
            self.pos += 1;
            self.skip_whitespace();
            let value = self.parse_value()?;
            entries.push((key, value));
            self.skip_whitespace();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    self.depth -= 1;
                    return Ok(JsonValue::Object(entries));
                }
                _ => return Err(self.error("expected `,` or `}` in object")),
            }
        }
    }

    fn parse_array(&mut self) -> Result<JsonValue, ParseError> {
        self.enter()?;
        self.pos += 1; // consume '['
        let mut items = Vec::new();
        self.skip_whitespace();
        if self.peek() == Some(b']') {
            self.pos += 1;
            self.depth -= 1;
            return Ok(JsonValue::Array(items));
        }
        loop {
            self.skip_whitespace();
            items.push(self.parse_value()?);
            self.skip_whitespace();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    self.depth -= 1;
                    return Ok(JsonValue::Array(items));
                }
                _ => return Err(self.error("expected `,` or `]` in array")),
            }
        }
    }

    fn parse_string(&mut self) -> Result<String, ParseError> {
        self.pos += 1; // consume opening quote
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated string")),
                Some(b'"') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some(b'\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(b'"') => out.push('"'),
                        Some(b'\\') => out.push('\\'),
                        Some(b'/') => out.push('/'),
                        Some(b'b') => out.push('\u{08}'),
                        Some(b'f') => out.push('\u{0c}'),
                        Some(b'n') => out.push('\n'),
                        Some(b'r') => out.push('\r'),
                        Some(b't') => out.push('\t'),
                        Some(b'u') => {
                            self.pos += 1;
                            let c = self.parse_unicode_escape()?;
                            out.push(c);
                            continue;
                        }
                        _ => return Err(self.error("invalid escape sequence")),
                    }
                    self.pos += 1;
                }
                Some(b) if b < 0x20 => {
                    return Err(self.error("unescaped control character in string"));
                }
                Some(_) => {
                    // Consume one UTF-8 character (input is valid UTF-8).
                    let rest = &self.text[self.pos..];
                    let c = rest.chars().next().expect("non-empty by peek");
                    out.push(c);
                    self.pos += c.len_utf8();
                }
            }
        }
    }

    /// Parse the 4 hex digits after `\u`, combining surrogate pairs.
    /// Called with `pos` at the first hex digit.
    fn parse_unicode_escape(&mut self) -> Result<char, ParseError> {
        let first = self.parse_hex4()?;
        if (0xD800..0xDC00).contains(&first) {
            // Leading surrogate: require `\uXXXX` trailing surrogate.
            if self.bytes.get(self.pos) != Some(&b'\\')
                || self.bytes.get(self.pos + 1) != Some(&b'u')
            {
                return Err(self.error("unpaired surrogate in string escape"));
            }
            self.pos += 2;
            let second = self.parse_hex4()?;
            if !(0xDC00..0xE000).contains(&second) {
                return Err(self.error("invalid trailing surrogate in string escape"));
            }
            let code = 0x10000 + ((first - 0xD800) << 10) + (second - 0xDC00);
            char::from_u32(code).ok_or_else(|| self.error("invalid surrogate pair"))
        } else if (0xDC00..0xE000).contains(&first) {
            Err(self.error("unpaired surrogate in string escape"))
        } else {
            char::from_u32(first).ok_or_else(|| self.error("invalid unicode escape"))
        }
    }

    fn parse_hex4(&mut self) -> Result<u32, ParseError> {
        let mut code = 0u32;
        for _ in 0..4 {
            let digit = match self.peek() {
                Some(b @ b'0'..=b'9') => (b - b'0') as u32,
                Some(b @ b'a'..=b'f') => (b - b'a') as u32 + 10,
                Some(b @ b'A'..=b'F') => (b - b'A') as u32 + 10,
                _ => return Err(self.error("invalid hex digit in unicode escape")),
            };
            code = code * 16 + digit;
            self.pos += 1;
        }
        Ok(code)
    }

    fn parse_number(&mut self) -> Result<JsonValue, ParseError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        // Integer part: `0` or nonzero digit followed by digits.
        match self.peek() {
            Some(b'0') => self.pos += 1,
            Some(b'1'..=b'9') => {
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
            }
            _ => return Err(self.error("invalid number")),
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            if !matches!(self.peek(), Some(b'0'..=b'9')) {
                return Err(self.error("expected digit after decimal point"));
            }
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !matches!(self.peek(), Some(b'0'..=b'9')) {
                return Err(self.error("expected digit in exponent"));
            }
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
        }
        let lexeme = &self.text[start..self.pos];
        match JsonNumber::parse(lexeme) {
            Some(n) => Ok(JsonValue::Number(n)),
            // Exponent overflow of i64 is the only way a grammar-valid
            // lexeme fails normalization.
            None => Err(ParseError {
                position: start,
                reason: "number exponent out of range".to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_document() {
        let v = parse_strict(r#"{"a": 1}"#).unwrap();
        match &v {
            JsonValue::Object(entries) => {
                assert_eq!(entries.len(), 1);
                assert_eq!(entries[0].0, "a");
            }
            other => panic!("expected object, got {other:?}"),
        }
    }

    #[test]
    fn rejects_leading_prose() {
        let err = parse_strict(r#"Here is JSON: {"a":1}"#).unwrap_err();
        assert_eq!(err.position, 0);
    }

    #[test]
    fn rejects_trailing_content() {
        let err = parse_strict(r#"{"a":1} tail"#).unwrap_err();
        assert!(err.reason.contains("trailing"));
    }

    #[test]
    fn allows_surrounding_whitespace() {
        assert!(parse_strict("  \n\t {\"a\": 1} \r\n").is_ok());
    }

    #[test]
    fn rejects_duplicate_keys() {
        let err = parse_strict(r#"{"a": 1, "a": 2}"#).unwrap_err();
        assert!(err.reason.contains("duplicate"));
        // Nested duplicates too.
        assert!(parse_strict(r#"{"o": {"x": 1, "x": 1}}"#).is_err());
        // Same key in sibling objects is fine.
        assert!(parse_strict(r#"{"o": {"x": 1}, "p": {"x": 1}}"#).is_ok());
    }

    #[test]
    fn parses_escapes_and_surrogate_pairs() {
        let v = parse_strict(r#""a\nA😀""#).unwrap();
        assert_eq!(v, JsonValue::String("a\nA😀".to_string()));
    }

    #[test]
    fn rejects_lone_surrogate() {
        assert!(parse_strict(r#""\uD800""#).is_err());
        assert!(parse_strict(r#""\uDC00""#).is_err());
        assert!(parse_strict(r#""\uD800x""#).is_err());
    }

    #[test]
    fn rejects_malformed_numbers() {
        for bad in ["01", "+1", ".5", "5.", "1e", "-"] {
            assert!(parse_strict(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn rejects_control_character_in_string() {
        assert!(parse_strict("\"a\nb\"").is_err());
    }

    #[test]
    fn rejects_deep_nesting() {
        let doc = "[".repeat(200) + &"]".repeat(200);
        assert!(parse_strict(&doc).is_err());
        let ok = "[".repeat(100) + &"]".repeat(100);
        assert!(parse_strict(&ok).is_ok());
    }

    #[test]
    fn parses_e2e_gold_record() {
        let text = r#"{
            "name": "Blue Spice",
            "eatType": "pub",
            "area": "riverside",
            "familyFriendly": "no",
            "near": "Rainbow Vegetarian Cafe"
        }"#;
        let v = parse_strict(text).unwrap();
        match v {
            JsonValue::Object(entries) => assert_eq!(entries.len(), 5),
            other => panic!("expected object, got {other:?}"),
        }
    }

    #[test]
    fn extract_finds_single_candidate() {
        let got = extract_lenient(r#"Output: {"a":1} done"#).unwrap();
        assert_eq!(got.span, 8..15);
        assert!(matches!(got.value, JsonValue::Object(_)));
    }

    #[test]
    fn extract_reports_not_found() {
        assert_eq!(extract_lenient("no json here").unwrap_err(), ExtractError);
    }

    #[test]
    fn extract_skips_unparsable_candidates() {
        // First balanced span `{"a":}` fails, second parses.
        let got = extract_lenient(r#"x {"a":} y {"a":2}"#).unwrap();
        assert_eq!(got.span, 11..18);
        let flat = super::super::flatten(&got.value);
        assert_eq!(flat[0].rendered, "2");
    }

    #[test]
    fn extract_handles_braces_inside_strings() {
        let got = extract_lenient(r#"say {"a": "}{"} end"#).unwrap();
        assert_eq!(&got.value.get("a").unwrap().as_str().unwrap(), &"}{");
    }

    #[test]
    fn extract_finds_arrays() {
        let got = extract_lenient("nums [1, 2] end").unwrap();
        assert!(matches!(got.value, JsonValue::Array(_)));
    }
}
