//! Decimal number model that keeps the source lexeme.
//!
//! JSON numbers are stored as the original lexeme plus a normalized decimal
//! form `sign * digits * 10^exponent`. Equality and hashing compare the
//! normalized form, so `1`, `1.0` and `1e0` are the same number while their
//! lexemes stay available for byte-exact re-serialization.

use std::fmt;
use std::hash::{Hash, Hasher};

/// Normalized decimal: `sign * digits * 10^exponent` where `digits` has no
/// leading or trailing zeros (zero itself is `(0, "0", 0)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Decimal {
    sign: i8,
    digits: String,
    exponent: i64,
}

/// A JSON number with its source lexeme preserved.
#[derive(Debug, Clone)]
pub struct JsonNumber {
    lexeme: String,
    normalized: Decimal,
}

impl JsonNumber {
    /// Build from a lexeme already validated against the JSON number grammar.
    ///
    /// Callers outside the parser should prefer [`JsonNumber::parse`].
    pub(crate) fn from_valid_lexeme(lexeme: &str) -> Self {
        let normalized = normalize(lexeme).expect("lexeme validated by parser");
        JsonNumber {
            lexeme: lexeme.to_string(),
            normalized,
        }
    }

    /// Parse a standalone number lexeme (full JSON number grammar, no
    /// surrounding whitespace).
    pub fn parse(lexeme: &str) -> Option<Self> {
        if !is_valid_number_lexeme(lexeme) {
            return None;
        }
        Some(Self::from_valid_lexeme(lexeme))
    }

    /// The source text exactly as it appeared in the document.
    pub fn lexeme(&self) -> &str {
        &self.lexeme
    }

    /// True when the decimal value has no fractional part (e.g. `3`, `3.0`,
    /// `1e2`), which is what the schema kind `integer` accepts.
    pub fn is_integral(&self) -> bool {
        self.normalized.sign == 0 || self.normalized.exponent >= 0
    }

    /// Canonical text for the decimal value, independent of the lexeme:
    /// `1.0`, `1` and `1e0` all render as `1`. Plain notation is used while
    /// the decimal point stays within a fixed window, scientific notation
    /// beyond it, so rendering stays bounded for extreme exponents.
    pub fn canonical_text(&self) -> String {
        let d = &self.normalized;
        if d.sign == 0 {
            return "0".to_string();
        }
        let mut out = String::new();
        if d.sign < 0 {
            out.push('-');
        }
        let ndigits = d.digits.len() as i64;
        // Position of the decimal point counted from the left of `digits`.
        let point = ndigits + d.exponent;
        if point > 21 || point < -5 {
            out.push_str(&d.digits[..1]);
            if d.digits.len() > 1 {
                out.push('.');
                out.push_str(&d.digits[1..]);
            }
            out.push('e');
            out.push_str(&(point - 1).to_string());
        } else if d.exponent >= 0 {
            out.push_str(&d.digits);
            for _ in 0..d.exponent {
                out.push('0');
            }
        } else if point > 0 {
            out.push_str(&d.digits[..point as usize]);
            out.push('.');
            out.push_str(&d.digits[point as usize..]);
        } else {
            out.push_str("0.");
            for _ in 0..(-point) {
                out.push('0');
            }
            out.push_str(&d.digits);
        }
        out
    }
}

impl PartialEq for JsonNumber {
    fn eq(&self, other: &Self) -> bool {
        self.normalized == other.normalized
    }
}

impl Eq for JsonNumber {}

impl Hash for JsonNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.normalized.hash(state);
    }
}

impl fmt::Display for JsonNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lexeme)
    }
}

/// Validate against the RFC 8259 number grammar:
/// `-? (0 | [1-9][0-9]*) (. [0-9]+)? ([eE] [+-]? [0-9]+)?`
fn is_valid_number_lexeme(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && b[i] == b'-' {
        i += 1;
    }
    // integer part
    match b.get(i) {
        Some(b'0') => i += 1,
        Some(c) if c.is_ascii_digit() => {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }
        _ => return false,
    }
    // fraction
    if b.get(i) == Some(&b'.') {
        i += 1;
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return false;
        }
    }
    // exponent
    if matches!(b.get(i), Some(b'e') | Some(b'E')) {
        i += 1;
        if matches!(b.get(i), Some(b'+') | Some(b'-')) {
            i += 1;
        }
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return false;
        }
    }
    i == b.len()
}

fn normalize(lexeme: &str) -> Option<Decimal> {
    let rest = lexeme.strip_prefix('-');
    let negative = rest.is_some();
    let rest = rest.unwrap_or(lexeme);

    let (mantissa_part, exp_part) = match rest.find(['e', 'E']) {
        Some(pos) => (&rest[..pos], Some(&rest[pos + 1..])),
        None => (rest, None),
    };
    let (int_part, frac_part) = match mantissa_part.find('.') {
        Some(pos) => (&mantissa_part[..pos], &mantissa_part[pos + 1..]),
        None => (mantissa_part, ""),
    };

    let explicit_exp: i64 = match exp_part {
        // Exponents beyond i64 are rejected; no realistic document carries them.
        Some(e) => e.trim_start_matches('+').parse().ok()?,
        None => 0,
    };

    let mut digits: String = int_part.chars().chain(frac_part.chars()).collect();
    let mut exponent = explicit_exp.checked_sub(frac_part.len() as i64)?;

    // Strip leading zeros (value unchanged).
    let lead = digits.len() - digits.trim_start_matches('0').len();
    if lead == digits.len() {
        return Some(Decimal {
            sign: 0,
            digits: "0".to_string(),
            exponent: 0,
        });
    }
    digits.drain(..lead);

    // Strip trailing zeros into the exponent.
    let trail = digits.len() - digits.trim_end_matches('0').len();
    digits.truncate(digits.len() - trail);
    exponent = exponent.checked_add(trail as i64)?;

    Some(Decimal {
        sign: if negative { -1 } else { 1 },
        digits,
        exponent,
    })
}
