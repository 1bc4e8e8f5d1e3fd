//! Core metrics for evaluating structured (JSON) model outputs against
//! target schemas.
//!
//! The crate provides four building blocks:
//!
//! - [`json`] — a strict JSON value model with duplicate-key rejection,
//!   lexeme-preserving numbers, key-path flattening and the reference
//!   serializer that pins the byte-size metric.
//! - [`schema`] — the target schema model and exact key/type conformance
//!   (schema accuracy).
//! - [`similarity`] — soft-precision / soft-recall over path-matched scalar
//!   leaves and their harmonic mean (content similarity), with pluggable
//!   string-similarity backends.
//! - [`complexity`] — the seven-dimension complexity profile of a document.
//!
//! The numeric kernels are generic over [`scalar::Real`] (`f32` or `f64`);
//! [`Score`] is the concrete alias everything downstream uses.

pub mod complexity;
pub mod eval;
pub mod json;
pub mod scalar;
pub mod schema;
pub mod similarity;

/// Concrete scalar used by the CLI and pipeline layers.
pub type Score = f64;

/// Complexity profile at the default scalar.
pub type Profile = complexity::ComplexityProfile<Score>;

pub use eval::{score_instance, ContentMode, EvalInstance};
pub use json::{
    extract_lenient, flatten, parse_strict, serialize_canonical, FlatEntry, JsonNumber, JsonValue,
    KeyPath, ParseError, Segment,
};
pub use schema::{
    conforms, parse_schema, schema_accuracy, ConformanceResult, ParsedSchema, SchemaError,
    SchemaNode, Violation, ViolationCode,
};
pub use similarity::{
    content_similarity, pair_leaves, soft_precision, soft_recall, ExactBackend, InstanceScore,
    SimilarityBackend, SimilarityError, TokenOverlapBackend,
};
