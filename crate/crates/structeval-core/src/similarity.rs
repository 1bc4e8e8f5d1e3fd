//! Content similarity: soft-precision and soft-recall over key-path-matched
//! scalar leaves, combined as their harmonic mean.
//!
//! Leaves are compared as canonical strings through a pluggable
//! [`SimilarityBackend`]. Exact key-path matching (rather than fuzzy key
//! matching) is deliberate: it penalizes values swapped between similar keys,
//! and it weighs every value uniformly regardless of its text length.

use std::collections::HashMap;
use std::sync::{Condvar, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::json::{flatten,serialize_canonical, FlatEntry, JsonValue, KeyPath};
use crate::scalar::Real;
use crate::Score;

/// Failure while obtaining pairwise scores.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SimilarityError {
    #[error("embedding transport error: {0}")]
    Transport(String),
    #[error("malformed embedding response: {0}")]
    MalformedResponse(String),
}

/// Pairwise string similarity in `[0, 1]`.
///
/// All shipped backends are symmetric. The exact and token backends satisfy
/// `score(a, a) = 1`; remote backends are clamped to `[0, 1]`.
pub trait SimilarityBackend<F: Real = Score>: Send + Sync {
    fn name(&self) -> &str;

    fn score(&self, a: &str, b: &str) -> Result<F, SimilarityError>;

    /// Score many pairs at once. Backends with a transport override this to
    /// batch; the default just loops.
    fn score_pairs(&self, pairs: &[(&str, &str)]) -> Result<Vec<F>, SimilarityError> {
        pairs.iter().map(|(a, b)| self.score(a, b)).collect()
    }
}

/// Result of matching two flattened documents by key path.
#[derive(Debug, Clone)]
pub struct PairedLeaves<'a> {
    /// `(gold, pred)` entries whose paths are exactly equal, in gold
    /// document order.
    pub matched: Vec<(&'a FlatEntry, &'a FlatEntry)>,
    pub gold_only: Vec<&'a FlatEntry>,
    pub pred_only: Vec<&'a FlatEntry>,
}

/// Pair leaves whose key paths are exactly equal (all ancestor segments,
/// including array indices). Paths must be unique within each list, which
/// [`flatten`] guarantees.
pub fn pair_leaves<'a>(gold: &'a [FlatEntry], pred: &'a [FlatEntry]) -> PairedLeaves<'a> {
    let pred_by_path: HashMap<&KeyPath, &FlatEntry> =
        pred.iter().map(|entry| (&entry.path, entry)).collect();

    let mut matched = Vec::new();
    let mut gold_only = Vec::new();
    for entry in gold {
        match pred_by_path.get(&entry.path) {
            Some(pred_entry) => matched.push((entry, *pred_entry)),
            None => gold_only.push(entry),
        }
    }
    let gold_paths: HashMap<&KeyPath, ()> =
        gold.iter().map(|entry| (&entry.path, ())).collect();
    let pred_only = pred
        .iter()
        .filter(|entry| !gold_paths.contains_key(&entry.path))
        .collect();

    PairedLeaves {
        matched,
        gold_only,
        pred_only,
    }
}

/// Mean similarity over ALL prediction leaves: matched pairs score
/// `score(pred, gold)`, unmatched prediction leaves score 0. Returns 0 when
/// the prediction has no leaves.
pub fn soft_precision<F: Real>(
    matched: &[(&FlatEntry, &FlatEntry)],
    pred_only: &[&FlatEntry],
    backend: &dyn SimilarityBackend<F>,
) -> Result<F, SimilarityError> {
    let total = matched.len() + pred_only.len();
    if total == 0 {
        return Ok(F::zero());
    }
    let pairs: Vec<(&str, &str)> = matched
        .iter()
        .map(|(gold, pred)| (pred.rendered.as_str(), gold.rendered.as_str()))
        .collect();
    let sum = backend
        .score_pairs(&pairs)?
        .into_iter()
        .fold(F::zero(), |acc, s| acc + s);
    Ok(sum / F::from_count(total))
}

/// Mirror of [`soft_precision`] averaged over all gold leaves: missing keys
/// score 0. Returns 0 when the gold has no leaves.
pub fn soft_recall<F: Real>(
    matched: &[(&FlatEntry, &FlatEntry)],
    gold_only: &[&FlatEntry],
    backend: &dyn SimilarityBackend<F>,
) -> Result<F, SimilarityError> {
    let total = matched.len() + gold_only.len();
    if total == 0 {
        return Ok(F::zero());
    }
    let pairs: Vec<(&str, &str)> = matched
        .iter()
        .map(|(gold, pred)| (gold.rendered.as_str(), pred.rendered.as_str()))
        .collect();
    let sum = backend
        .score_pairs(&pairs)?
        .into_iter()
        .fold(F::zero(), |acc, s| acc + s);
    Ok(sum / F::from_count(total))
}

/// Harmonic mean with the defined zero case.
fn harmonic_mean<F: Real>(p: F, r: F) -> F {
    if (p + r).is_zero() {
        F::zero()
    } else {
        (F::one() + F::one()) * p * r / (p + r)
    }
}

/// Per-instance similarity results. `schema_ok` is filled by the caller that
/// also runs the schema check; similarity alone leaves it `false`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstanceScore<F = Score> {
    pub schema_ok: bool,
    pub sim_p: F,
    pub sim_r: F,
    pub sim_c: F,
    pub matched_pairs: usize,
    pub gold_leaves: usize,
    pub pred_leaves: usize,
}

/// Compute soft-precision, soft-recall and their harmonic mean between two
/// documents.
///
/// When both documents have zero scalar leaves there is nothing to compare
/// and all three scores are 1 (two empty structures agree perfectly). With
/// any leaves present, sim_c is 0 whenever sim_p + sim_r is 0.
pub fn content_similarity<F: Real>(
    gold: &JsonValue,
    pred: &JsonValue,
    backend: &dyn SimilarityBackend<F>,
) -> Result<InstanceScore<F>, SimilarityError> {
    let gold_flat = flatten(gold);
    let pred_flat = flatten(pred);
    let paired = pair_leaves(&gold_flat, &pred_flat);

    if gold_flat.is_empty() && pred_flat.is_empty() {
        return Ok(InstanceScore {
            schema_ok: false,
            sim_p: F::one(),
            sim_r: F::one(),
            sim_c: F::one(),
            matched_pairs: 0,
            gold_leaves: 0,
            pred_leaves: 0,
        });
    }

    let sim_p = soft_precision(&paired.matched, &paired.pred_only, backend)?;
    let sim_r = soft_recall(&paired.matched, &paired.gold_only, backend)?;
    Ok(InstanceScore {
        schema_ok: false,
        sim_p,
        sim_r,
        sim_c: harmonic_mean(sim_p, sim_r),
        matched_pairs: paired.matched.len(),
        gold_leaves: gold_flat.len(),
        pred_leaves: pred_flat.len(),
    })
}

/// Scores 1 iff the two strings are equal after trimming surrounding
/// whitespace. The default backend for hermetic runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactBackend;

impl<F: Real> SimilarityBackend<F> for ExactBackend {
    fn name(&self) -> &str {
        "exact"
    }

    fn score(&self, a: &str, b: &str) -> Result<F, SimilarityError> {
        Ok(if a.trim() == b.trim() {
            F::one()
        } else {
            F::zero()
        })
    }
}

/// Multiset token overlap over lowercased whitespace tokens:
/// `|A ∩ B| / max(|A|, |B|)`. Two empty texts score 1; empty against
/// non-empty scores 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct TokenOverlapBackend;

fn token_counts(text: &str) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for token in text.split_whitespace() {
        *counts.entry(token.to_lowercase()).or_insert(0) += 1;
    }
    counts
}

impl<F: Real> SimilarityBackend<F> for TokenOverlapBackend {
    fn name(&self) -> &str {
        "token"
    }

    fn score(&self, a: &str, b: &str) -> Result<F, SimilarityError> {
        let counts_a = token_counts(a);
        let counts_b = token_counts(b);
        let len_a: usize = counts_a.values().sum();
        let len_b: usize = counts_b.values().sum();
        if len_a == 0 && len_b == 0 {
            return Ok(F::one());
        }
        if len_a == 0 || len_b == 0 {
            return Ok(F::zero());
        }
        let shared: usize = counts_a
            .iter()
            .map(|(token, &count)| count.min(counts_b.get(token).copied().unwrap_or(0)))
            .sum();
        Ok(F::from_count(shared) / F::from_count(len_a.max(len_b)))
    }
}

/// Cosine similarity of two vectors, clamped to `[0, 1]`. A zero vector on
/// either side scores 0.
pub fn cosine_similarity<F: Real>(a: &[F], b: &[F]) -> F {
    let mut dot = F::zero();
    let mut norm_a = F::zero();
    let mut norm_b = F::zero();
    for (&x, &y) in a.iter().zip(b.iter()) {
        dot = dot + x * y;
        norm_a = norm_a + x * x;
        norm_b = norm_b + y * y;
    }
    if norm_a.is_zero() || norm_b.is_zero() {
        return F::zero();
    }
    let cos = dot / (norm_a.sqrt() * norm_b.sqrt());
    cos.max(F::zero()).min(F::one())
}

/// What a remote backend does when the service fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailurePolicy {
    /// Surface the error to the caller.
    Hard,
    /// Score the affected pairs 0 and continue.
    ScoreZero,
}

/// Raw transport for the embedding wire protocol. The backend owns request
/// construction and response validation; implementations only move bytes.
pub trait EmbeddingTransport: Send + Sync {
    /// POST the JSON request body, returning the HTTP status code and the
    /// response body.
    fn post(&self, body: &str) -> Result<(u16, String), SimilarityError>;
}

#[derive(Debug, Clone)]
pub struct RemoteBackendConfig {
    /// Texts per embedding request.
    pub batch_size: usize,
    /// Bound on concurrent requests across all threads using this backend.
    pub max_in_flight: usize,
    pub failure_policy: FailurePolicy,
}

impl Default for RemoteBackendConfig {
    fn default() -> Self {
        RemoteBackendConfig {
            batch_size: 64,
            max_in_flight: 8,
            failure_policy: FailurePolicy::Hard,
        }
    }
}

/// Counting semaphore bounding in-flight requests.
struct InFlightGate {
    available: Mutex<usize>,
    signal: Condvar,
}

impl InFlightGate {
    fn new(permits: usize) -> Self {
        InFlightGate {
            available: Mutex::new(permits.max(1)),
            signal: Condvar::new(),
        }
    }

    fn acquire(&self) {
        let mut available = self.available.lock().unwrap();
        while *available == 0 {
            available = self.signal.wait(available).unwrap();
        }
        *available -= 1;
    }

    fn release(&self) {
        *self.available.lock().unwrap() += 1;
        self.signal.notify_one();
    }
}

/// Backend that scores pairs as the clamped cosine similarity of embedding
/// vectors fetched from a remote service.
///
/// Wire protocol: request `{"texts": ["...", ...]}`, response
/// `{"vectors": [[f, ...], ...]}` with equal outer length. A non-2xx status
/// or a length mismatch is a malformed response.
pub struct RemoteEmbeddingBackend<T> {
    transport: T,
    config: RemoteBackendConfig,
    gate: InFlightGate,
}

impl<T: EmbeddingTransport> RemoteEmbeddingBackend<T> {
    pub fn new(transport: T, config: RemoteBackendConfig) -> Self {
        let gate = InFlightGate::new(config.max_in_flight);
        RemoteEmbeddingBackend {
            transport,
            config,
            gate,
        }
    }

    fn request_body(texts: &[&str]) -> String {
        let value = JsonValue::Object(vec![(
            "texts".to_string(),
            JsonValue::Array(
                texts
                    .iter()
                    .map(|t| JsonValue::String(t.to_string()))
                    .collect(),
            ),
        )]);
        serialize_canonical(&value)
    }

    fn parse_vectors(body: &str, expected: usize) -> Result<Vec<Vec<f64>>, SimilarityError> {
        let parsed = crate::json::parse_strict(body)
            .map_err(|e| SimilarityError::MalformedResponse(e.to_string()))?;
        let vectors = parsed
            .get("vectors")
            .ok_or_else(|| SimilarityError::MalformedResponse("missing `vectors`".to_string()))?;
        let rows = match vectors {
            JsonValue::Array(rows) => rows,
            other => {
                return Err(SimilarityError::MalformedResponse(format!(
                    "`vectors` must be an array, got {}",
                    other.type_name()
                )))
            }
        };
        if rows.len() != expected {
            return Err(SimilarityError::MalformedResponse(format!(
                "requested {expected} embeddings, got {}",
                rows.len()
            )));
        }
        rows.iter()
            .map(|row| match row {
                JsonValue::Array(cells) => cells
                    .iter()
                    .map(|cell| match cell {
                        JsonValue::Number(n) => n.lexeme().parse::<f64>().map_err(|_| {
                            SimilarityError::MalformedResponse(
                                "non-finite embedding component".to_string(),
                            )
                        }),
                        other => Err(SimilarityError::MalformedResponse(format!(
                            "embedding component must be a number, got {}",
                            other.type_name()
                        ))),
                    })
                    .collect(),
                other => Err(SimilarityError::MalformedResponse(format!(
                    "embedding must be an array, got {}",
                    other.type_name()
                ))),
            })
            .collect()
    }

    /// Embed all texts, batching requests at the configured size.
    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, SimilarityError> {
        let mut all = Vec::with_capacity(texts.len());
        for chunk in texts.chunks(self.config.batch_size.max(1)) {
            let body = Self::request_body(chunk);
            self.gate.acquire();
            let result = self.transport.post(&body);
            self.gate.release();
            let (status, response) = result?;
            if !(200..300).contains(&status) {
                return Err(SimilarityError::MalformedResponse(format!(
                    "embedding service returned status {status}"
                )));
            }
            all.extend(Self::parse_vectors(&response, chunk.len())?);
        }
        Ok(all)
    }

    fn score_pairs_inner<F: Real>(
        &self,
        pairs: &[(&str, &str)],
    ) -> Result<Vec<F>, SimilarityError> {
        // Embed each distinct text once.
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut unique: Vec<&str> = Vec::new();
        for &(a, b) in pairs {
            for text in [a, b] {
                index.entry(text).or_insert_with(|| {
                    unique.push(text);
                    unique.len() - 1
                });
            }
        }
        let raw = self.embed(&unique)?;
        let vectors: Vec<Vec<F>> = raw
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| F::from_f64(x).unwrap_or_else(F::zero))
                    .collect()
            })
            .collect();
        Ok(pairs
            .iter()
            .map(|&(a, b)| cosine_similarity(&vectors[index[a]], &vectors[index[b]]))
            .collect())
    }
}

impl<T: EmbeddingTransport, F: Real> SimilarityBackend<F> for RemoteEmbeddingBackend<T> {
    fn name(&self) -> &str {
        "remote-embedding"
    }

    fn score(&self, a: &str, b: &str) -> Result<F, SimilarityError> {
        Ok(self.score_pairs(&[(a, b)])?[0])
    }

    fn score_pairs(&self, pairs: &[(&str, &str)]) -> Result<Vec<F>, SimilarityError> {
        match self.score_pairs_inner(pairs) {
            Ok(scores) => Ok(scores),
            Err(err) => match self.config.failure_policy {
                FailurePolicy::Hard => Err(err),
                FailurePolicy::ScoreZero => Ok(vec![F::zero(); pairs.len()]),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::parse_strict;

    fn score(gold: &str, pred: &str) -> InstanceScore {
        let gold = parse_strict(gold).unwrap();
        let pred = parse_strict(pred).unwrap();
        content_similarity(&gold, &pred, &ExactBackend).unwrap()
    }

    const SWAP_GOLD: &str =
        r#"{"name": "Giraffe", "eatType": "coffee shop", "near": "The Rice Boat"}"#;
    const SWAP_PRED: &str =
        r#"{"name": "The Rice Boat", "eatType": "coffee shop", "near": "Giraffe"}"#;

    #[test]
    fn identical_trees_match_fully() {
        let v = parse_strict(SWAP_GOLD).unwrap();
        let flat = flatten(&v);
        let paired = pair_leaves(&flat, &flat);
        assert_eq!(paired.matched.len(), 3);
        assert!(paired.gold_only.is_empty());
        assert!(paired.pred_only.is_empty());
    }

    #[test]
    fn unmatched_leaves_are_reported_by_side() {
        let gold = parse_strict(r#"{"a": 1, "b": 2}"#).unwrap();
        let pred = parse_strict(r#"{"a": 1}"#).unwrap();
        let gold_flat = flatten(&gold);
        let pred_flat = flatten(&pred);
        let paired = pair_leaves(&gold_flat, &pred_flat);
        assert_eq!(paired.matched.len(), 1);
        assert_eq!(paired.gold_only.len(), 1);
        assert_eq!(paired.gold_only[0].path.to_string(), "$.b");
        assert!(paired.pred_only.is_empty());
    }

    #[test]
    fn swap_case_pairs_all_paths() {
        // Values were swapped between keys; the PATHS all still match.
        let gold = parse_strict(SWAP_GOLD).unwrap();
        let pred = parse_strict(SWAP_PRED).unwrap();
        let gold_flat = flatten(&gold);
        let pred_flat = flatten(&pred);
        let paired = pair_leaves(&gold_flat, &pred_flat);
        assert_eq!(paired.matched.len(), 3);
        assert!(paired.gold_only.is_empty());
        assert!(paired.pred_only.is_empty());
    }

    #[test]
    fn swap_case_scores_one_third() {
        let s = score(SWAP_GOLD, SWAP_PRED);
        assert!((s.sim_p - 1.0 / 3.0).abs() < 1e-12);
        assert!((s.sim_r - 1.0 / 3.0).abs() < 1e-12);
        assert!((s.sim_c - 1.0 / 3.0).abs() < 1e-12);
        // Strictly below the unswapped score.
        let unswapped = score(SWAP_GOLD, SWAP_GOLD);
        assert_eq!(unswapped.sim_c, 1.0);
    }

    #[test]
    fn precision_counts_unmatched_prediction_leaves() {
        // pred has 2 leaves: one exact match, one unmatched -> 0.5.
        let gold = parse_strict(r#"{"a": "x"}"#).unwrap();
        let pred = parse_strict(r#"{"a": "x", "z": "q"}"#).unwrap();
        let s: InstanceScore = content_similarity(&gold, &pred, &ExactBackend).unwrap();
        assert!((s.sim_p - 0.5).abs() < 1e-12);
        assert_eq!(s.sim_r, 1.0);
    }

    #[test]
    fn empty_prediction_scores_zero_precision() {
        let gold = parse_strict(r#"{"a": "x"}"#).unwrap();
        let pred = parse_strict("{}").unwrap();
        let s: InstanceScore = content_similarity(&gold, &pred, &ExactBackend).unwrap();
        assert_eq!(s.sim_p, 0.0);
        assert_eq!(s.sim_r, 0.0);
        assert_eq!(s.sim_c, 0.0);
    }

    #[test]
    fn missing_key_yields_half_recall_two_thirds_combined() {
        let s = score(r#"{"a": "x", "b": "y"}"#, r#"{"a": "x"}"#);
        assert_eq!(s.sim_p, 1.0);
        assert!((s.sim_r - 0.5).abs() < 1e-12);
        assert!((s.sim_c - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn prediction_superset_has_full_recall() {
        let s = score(r#"{"a": "x"}"#, r#"{"a": "x", "b": "y"}"#);
        assert_eq!(s.sim_r, 1.0);
        assert!((s.sim_p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn both_empty_trees_are_perfectly_similar() {
        let s = score("{}", "{}");
        assert_eq!((s.sim_p, s.sim_r, s.sim_c), (1.0, 1.0, 1.0));
        assert_eq!((s.gold_leaves, s.pred_leaves), (0, 0));
    }

    #[test]
    fn identity_scores_one() {
        for doc in [
            r#"{"a": 1, "b": [true, null, "x"], "c": {"d": 2.5}}"#,
            r#"[1, 2, 3]"#,
            r#""just a string""#,
        ] {
            let s = score(doc, doc);
            assert_eq!(s.sim_c, 1.0, "identity must score 1 for {doc}");
        }
    }

    #[test]
    fn number_leaves_compare_by_value_not_lexeme() {
        let s = score(r#"{"n": 1.0}"#, r#"{"n": 1}"#);
        assert_eq!(s.sim_c, 1.0);
    }

    #[test]
    fn exact_backend_trims_whitespace() {
        let backend = ExactBackend;
        let s: Score = backend.score(" pub ", "pub").unwrap();
        assert_eq!(s, 1.0);
        let s: Score = backend.score("pub", "bar").unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn token_overlap_shares_one_of_two() {
        let backend = TokenOverlapBackend;
        let s: Score = backend.score("coffee shop", "coffee house").unwrap();
        assert!((s - 0.5).abs() < 1e-12);
        let s: Score = backend.score("", "").unwrap();
        assert_eq!(s, 1.0);
        let s: Score = backend.score("", "word").unwrap();
        assert_eq!(s, 0.0);
        // Case-insensitive.
        let s: Score = backend.score("Pub", "pub").unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn cosine_clamps_and_handles_zero_vectors() {
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[1.0, 0.0]), 1.0);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[-1.0, 0.0]), 0.0);
        assert_eq!(cosine_similarity(&[0.0, 0.0], &[1.0, 0.0]), 0.0);
        let c = cosine_similarity(&[1.0, 1.0], &[1.0, 0.0]);
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn scores_work_at_f32() {
        let gold = parse_strict(r#"{"a": "x", "b": "y"}"#).unwrap();
        let pred = parse_strict(r#"{"a": "x"}"#).unwrap();
        let s: InstanceScore<f32> = content_similarity(&gold, &pred, &ExactBackend).unwrap();
        assert!((s.sim_c - 2.0 / 3.0).abs() < 1e-6);
    }

    struct ScriptedTransport {
        responses: Mutex<Vec<Result<(u16, String), SimilarityError>>>,
    }

    impl EmbeddingTransport for ScriptedTransport {
        fn post(&self, body: &str) -> Result<(u16, String), SimilarityError> {
            // Count requested texts to build a response of matching length.
            let parsed = parse_strict(body).unwrap();
            let n = match parsed.get("texts") {
                Some(JsonValue::Array(items)) => items.len(),
                _ => panic!("request body must carry texts"),
            };
            let mut responses = self.responses.lock().unwrap();
            if responses.is_empty() {
                // Default script: identical unit vectors for every text.
                let rows = vec!["[1, 0]"; n].join(", ");
                return Ok((200, format!(r#"{{"vectors": [{rows}]}}"#)));
            }
            responses.remove(0)
        }
    }

    fn scripted(responses: Vec<Result<(u16, String), SimilarityError>>) -> ScriptedTransport {
        ScriptedTransport {
            responses: Mutex::new(responses),
        }
    }

    #[test]
    fn remote_identical_texts_score_one() {
        let backend = RemoteEmbeddingBackend::new(scripted(vec![]), RemoteBackendConfig::default());
        let s: Score = backend.score("a", "a").unwrap();
        assert!((s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn remote_length_mismatch_is_malformed() {
        let backend = RemoteEmbeddingBackend::new(
            scripted(vec![Ok((200, r#"{"vectors": [[1, 0]]}"#.to_string()))]),
            RemoteBackendConfig::default(),
        );
        let err = SimilarityBackend::<Score>::score(&backend, "a", "b").unwrap_err();
        assert!(matches!(err, SimilarityError::MalformedResponse(_)));
    }

    #[test]
    fn remote_non_2xx_is_malformed() {
        let backend = RemoteEmbeddingBackend::new(
            scripted(vec![Ok((503, "unavailable".to_string()))]),
            RemoteBackendConfig::default(),
        );
        let err = SimilarityBackend::<Score>::score(&backend, "a", "b").unwrap_err();
        assert!(matches!(err, SimilarityError::MalformedResponse(_)));
    }

    #[test]
    fn score_zero_policy_absorbs_failures() {
        let backend = RemoteEmbeddingBackend::new(
            scripted(vec![Err(SimilarityError::Transport("down".to_string()))]),
            RemoteBackendConfig {
                failure_policy: FailurePolicy::ScoreZero,
                ..RemoteBackendConfig::default()
            },
        );
        let s: Score = backend.score("a", "b").unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn remote_batches_respect_batch_size() {
        // 5 unique texts with batch_size 2 -> 3 requests.
        struct CountingTransport(Mutex<usize>);
        impl EmbeddingTransport for CountingTransport {
            fn post(&self, body: &str) -> Result<(u16, String), SimilarityError> {
                *self.0.lock().unwrap() += 1;
                let parsed = parse_strict(body).unwrap();
                let n = match parsed.get("texts") {
                    Some(JsonValue::Array(items)) => items.len(),
                    _ => 0,
                };
                let rows = vec!["[1, 0]"; n].join(", ");
                Ok((200, format!(r#"{{"vectors": [{rows}]}}"#)))
            }
        }
        let transport = CountingTransport(Mutex::new(0));
        let backend = RemoteEmbeddingBackend::new(
            transport,
            RemoteBackendConfig {
                batch_size: 2,
                ..RemoteBackendConfig::default()
            },
        );
        let pairs = [("a", "b"), ("c", "d"), ("e", "a")];
        let scores: Vec<Score> = backend.score_pairs(&pairs).unwrap();
        assert_eq!(scores.len(), 3);
        assert_eq!(*backend.transport.0.lock().unwrap(), 3);
    }
}
