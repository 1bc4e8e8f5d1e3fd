//! Per-instance evaluation: schema accuracy of the raw response text plus
//! content similarity of its parsed payload against the gold document.

use serde::Serialize;

use crate::json::{extract_lenient, parse_strict, flatten, JsonValue};
use crate::schema::{schema_accuracy, ConformanceResult, SchemaNode};
use crate::scalar::Real;
use crate::similarity::{content_similarity, InstanceScore, SimilarityBackend, SimilarityError};

/// How the prediction text is turned into a tree for content scoring.
/// Schema accuracy always judges the raw text strictly, regardless of mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentMode {
    /// The whole response must be one valid JSON document.
    Strict,
    /// Score the first parsable balanced span inside the response.
    Lenient,
}

/// One evaluation case: a record joined with a raw model response.
#[derive(Debug, Clone)]
pub struct EvalInstance {
    pub id: String,
    pub input_text: String,
    pub schema: SchemaNode,
    pub gold: JsonValue,
    pub prediction_text: String,
}

/// Score one instance. The returned [`InstanceScore`] has `schema_ok` filled
/// in; the conformance result carries the violation diagnostics.
///
/// A prediction that yields no tree at all (unparsable in strict mode, no
/// candidate span in lenient mode) scores 0 on all similarity components.
pub fn score_instance<F: Real>(
    instance: &EvalInstance,
    backend: &dyn SimilarityBackend<F>,
    mode: ContentMode,
) -> Result<(InstanceScore<F>, ConformanceResult), SimilarityError> {
    let conformance = schema_accuracy(&instance.prediction_text, &instance.schema);

    let pred_tree = match mode {
        ContentMode::Strict => parse_strict(&instance.prediction_text).ok(),
        ContentMode::Lenient => extract_lenient(&instance.prediction_text)
            .ok()
            .map(|extracted| extracted.value),
    };

    let mut score = match pred_tree {
        Some(pred) => content_similarity(&instance.gold, &pred, backend)?,
        None => InstanceScore {
            schema_ok: false,
            sim_p: F::zero(),
            sim_r: F::zero(),
            sim_c: F::zero(),
            matched_pairs: 0,
            gold_leaves: flatten(&instance.gold).len(),
            pred_leaves: 0,
        },
    };
    score.schema_ok = conformance.ok;
    Ok((score, conformance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::serialize_canonical;
    use crate::schema::parse_schema;
    use crate::similarity::ExactBackend;
    use crate::Score;

    fn instance(prediction: &str) -> EvalInstance {
        let gold = parse_strict(r#"{"name": "Blue Spice", "eatType": "pub"}"#).unwrap();
        let schema_raw = parse_strict(
            r#"{"type":"object","properties":{"name":{"type":"string"},"eatType":{"type":"string"}},"required":["name","eatType"]}"#,
        )
        .unwrap();
        EvalInstance {
            id: "1".to_string(),
            input_text: "The Blue Spice is a pub.".to_string(),
            schema: parse_schema(&schema_raw).unwrap().root,
            gold,
            prediction_text: prediction.to_string(),
        }
    }

    #[test]
    fn exact_prediction_scores_perfectly() {
        let inst = instance(r#"{"name": "Blue Spice", "eatType": "pub"}"#);
        let (score, conformance) =
            score_instance::<Score>(&inst, &ExactBackend, ContentMode::Strict).unwrap();
        assert!(score.schema_ok);
        assert!(conformance.ok);
        assert_eq!(score.sim_c, 1.0);
    }

    #[test]
    fn unparsable_prediction_scores_zero() {
        let inst = instance("the name is Blue Spice");
        let (score, conformance) =
            score_instance::<Score>(&inst, &ExactBackend, ContentMode::Strict).unwrap();
        assert!(!score.schema_ok);
        assert!(!conformance.ok);
        assert_eq!((score.sim_p, score.sim_r, score.sim_c), (0.0, 0.0, 0.0));
        assert_eq!(score.gold_leaves, 2);
        assert_eq!(score.pred_leaves, 0);
    }

    #[test]
    fn lenient_mode_scores_wrapped_content_but_not_schema() {
        let wrapped = format!(
            "Sure, here you go: {}",
            serialize_canonical(&instance("").gold)
        );
        let inst = instance(&wrapped);
        let (strict_score, _) =
            score_instance::<Score>(&inst, &ExactBackend, ContentMode::Strict).unwrap();
        assert_eq!(strict_score.sim_c, 0.0);

        let (lenient_score, _) =
            score_instance::<Score>(&inst, &ExactBackend, ContentMode::Lenient).unwrap();
        assert!(!lenient_score.schema_ok, "schema accuracy stays strict");
        assert_eq!(lenient_score.sim_c, 1.0);
    }
}
