//! Serialization round-trip and unknown-field conservation properties.

mod common;

use proptest::prelude::*;
use serde_json::json;

use common::{golden_design, random_any_design, rng, GOLDEN_SC};
use scadkit::codec::{self, json_semantic_eq, RawDocument};
use scadkit::model::Grid;

#[test]
fn golden_listing_parses_to_expected_structure() {
    let design = golden_design();
    assert_eq!(design.grid, Grid::Square);
    assert_eq!(design.helices.len(), 2);
    assert_eq!(design.helices[0].grid_position, Some((0, 0)));
    assert_eq!(design.helices[1].grid_position, Some((0, 1)));
    assert_eq!(design.helices[0].max_offset, Some(48));
    assert_eq!(design.strands.len(), 3);
    assert!(design.strands[0].is_scaffold);
    assert_eq!(design.modifications.len(), 1);
    assert!(design.modifications.contains_key("/5Biosg/"));
    assert_eq!(
        design.strands[2].modification_5p.as_deref(),
        Some("/5Biosg/")
    );
    assert!(design.validate().is_valid());
}

#[test]
fn golden_listing_roundtrips_semantically() {
    let design = golden_design();
    let text = codec::serialize_design(&design).unwrap();
    let reparsed = codec::parse_design(&text).unwrap();
    assert_eq!(design, reparsed);
    let original = RawDocument::parse(GOLDEN_SC).unwrap();
    let rewritten = RawDocument::parse(&text).unwrap();
    assert!(rewritten.semantically_equals(&original));
}

#[test]
fn injected_strand_label_survives_roundtrip() {
    let mut doc: serde_json::Value = serde_json::from_str(GOLDEN_SC).unwrap();
    doc["strands"][1]["label"] = json!("x");
    let design = codec::parse_design(&doc.to_string()).unwrap();
    assert_eq!(
        design.strands[1].extra_fields.get("label"),
        Some(&json!("x"))
    );
    let out = codec::serialize_design(&design).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(reparsed["strands"][1]["label"], json!("x"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// parse ∘ serialize is the identity on the JSON tree (up to key order),
    /// and serialize ∘ parse ∘ serialize is byte-stable.
    #[test]
    fn design_json_roundtrip(seed in any::<u64>()) {
        let design = random_any_design(&mut rng(seed));
        let value = codec::design_to_value(&design).unwrap();
        let text = serde_json::to_string_pretty(&value).unwrap();
        let reparsed = codec::parse_design(&text).unwrap();
        let revalue = codec::design_to_value(&reparsed).unwrap();
        prop_assert!(
            json_semantic_eq(&value, &revalue),
            "roundtrip drifted:\n{value}\nvs\n{revalue}"
        );
        let retext = serde_json::to_string_pretty(&revalue).unwrap();
        prop_assert_eq!(text, retext);
    }

    /// A key injected at any recognized object level survives one
    /// parse/serialize cycle with an identical value subtree.
    #[test]
    fn unknown_fields_are_conserved(seed in any::<u64>(), which in 0..4usize) {
        let design = random_any_design(&mut rng(seed));
        let mut value = codec::design_to_value(&design).unwrap();
        let payload = json!({"tool": "other", "n": [1, 2, 3]});
        let injected: &str = match which {
            0 => {
                value["custom_root"] = payload.clone();
                "/custom_root"
            }
            1 if !design.helices.is_empty() => {
                value["helices"][0]["custom_helix"] = payload.clone();
                "/helices/0/custom_helix"
            }
            2 if !design.strands.is_empty() => {
                value["strands"][0]["custom_strand"] = payload.clone();
                "/strands/0/custom_strand"
            }
            3 if !design.strands.is_empty() => {
                value["strands"][0]["domains"][0]["custom_domain"] = payload.clone();
                "/strands/0/domains/0/custom_domain"
            }
            _ => {
                value["custom_root"] = payload.clone();
                "/custom_root"
            }
        };
        let text = serde_json::to_string(&value).unwrap();
        let reparsed = codec::parse_design(&text).unwrap();
        let out = codec::design_to_value(&reparsed).unwrap();
        let survived = out.pointer(injected).cloned();
        prop_assert_eq!(survived, Some(payload));
    }
}
