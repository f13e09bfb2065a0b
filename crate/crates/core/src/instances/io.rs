//! Canonical text formats for instances and allocations.
//!
//! Both documents are JSON with a fixed field order, decimal integers, and a
//! terminating newline; serializing a parsed document reproduces it byte for
//! byte. Instance files carry `name`, `agents`, `items`, `values` (row-major
//! array of rows), and an optional free-form `regime_claim`. Allocation files
//! carry `bundles` (per-agent item index lists) and an optional `source`.

use crate::model::{Allocation, Instance};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("inconsistent document: {0}")]
    Shape(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    agents: usize,
    items: usize,
    values: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    regime_claim: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationFile {
    bundles: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

/// An instance plus the optional regime annotation carried by its file.
#[derive(Debug, Clone)]
pub struct InstanceDocument {
    pub instance: Instance,
    pub regime_claim: Option<String>,
}

pub fn instance_to_string(inst: &Instance, regime_claim: Option<&str>) -> String {
    let file = InstanceFile {
        name: inst.name().map(str::to_owned),
        agents: inst.num_agents(),
        items: inst.num_items(),
        values: (0..inst.num_agents()).map(|i| inst.row(i).to_vec()).collect(),
        regime_claim: regime_claim.map(str::to_owned),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn instance_document_from_str(text: &str) -> Result<InstanceDocument, ParseError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    if file.values.len() != file.agents {
        return Err(ParseError::Shape(format!(
            "field `agents` is {} but `values` has {} rows",
            file.agents,
            file.values.len()
        )));
    }
    for (i, row) in file.values.iter().enumerate() {
        if row.len() != file.items {
            return Err(ParseError::Shape(format!(
                "field `items` is {} but row {} has {} entries",
                file.items,
                i,
                row.len()
            )));
        }
    }
    let mut instance = Instance::new(file.values)
        .map_err(|e| ParseError::Shape(e.to_string()))?;
    if let Some(name) = file.name {
        instance = instance.with_name(name);
    }
    Ok(InstanceDocument { instance, regime_claim: file.regime_claim })
}

pub fn instance_from_str(text: &str) -> Result<Instance, ParseError> {
    instance_document_from_str(text).map(|doc| doc.instance)
}

pub fn allocation_to_string(alloc: &Allocation, source: Option<&str>) -> String {
    let file = AllocationFile {
        bundles: alloc.bundles_as_vecs(),
        source: source.map(str::to_owned),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn allocation_from_str(text: &str, inst: &Instance) -> Result<Allocation, ParseError> {
    let file: AllocationFile = serde_json::from_str(text)?;
    if file.bundles.len() != inst.num_agents() {
        return Err(ParseError::Shape(format!(
            "allocation has {} bundles but the instance has {} agents",
            file.bundles.len(),
            inst.num_agents()
        )));
    }
    Allocation::from_bundles(inst, &file.bundles).map_err(|e| ParseError::Shape(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::fixtures::fixtures;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn arbitrary_instances_round_trip(
            rows in proptest::collection::vec(
                proptest::collection::vec(-1000i64..=1000, 0..10), 1..6),
            name in proptest::option::of("[a-z0-9_-]{1,12}"),
        ) {
            let m = rows[0].len();
            let rows: Vec<Vec<i64>> =
                rows.into_iter().map(|mut r| { r.resize(m, 0); r }).collect();
            let mut inst = Instance::new(rows).unwrap();
            if let Some(n) = name {
                inst = inst.with_name(n);
            }
            let text = instance_to_string(&inst, None);
            let parsed = instance_from_str(&text).unwrap();
            prop_assert_eq!(&parsed, &inst);
            prop_assert_eq!(instance_to_string(&parsed, None), text);
        }
    }

    #[test]
    fn instance_round_trip_is_byte_exact() {
        for (_, fixture) in fixtures() {
            let text = instance_to_string(&fixture.instance, None);
            let doc = instance_document_from_str(&text).unwrap();
            assert_eq!(doc.instance, fixture.instance);
            assert_eq!(instance_to_string(&doc.instance, None), text);
        }
    }

    #[test]
    fn regime_claim_survives_round_trips() {
        let inst = Instance::new(vec![vec![1, -1], vec![-1, 1]]).unwrap().with_name("toy");
        let text = instance_to_string(&inst, Some("bivalued-normalized"));
        let doc = instance_document_from_str(&text).unwrap();
        assert_eq!(doc.regime_claim.as_deref(), Some("bivalued-normalized"));
        assert_eq!(instance_to_string(&doc.instance, doc.regime_claim.as_deref()), text);
    }

    #[test]
    fn allocation_round_trip() {
        let inst = Instance::new(vec![vec![1, -1, 2], vec![0, 1, 1]]).unwrap();
        let alloc = Allocation::from_bundles(&inst, &[vec![0, 2], vec![1]]).unwrap();
        let text = allocation_to_string(&alloc, Some("test"));
        let parsed = allocation_from_str(&text, &inst).unwrap();
        assert_eq!(parsed, alloc);
        assert_eq!(allocation_to_string(&parsed, Some("test")), text);
    }

    #[test]
    fn shape_errors_are_reported_with_field_context() {
        let bad_items = r#"{"agents": 2, "items": 3, "values": [[1, 2], [3, 4]]}"#;
        let err = instance_from_str(bad_items).unwrap_err();
        assert!(err.to_string().contains("row 0 has 2 entries"), "{err}");

        let bad_agents = r#"{"agents": 3, "items": 2, "values": [[1, 2], [3, 4]]}"#;
        let err = instance_from_str(bad_agents).unwrap_err();
        assert!(err.to_string().contains("`values` has 2 rows"), "{err}");

        let syntax = "{ not json";
        assert!(matches!(instance_from_str(syntax), Err(ParseError::Json(_))));
    }

    #[test]
    fn allocation_files_are_validated_against_the_instance() {
        let inst = Instance::new(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let doubled = r#"{"bundles": [[0, 1], [1]]}"#;
        assert!(allocation_from_str(doubled, &inst).is_err());
        let wrong_count = r#"{"bundles": [[0], [1], []]}"#;
        assert!(allocation_from_str(wrong_count, &inst).is_err());
    }
}
