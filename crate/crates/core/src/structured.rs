//! Versioned machine-readable output.
//!
//! Every payload is a JSON object carrying a `"version"` field. Rationals
//! are emitted as `{"numer": .., "denom": ..}` plus redundant `fraction`
//! and `decimal` strings, so consumers can stay exact or lazy as they
//! prefer. Similarity breakdowns can be read back bit-exactly.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::contradiction::{RepairPlan, RepairPolicy, RepairReport};
use crate::format::{parse_atom, parse_literal};
use crate::hierarchy::{DisjunctionReport, HierarchyTrace, SuperCategoryPartition};
use crate::kb::{Entity, EntityId};
use crate::render::{decimal_fixed, fraction};
use crate::similarity::{PropertyPartition, SimilarityBreakdown, SimilarityMatrix};
use crate::Rational;

/// Version of the structured output schema.
pub const STRUCTURED_VERSION: &str = "1";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructuredError {
    #[error("missing or ill-typed field {0:?}")]
    Field(&'static str),
    #[error("cannot parse {text:?} as {what}: {message}")]
    Text {
        what: &'static str,
        text: String,
        message: String,
    },
    #[error("breakdown ratios do not match the embedded partition")]
    Inconsistent,
}

/// Wraps a payload into the versioned envelope for one command.
pub fn envelope(command: &str, payload: Value) -> Value {
    let mut object = Map::new();
    object.insert("version".into(), json!(STRUCTURED_VERSION));
    object.insert("command".into(), json!(command));
    match payload {
        Value::Object(fields) => object.extend(fields),
        other => {
            object.insert("result".into(), other);
        }
    }
    Value::Object(object)
}

pub fn rational_to_json(r: Rational, precision: u32) -> Value {
    json!({
        "numer": r.numer(),
        "denom": r.denom(),
        "fraction": fraction(r),
        "decimal": decimal_fixed(r, precision),
    })
}

pub fn rational_from_json(value: &Value) -> Result<Rational, StructuredError> {
    let numer = value
        .get("numer")
        .and_then(Value::as_i64)
        .ok_or(StructuredError::Field("numer"))?;
    let denom = value
        .get("denom")
        .and_then(Value::as_i64)
        .filter(|d| *d != 0)
        .ok_or(StructuredError::Field("denom"))?;
    Ok(Rational::new(numer, denom))
}

pub fn entity_to_json(entity: &Entity) -> Value {
    json!({
        "id": entity.id().as_str(),
        "literals": entity.literals().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
    })
}

pub fn partition_to_json(p: &PropertyPartition) -> Value {
    json!({
        "shared": p.shared.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "contradictory_atoms": p.contradictory.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "total": p.total.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
    })
}

pub fn partition_from_json(value: &Value) -> Result<PropertyPartition, StructuredError> {
    let literals = |field: &'static str| -> Result<_, StructuredError> {
        string_list(value, field)?
            .iter()
            .map(|s| {
                parse_literal(s).map_err(|e| StructuredError::Text {
                    what: "literal",
                    text: s.clone(),
                    message: e.to_string(),
                })
            })
            .collect::<Result<std::collections::BTreeSet<_>, _>>()
    };
    let shared = literals("shared")?;
    let total = literals("total")?;
    let contradictory = string_list(value, "contradictory_atoms")?
        .iter()
        .map(|s| {
            parse_atom(s).map_err(|e| StructuredError::Text {
                what: "atom",
                text: s.clone(),
                message: e.to_string(),
            })
        })
        .collect::<Result<std::collections::BTreeSet<_>, _>>()?;
    Ok(PropertyPartition {
        shared,
        contradictory,
        total,
    })
}

pub fn breakdown_to_json(b: &SimilarityBreakdown, precision: u32) -> Value {
    json!({
        "s_plus": rational_to_json(b.shared_ratio(), precision),
        "d_pm": rational_to_json(b.contradiction_ratio(), precision),
        "s_star": rational_to_json(b.score(), precision),
        "partition": partition_to_json(b.partition()),
    })
}

/// Reconstructs a breakdown from its JSON form. The ratios are re-derived
/// from the embedded partition and must agree bit-exactly with the
/// serialized ones.
pub fn breakdown_from_json(value: &Value) -> Result<SimilarityBreakdown, StructuredError> {
    let partition = partition_from_json(
        value
            .get("partition")
            .ok_or(StructuredError::Field("partition"))?,
    )?;
    let breakdown = SimilarityBreakdown::from_partition(partition);
    let expect = |field: &'static str, actual: Rational| -> Result<(), StructuredError> {
        let stored =
            rational_from_json(value.get(field).ok_or(StructuredError::Field(field))?)?;
        if stored == actual {
            Ok(())
        } else {
            Err(StructuredError::Inconsistent)
        }
    };
    expect("s_plus", breakdown.shared_ratio())?;
    expect("d_pm", breakdown.contradiction_ratio())?;
    expect("s_star", breakdown.score())?;
    Ok(breakdown)
}

pub fn matrix_to_json(m: &SimilarityMatrix, precision: u32) -> Value {
    let n = m.len();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| breakdown_to_json(m.get(i, j), precision)).collect()))
        .collect();
    json!({
        "ids": m.ids().iter().map(|id| id.as_str()).collect::<Vec<_>>(),
        "cells": rows,
    })
}

pub fn plan_to_json(plan: &RepairPlan) -> Value {
    json!({
        "entity_id": plan.entity_id().as_str(),
        "policy": policy_name(plan.policy()),
        "removals": plan.removals().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
    })
}

pub fn repair_report_to_json(report: &RepairReport) -> Value {
    json!({
        "extracted": report.extracted.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "contradictory_atoms": report.contradictory_atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "minimal_size": report.minimal_size,
        "repairable": report.repairable,
        "truncated": report.truncated,
        "plans": report.plans.iter().map(plan_to_json).collect::<Vec<_>>(),
    })
}

pub fn blocks_to_json(p: &SuperCategoryPartition) -> Value {
    Value::Array(
        p.blocks()
            .iter()
            .map(|block| {
                Value::Array(
                    block
                        .iter()
                        .map(|id: &EntityId| json!(id.as_str()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn disjunction_to_json(report: &DisjunctionReport, precision: u32) -> Value {
    json!({
        "theta": rational_to_json(report.theta, precision),
        "checked_pairs": report.checked_pairs,
        "violations": report
            .violations
            .iter()
            .map(|v| json!({
                "first": v.first.as_str(),
                "second": v.second.as_str(),
                "score": rational_to_json(v.score, precision),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn hierarchy_to_json(trace: &HierarchyTrace, precision: u32) -> Value {
    json!({
        "levels": trace
            .thresholds
            .iter()
            .zip(&trace.partitions)
            .map(|(theta, partition)| json!({
                "theta": rational_to_json(*theta, precision),
                "blocks": blocks_to_json(partition),
            }))
            .collect::<Vec<_>>(),
    })
}

fn policy_name(policy: RepairPolicy) -> &'static str {
    match policy {
        RepairPolicy::DropNegative => "drop-negative",
        RepairPolicy::DropPositive => "drop-positive",
        RepairPolicy::Enumerate => "enumerate",
    }
}

fn string_list(value: &Value, field: &'static str) -> Result<Vec<String>, StructuredError> {
    value
        .get(field)
        .and_then(Value::as_array)
        .ok_or(StructuredError::Field(field))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or(StructuredError::Field(field))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Atom, Literal};
    use crate::similarity::compare;

    fn entity(id: &str, spec: &[(&str, bool)]) -> Entity {
        Entity::new(
            id,
            spec.iter().map(|(name, positive)| {
                let atom = Atom::prop(*name).unwrap();
                if *positive {
                    Literal::positive(atom)
                } else {
                    Literal::negative(atom)
                }
            }),
        )
    }

    #[test]
    fn breakdown_round_trips_bit_exactly() {
        let k1 = entity("K1", &[("p1", true), ("p2", true), ("p3", false)]);
        let k2 = entity("K2", &[("p2", true), ("p3", true), ("p1", false)]);
        let b = compare(&k1, &k2);
        let round_tripped = breakdown_from_json(&breakdown_to_json(&b, 2)).unwrap();
        assert_eq!(round_tripped, b);
    }

    #[test]
    fn tampered_breakdown_is_rejected() {
        let k = entity("K", &[("p", true)]);
        let mut v = breakdown_to_json(&compare(&k, &k), 2);
        v["s_star"]["numer"] = json!(0);
        assert_eq!(breakdown_from_json(&v), Err(StructuredError::Inconsistent));
    }

    #[test]
    fn envelope_carries_version_and_command() {
        let v = envelope("sim", json!({"x": 1}));
        assert_eq!(v["version"], json!(STRUCTURED_VERSION));
        assert_eq!(v["command"], json!("sim"));
        assert_eq!(v["x"], json!(1));
    }

    #[test]
    fn rational_json_shape() {
        let v = rational_to_json(Rational::new(-1, 5), 2);
        assert_eq!(v["numer"], json!(-1));
        assert_eq!(v["denom"], json!(5));
        assert_eq!(v["fraction"], json!("-1/5"));
        assert_eq!(v["decimal"], json!("-0.20"));
        assert_eq!(rational_from_json(&v).unwrap(), Rational::new(-1, 5));
    }
}
