//! Contradiction extraction and minimal repair of entities.
//!
//! The extractor `E` collects every literal whose complement also belongs to
//! the same entity — both members of each internal complementary pair. An
//! entity is repairable when something outside `E` survives; repairing means
//! deleting one literal per pair, and the repaired similarity compares two
//! entities after repairing each independently (cross-entity contradictions
//! are left alone and still count against the score).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::kb::{Atom, Entity, EntityId, Literal, Polarity};
use crate::similarity::{compare, SimilarityBreakdown};

/// Default bound on the number of plans `RepairPolicy::Enumerate` emits.
pub const DEFAULT_PLAN_CAP: usize = 1024;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RepairError {
    #[error("plan targets entity {plan} but was applied to entity {entity}")]
    EntityMismatch { plan: EntityId, entity: EntityId },
    #[error("removal {literal} is not a literal of entity {entity}")]
    RemovalNotInEntity { literal: Literal, entity: EntityId },
    #[error("entity {0} is irreparable: every literal it asserts is involved in a contradiction")]
    Irreparable(EntityId),
}

/// The extractor `E`: literals of `k` whose complement is also in `k`.
/// Total — defined for every entity; empty iff the entity is consistent.
pub fn extract_contradictions(k: &Entity) -> BTreeSet<Literal> {
    k.literals()
        .iter()
        .filter(|l| k.contains(&l.complement()))
        .cloned()
        .collect()
}

/// Atoms of `k` that occur with both polarities — one atom per internal
/// complementary pair.
pub fn conflicting_atoms(k: &Entity) -> BTreeSet<Atom> {
    k.literals()
        .iter()
        .filter(|l| l.is_positive() && k.contains(&l.complement()))
        .map(|l| l.atom().clone())
        .collect()
}

/// Whether `k` admits a repair. An entity is irreparable when every literal
/// it asserts is involved in a contradiction (`E(K) = K`), with one
/// exception: the empty entity is treated as consistent and trivially
/// repaired here. Use [`is_repairable_strict`] for the literal criterion.
pub fn is_repairable(k: &Entity) -> bool {
    k.is_empty() || is_repairable_strict(k)
}

/// The literal criterion `E(K) ≠ K`, under which the empty entity counts as
/// irreparable (its extraction equals itself vacuously).
pub fn is_repairable_strict(k: &Entity) -> bool {
    extract_contradictions(k) != *k.literals()
}

/// How removal sets are chosen among the minimal repairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairPolicy {
    /// One plan: delete the negative literal of every complementary pair.
    DropNegative,
    /// One plan: delete the positive literal of every complementary pair.
    DropPositive,
    /// Every minimal plan (`2^pairs`), in lexicographic order of their
    /// removal sets, capped with an explicit truncation flag.
    Enumerate,
}

/// One removal set that restores internal consistency when applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPlan {
    entity_id: EntityId,
    removals: BTreeSet<Literal>,
    policy: RepairPolicy,
}

impl RepairPlan {
    pub fn new(
        entity_id: impl Into<EntityId>,
        removals: impl IntoIterator<Item = Literal>,
        policy: RepairPolicy,
    ) -> Self {
        RepairPlan {
            entity_id: entity_id.into(),
            removals: removals.into_iter().collect(),
            policy,
        }
    }

    pub fn entity_id(&self) -> &EntityId {
        &self.entity_id
    }

    pub fn removals(&self) -> &BTreeSet<Literal> {
        &self.removals
    }

    pub fn policy(&self) -> RepairPolicy {
        self.policy
    }
}

/// Everything `minimal_repairs` found out about an entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairReport {
    /// `E(K)`: both members of every internal complementary pair.
    pub extracted: BTreeSet<Literal>,
    /// One atom per internal complementary pair.
    pub contradictory_atoms: BTreeSet<Atom>,
    /// Size of every minimal removal set: one literal per pair.
    pub minimal_size: usize,
    /// Minimal plans under the requested policy.
    pub plans: Vec<RepairPlan>,
    /// Repairability under the default criterion (see [`is_repairable`]).
    pub repairable: bool,
    /// True when `Enumerate` hit the plan cap and plans were dropped.
    pub truncated: bool,
}

/// Minimal repairs of `k` under `policy`, with the default enumeration cap.
pub fn minimal_repairs(k: &Entity, policy: RepairPolicy) -> RepairReport {
    minimal_repairs_capped(k, policy, DEFAULT_PLAN_CAP)
}

/// Minimal repairs of `k` under `policy`, emitting at most `max_plans`
/// plans. Plans are ordered lexicographically by their removal sets
/// (negative literals sort first), so the all-negatives plan — the
/// `DropNegative` choice — always comes first and truncation is
/// deterministic.
pub fn minimal_repairs_capped(k: &Entity, policy: RepairPolicy, max_plans: usize) -> RepairReport {
    let pairs: Vec<Atom> = conflicting_atoms(k).into_iter().collect();
    let pair_count = pairs.len();

    let pick = |atom: &Atom, polarity: Polarity| Literal::new(atom.clone(), polarity);
    let uniform_plan = |polarity: Polarity| {
        RepairPlan::new(
            k.id().clone(),
            pairs.iter().map(|a| pick(a, polarity)),
            policy,
        )
    };

    let mut truncated = false;
    let plans = match policy {
        RepairPolicy::DropNegative => vec![uniform_plan(Polarity::Negative)],
        RepairPolicy::DropPositive => vec![uniform_plan(Polarity::Positive)],
        RepairPolicy::Enumerate => {
            let combinations: u128 = if pair_count < 128 {
                1u128 << pair_count
            } else {
                u128::MAX
            };
            truncated = combinations > max_plans as u128;
            let emit = combinations.min(max_plans as u128) as usize;
            (0..emit)
                .map(|mask| {
                    // Bit 0 of the mask drives the last atom, so counting up
                    // walks the removal sets in lexicographic order.
                    let removals = pairs.iter().enumerate().map(|(i, atom)| {
                        if mask >> (pair_count - 1 - i) & 1 == 0 {
                            pick(atom, Polarity::Negative)
                        } else {
                            pick(atom, Polarity::Positive)
                        }
                    });
                    RepairPlan::new(k.id().clone(), removals, policy)
                })
                .collect()
        }
    };

    RepairReport {
        extracted: extract_contradictions(k),
        contradictory_atoms: pairs.into_iter().collect(),
        minimal_size: pair_count,
        plans,
        repairable: is_repairable(k),
        truncated,
    }
}

/// Deletes `plan.removals` from `k`. The plan must target `k` and only
/// remove literals `k` actually has; it is not required to come from
/// `minimal_repairs`, so forced deletions of arbitrary subsets are
/// expressible too.
pub fn apply_repair(k: &Entity, plan: &RepairPlan) -> Result<Entity, RepairError> {
    if plan.entity_id() != k.id() {
        return Err(RepairError::EntityMismatch {
            plan: plan.entity_id().clone(),
            entity: k.id().clone(),
        });
    }
    if let Some(missing) = plan.removals().iter().find(|l| !k.contains(l)) {
        return Err(RepairError::RemovalNotInEntity {
            literal: missing.clone(),
            entity: k.id().clone(),
        });
    }
    Ok(Entity::new(
        k.id().clone(),
        k.literals()
            .iter()
            .filter(|l| !plan.removals().contains(l))
            .cloned(),
    ))
}

/// Similarity of the pair after repairing each entity independently with
/// its first minimal plan under `policy` (for `Enumerate` that is the
/// all-negatives plan). Consistent entities pass through unchanged.
/// Cross-entity contradictions are not repaired and still lower the score.
pub fn repaired_similarity(
    k1: &Entity,
    k2: &Entity,
    policy: RepairPolicy,
) -> Result<SimilarityBreakdown, RepairError> {
    let r1 = repair_entity(k1, policy)?;
    let r2 = repair_entity(k2, policy)?;
    Ok(compare(&r1, &r2))
}

fn repair_entity(k: &Entity, policy: RepairPolicy) -> Result<Entity, RepairError> {
    let report = minimal_repairs(k, policy);
    if !report.repairable {
        return Err(RepairError::Irreparable(k.id().clone()));
    }
    let plan = report
        .plans
        .first()
        .expect("every policy emits at least one plan");
    apply_repair(k, plan)
}
