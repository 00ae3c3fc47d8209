//! Shared test support: fixture builders, a deterministic generator, and
//! independent oracles. The oracles deliberately avoid the library's
//! algorithms: they use plain vectors, nested loops, exhaustive subset
//! search, and relation closure, so agreement with the library is evidence
//! rather than tautology.

#![allow(dead_code)]

use std::collections::BTreeSet;

use parasim::kb::{Atom, Entity, EntityId, KnowledgeBase, Literal};
use parasim::Rational;

pub fn pos(name: &str) -> Literal {
    Literal::positive(Atom::prop(name).unwrap())
}

pub fn neg(name: &str) -> Literal {
    Literal::negative(Atom::prop(name).unwrap())
}

pub fn entity(id: &str, literals: impl IntoIterator<Item = Literal>) -> Entity {
    Entity::new(id, literals)
}

pub fn simple_pair() -> (Entity, Entity) {
    (
        entity("K1", [pos("p1"), pos("p2"), neg("p3")]),
        entity("K2", [pos("p2"), pos("p3"), neg("p1")]),
    )
}

pub fn medical_kb() -> KnowledgeBase {
    KnowledgeBase::new([
        entity("K1", [pos("fievre"), pos("toux"), neg("maux_de_tete")]),
        entity("K2", [pos("fievre"), neg("toux"), pos("maux_de_tete")]),
        entity("K3", [pos("fievre"), pos("toux"), pos("fatigue")]),
        entity(
            "K4",
            [pos("essoufflement"), pos("vomissements"), neg("fievre")],
        ),
        entity(
            "K5",
            [
                pos("essoufflement"),
                neg("vomissements"),
                pos("douleur_abdominale"),
            ],
        ),
    ])
    .unwrap()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// xorshift64* — small, seedable, and stable across runs and platforms.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform-ish value in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Random entity: up to `max_literals` draws over `atom_pool` atoms with
/// random polarity, deduplicated by set semantics.
pub fn gen_entity(rng: &mut TestRng, id: &str, max_literals: usize, atom_pool: usize) -> Entity {
    let count = rng.below(max_literals as u64 + 1) as usize;
    let literals = (0..count).map(|_| {
        let atom = Atom::prop(format!("a{}", rng.below(atom_pool as u64))).unwrap();
        if rng.chance(1, 2) {
            Literal::positive(atom)
        } else {
            Literal::negative(atom)
        }
    });
    Entity::new(id, literals)
}

/// Random knowledge base of 1..=6 entities shaped like the acceptance
/// corpus: at most 12 literals each over at most 8 atoms.
pub fn gen_kb(rng: &mut TestRng) -> KnowledgeBase {
    let n = 1 + rng.below(6) as usize;
    KnowledgeBase::new((0..n).map(|i| gen_entity(rng, &format!("E{i}"), 12, 8))).unwrap()
}

fn literal_vec(k: &Entity) -> Vec<Literal> {
    k.literals().iter().cloned().collect()
}

/// Oracle partition by nested loops over plain vectors.
pub fn naive_partition(k1: &Entity, k2: &Entity) -> (Vec<Literal>, Vec<Atom>, Vec<Literal>) {
    let a = literal_vec(k1);
    let b = literal_vec(k2);
    let mut shared = Vec::new();
    for l in &a {
        if b.contains(l) && !shared.contains(l) {
            shared.push(l.clone());
        }
    }
    let mut contradictory: Vec<Atom> = Vec::new();
    for l in &a {
        for m in &b {
            if l.atom() == m.atom()
                && l.polarity() != m.polarity()
                && !contradictory.contains(l.atom())
            {
                contradictory.push(l.atom().clone());
            }
        }
    }
    let mut total = a.clone();
    for l in &b {
        if !total.contains(l) {
            total.push(l.clone());
        }
    }
    (shared, contradictory, total)
}

/// Oracle score: counts from [`naive_partition`].
pub fn naive_score(k1: &Entity, k2: &Entity) -> Rational {
    let (shared, contradictory, total) = naive_partition(k1, k2);
    if total.is_empty() {
        return Rational::new_raw(0, 1);
    }
    Rational::new(
        shared.len() as i64 - contradictory.len() as i64,
        total.len() as i64,
    )
}

fn consistent_after_removal(k: &Entity, removals: &[Literal]) -> bool {
    let rest: Vec<&Literal> = k
        .literals()
        .iter()
        .filter(|l| !removals.contains(l))
        .collect();
    rest.iter()
        .all(|l| !rest.iter().any(|m| **m == l.complement()))
}

/// Oracle minimal repair size: exhaustive search over all subsets of the
/// extraction, excluding the whole-entity removal when the extraction
/// covers the entity. `None` means no admissible subset exists (only the
/// empty entity, whose sole subset is excluded).
pub fn brute_force_min_repair(k: &Entity) -> Option<usize> {
    let extracted: Vec<Literal> = k
        .literals()
        .iter()
        .filter(|l| k.contains(&l.complement()))
        .cloned()
        .collect();
    let extraction_is_whole_entity = extracted.len() == k.len();
    let mut best: Option<usize> = None;
    for mask in 0u64..(1 << extracted.len()) {
        let removals: Vec<Literal> = extracted
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect();
        if extraction_is_whole_entity && removals.len() == k.len() {
            continue;
        }
        if consistent_after_removal(k, &removals) {
            best = Some(best.map_or(removals.len(), |b: usize| b.min(removals.len())));
        }
    }
    best
}

/// True iff removing `removals` restores consistency and no proper subset
/// does. Exhaustive over subsets.
pub fn is_minimal_repair(k: &Entity, removals: &BTreeSet<Literal>) -> bool {
    let removal_vec: Vec<Literal> = removals.iter().cloned().collect();
    if !consistent_after_removal(k, &removal_vec) {
        return false;
    }
    for mask in 0u64..(1 << removal_vec.len()) {
        let subset: Vec<Literal> = removal_vec
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect();
        if subset.len() < removal_vec.len() && consistent_after_removal(k, &subset) {
            return false;
        }
    }
    true
}

/// Oracle clustering: reflexive-transitive closure of the above-threshold
/// relation, computed by fixpoint iteration over a boolean matrix, then
/// canonicalized like the library output.
pub fn naive_components(kb: &KnowledgeBase, theta: Rational) -> Vec<Vec<EntityId>> {
    let n = kb.len();
    let entities = kb.entities();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            reach[i][j] = i == j || naive_score(&entities[i], &entities[j]) > theta;
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if !reach[i][j] {
                    let via = (0..n).any(|k| reach[i][k] && reach[k][j]);
                    if via {
                        reach[i][j] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut blocks: Vec<Vec<EntityId>> = Vec::new();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut block = Vec::new();
        for j in 0..n {
            if reach[i][j] {
                assigned[j] = true;
                block.push(entities[j].id().clone());
            }
        }
        block.sort();
        blocks.push(block);
    }
    blocks.sort();
    blocks
}
