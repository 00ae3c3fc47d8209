//! Pairwise similarity between entities.
//!
//! For a pair of entities the property universe splits into the literals
//! both entities assert (`shared`), the atoms they assert with opposite
//! polarities (`contradictory`), and the union of all their literals
//! (`total`). The net score `S*` is the shared fraction `S+` minus the
//! contradictory fraction `D±`, both over `|total|`, computed in exact
//! rational arithmetic. The classical Jaccard index is provided as a
//! baseline that ignores contradictions.
//!
//! Counting convention: `shared` and `total` count literals, `contradictory`
//! counts atoms (one per complementary pair across the two entities).

use std::collections::BTreeSet;

use crate::kb::{Atom, Entity, EntityId, KnowledgeBase, Literal};
use crate::Rational;

/// Score assigned when the property universe of a pair is empty (two empty
/// entities): neither similarity nor divergence, so neutral.
pub const SCORE_ON_EMPTY_TOTAL: Rational = Rational::new_raw(0, 1);

/// Jaccard value for an empty union, the standard `J(∅, ∅) = 1` convention.
pub const JACCARD_ON_EMPTY_UNION: Rational = Rational::new_raw(1, 1);

/// The property universe of an entity pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyPartition {
    /// Literals present identically in both entities.
    pub shared: BTreeSet<Literal>,
    /// Atoms asserted with one polarity by one entity and the opposite
    /// polarity by the other.
    pub contradictory: BTreeSet<Atom>,
    /// Union of both entities' literals.
    pub total: BTreeSet<Literal>,
}

impl PropertyPartition {
    pub fn shared_count(&self) -> usize {
        self.shared.len()
    }

    pub fn contradictory_count(&self) -> usize {
        self.contradictory.len()
    }

    pub fn total_count(&self) -> usize {
        self.total.len()
    }
}

/// Splits the property universe of `(k1, k2)`.
///
/// `shared` is the literal-level intersection, `contradictory` the set of
/// atoms appearing with opposite polarities across the pair, `total` the
/// literal-level union.
pub fn partition_properties(k1: &Entity, k2: &Entity) -> PropertyPartition {
    let shared = k1.literals() & k2.literals();
    let total = k1.literals() | k2.literals();
    let contradictory = k1
        .literals()
        .iter()
        .filter(|l| k2.contains(&l.complement()))
        .map(|l| l.atom().clone())
        .collect();
    PropertyPartition {
        shared,
        contradictory,
        total,
    }
}

/// The score `S*` together with its components and the partition that
/// produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityBreakdown {
    shared_ratio: Rational,
    contradiction_ratio: Rational,
    score: Rational,
    partition: PropertyPartition,
}

impl SimilarityBreakdown {
    /// Derives the ratios from a partition. With an empty `total` both
    /// ratios are zero and the score is [`SCORE_ON_EMPTY_TOTAL`].
    pub fn from_partition(partition: PropertyPartition) -> Self {
        let total = partition.total_count() as i64;
        let (shared_ratio, contradiction_ratio) = if total == 0 {
            (Rational::new_raw(0, 1), Rational::new_raw(0, 1))
        } else {
            (
                Rational::new(partition.shared_count() as i64, total),
                Rational::new(partition.contradictory_count() as i64, total),
            )
        };
        SimilarityBreakdown {
            shared_ratio,
            contradiction_ratio,
            score: shared_ratio - contradiction_ratio,
            partition,
        }
    }

    /// `S+`: fraction of the property universe both entities assert.
    pub fn shared_ratio(&self) -> Rational {
        self.shared_ratio
    }

    /// `D±`: fraction of the property universe in contradiction.
    pub fn contradiction_ratio(&self) -> Rational {
        self.contradiction_ratio
    }

    /// `S*`: net similarity, `shared_ratio - contradiction_ratio`.
    pub fn score(&self) -> Rational {
        self.score
    }

    pub fn partition(&self) -> &PropertyPartition {
        &self.partition
    }
}

/// Full similarity breakdown for a pair of entities.
pub fn compare(k1: &Entity, k2: &Entity) -> SimilarityBreakdown {
    SimilarityBreakdown::from_partition(partition_properties(k1, k2))
}

/// Net score `S*` for a pair of entities.
///
/// Bounds: the score always lies in `[-1, 1]`; under this partition
/// semantics it in fact never drops below `-1/2`, because every
/// contradictory atom contributes two literals to `total`.
pub fn score(k1: &Entity, k2: &Entity) -> Rational {
    compare(k1, k2).score()
}

/// Which set the Jaccard baseline is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JaccardMode {
    /// Atoms of positive literals only; negated properties are ignored.
    PositiveOnly,
    /// Full literal sets, polarity included.
    AllLiterals,
}

/// Classical Jaccard index `|A ∩ B| / |A ∪ B|` over the chosen property
/// sets. An empty union yields [`JACCARD_ON_EMPTY_UNION`].
pub fn jaccard(k1: &Entity, k2: &Entity, mode: JaccardMode) -> Rational {
    let (inter, union) = match mode {
        JaccardMode::PositiveOnly => {
            let a: BTreeSet<&Atom> = positive_atoms(k1).collect();
            let b: BTreeSet<&Atom> = positive_atoms(k2).collect();
            (a.intersection(&b).count(), a.union(&b).count())
        }
        JaccardMode::AllLiterals => (
            k1.literals().intersection(k2.literals()).count(),
            k1.literals().union(k2.literals()).count(),
        ),
    };
    if union == 0 {
        JACCARD_ON_EMPTY_UNION
    } else {
        Rational::new(inter as i64, union as i64)
    }
}

fn positive_atoms(k: &Entity) -> impl Iterator<Item = &Atom> {
    k.literals()
        .iter()
        .filter(|l| l.is_positive())
        .map(|l| l.atom())
}

/// Pairwise similarity breakdowns for every entity pair of a knowledge
/// base, diagonal included. Every cell is computed directly, so symmetry is
/// a property of the measure rather than of the storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityMatrix {
    ids: Vec<EntityId>,
    cells: Vec<SimilarityBreakdown>,
}

impl SimilarityMatrix {
    pub fn ids(&self) -> &[EntityId] {
        &self.ids
    }

    /// Number of entities (the matrix is `len × len`).
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> &SimilarityBreakdown {
        &self.cells[row * self.ids.len() + col]
    }

    pub fn score(&self, row: usize, col: usize) -> Rational {
        self.get(row, col).score()
    }

    /// All index pairs `row < col` with their scores, in row-major order.
    pub fn upper_triangle(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j, self.score(i, j))))
    }
}

/// Computes the full similarity matrix of `kb`.
pub fn matrix(kb: &KnowledgeBase) -> SimilarityMatrix {
    let entities = kb.entities();
    let mut cells = Vec::with_capacity(entities.len() * entities.len());
    for a in entities {
        for b in entities {
            cells.push(compare(a, b));
        }
    }
    SimilarityMatrix {
        ids: entities.iter().map(|e| e.id().clone()).collect(),
        cells,
    }
}
