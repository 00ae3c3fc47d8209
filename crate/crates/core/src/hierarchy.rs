//! Threshold clustering of a knowledge base into super-categories.
//!
//! A threshold `θ` induces a graph on the entities with an edge wherever the
//! pairwise score strictly exceeds `θ`. The default mode groups entities by
//! connected components, which makes the separation guarantee exact: any two
//! entities in different blocks score at most `θ`. The strict-clique mode
//! instead covers the graph greedily with cliques, so membership in a block
//! requires exceeding `θ` against every other member.

use thiserror::Error;

use crate::kb::{EntityId, KnowledgeBase};
use crate::similarity::{matrix, SimilarityMatrix};
use crate::Rational;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("threshold {0} is outside [-1, 1]")]
    ThetaOutOfRange(Rational),
    #[error("thresholds must be strictly ascending")]
    NonAscendingThresholds,
}

/// How entities are grouped over the threshold graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterMode {
    /// Connected components of the threshold graph.
    ConnectedComponents,
    /// Greedy clique cover: entities in knowledge-base order, each joining
    /// the first existing block it exceeds `θ` against in full.
    StrictClique,
}

/// Disjoint blocks of entity ids at a threshold, in canonical order: members
/// sorted, blocks sorted by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperCategoryPartition {
    theta: Rational,
    mode: ClusterMode,
    blocks: Vec<Vec<EntityId>>,
}

impl SuperCategoryPartition {
    /// Builds a partition from raw blocks, canonicalizing the order. Useful
    /// for checking hand-built groupings with [`verify_disjunction`].
    pub fn from_blocks(
        theta: Rational,
        mode: ClusterMode,
        blocks: impl IntoIterator<Item = Vec<EntityId>>,
    ) -> Self {
        let mut blocks: Vec<Vec<EntityId>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort();
                b.dedup();
                b
            })
            .filter(|b| !b.is_empty())
            .collect();
        blocks.sort();
        SuperCategoryPartition {
            theta,
            mode,
            blocks,
        }
    }

    pub fn theta(&self) -> Rational {
        self.theta
    }

    pub fn mode(&self) -> ClusterMode {
        self.mode
    }

    pub fn blocks(&self) -> &[Vec<EntityId>] {
        &self.blocks
    }

    pub fn block_of(&self, id: &EntityId) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(id))
    }

    /// True when `a` and `b` belong to the same block.
    pub fn same_block(&self, a: &EntityId, b: &EntityId) -> bool {
        match (self.block_of(a), self.block_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// True when every block of `self` is contained in some block of
    /// `coarser`.
    pub fn refines(&self, coarser: &SuperCategoryPartition) -> bool {
        self.blocks.iter().all(|block| {
            coarser
                .blocks
                .iter()
                .any(|big| block.iter().all(|id| big.contains(id)))
        })
    }
}

/// A cross-block pair that scores above the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctionViolation {
    pub first: EntityId,
    pub second: EntityId,
    pub score: Rational,
}

/// Outcome of checking the separation guarantee on a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctionReport {
    pub theta: Rational,
    pub checked_pairs: usize,
    pub violations: Vec<DisjunctionViolation>,
}

impl DisjunctionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Groups the knowledge base at threshold `theta`.
pub fn build_supercategories(
    kb: &KnowledgeBase,
    theta: Rational,
    mode: ClusterMode,
) -> Result<SuperCategoryPartition, HierarchyError> {
    check_theta(theta)?;
    Ok(partition_from_matrix(kb, &matrix(kb), theta, mode))
}

/// Checks that every cross-block pair of `partition` scores at most the
/// partition's threshold. Violations are report content, not failures:
/// connected-component partitions are always clean, hand-built or
/// strict-clique ones need not be.
pub fn verify_disjunction(
    partition: &SuperCategoryPartition,
    kb: &KnowledgeBase,
) -> DisjunctionReport {
    let m = matrix(kb);
    let index_of = |id: &EntityId| m.ids().iter().position(|i| i == id);
    let mut checked_pairs = 0;
    let mut violations = Vec::new();
    let blocks = partition.blocks();
    for (bi, block_a) in blocks.iter().enumerate() {
        for block_b in &blocks[bi + 1..] {
            for a in block_a {
                for b in block_b {
                    let (Some(i), Some(j)) = (index_of(a), index_of(b)) else {
                        continue;
                    };
                    checked_pairs += 1;
                    let s = m.score(i, j);
                    if s > partition.theta() {
                        violations.push(DisjunctionViolation {
                            first: a.clone(),
                            second: b.clone(),
                            score: s,
                        });
                    }
                }
            }
        }
    }
    DisjunctionReport {
        theta: partition.theta(),
        checked_pairs,
        violations,
    }
}

/// One partition per threshold, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyTrace {
    pub thresholds: Vec<Rational>,
    pub partitions: Vec<SuperCategoryPartition>,
}

/// Connected-component partitions across strictly ascending thresholds.
/// Raising the threshold only removes edges, so each partition refines the
/// previous one.
pub fn build_hierarchy(
    kb: &KnowledgeBase,
    thresholds: &[Rational],
) -> Result<HierarchyTrace, HierarchyError> {
    for theta in thresholds {
        check_theta(*theta)?;
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HierarchyError::NonAscendingThresholds);
    }
    let m = matrix(kb);
    let partitions = thresholds
        .iter()
        .map(|&theta| partition_from_matrix(kb, &m, theta, ClusterMode::ConnectedComponents))
        .collect();
    Ok(HierarchyTrace {
        thresholds: thresholds.to_vec(),
        partitions,
    })
}

fn check_theta(theta: Rational) -> Result<(), HierarchyError> {
    let one = Rational::new_raw(1, 1);
    if theta < -one || theta > one {
        return Err(HierarchyError::ThetaOutOfRange(theta));
    }
    Ok(())
}

fn partition_from_matrix(
    kb: &KnowledgeBase,
    m: &SimilarityMatrix,
    theta: Rational,
    mode: ClusterMode,
) -> SuperCategoryPartition {
    let n = kb.len();
    let groups: Vec<Vec<usize>> = match mode {
        ClusterMode::ConnectedComponents => connected_components(m, theta, n),
        ClusterMode::StrictClique => greedy_clique_cover(m, theta, n),
    };
    let id_of = |i: usize| kb.entities()[i].id().clone();
    SuperCategoryPartition::from_blocks(
        theta,
        mode,
        groups
            .into_iter()
            .map(|g| g.into_iter().map(id_of).collect()),
    )
}

fn connected_components(m: &SimilarityMatrix, theta: Rational, n: usize) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let group_id = groups.len();
        groups.push(Vec::new());
        label[start] = group_id;
        stack.push(start);
        while let Some(v) = stack.pop() {
            groups[group_id].push(v);
            for (u, lab) in label.iter_mut().enumerate() {
                if u != v && *lab == usize::MAX && m.score(v, u) > theta {
                    *lab = group_id;
                    stack.push(u);
                }
            }
        }
    }
    groups
}

fn greedy_clique_cover(m: &SimilarityMatrix, theta: Rational, n: usize) -> Vec<Vec<usize>> {
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let home = cliques
            .iter_mut()
            .find(|c| c.iter().all(|&j| m.score(i, j) > theta));
        match home {
            Some(clique) => clique.push(i),
            None => cliques.push(vec![i]),
        }
    }
    cliques
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Atom, Entity, Literal};
    use crate::similarity::score;

    fn pos(name: &str) -> Literal {
        Literal::positive(Atom::prop(name).unwrap())
    }

    fn neg(name: &str) -> Literal {
        Literal::negative(Atom::prop(name).unwrap())
    }

    fn medical_kb() -> KnowledgeBase {
        KnowledgeBase::new([
            Entity::new("K1", [pos("fievre"), pos("toux"), neg("maux_de_tete")]),
            Entity::new("K2", [pos("fievre"), neg("toux"), pos("maux_de_tete")]),
            Entity::new("K3", [pos("fievre"), pos("toux"), pos("fatigue")]),
            Entity::new(
                "K4",
                [pos("essoufflement"), pos("vomissements"), neg("fievre")],
            ),
            Entity::new(
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

    fn ids(block: &[&str]) -> Vec<EntityId> {
        block.iter().map(|s| EntityId::new(*s)).collect()
    }

    fn rational(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn medical_partition_at_two_fifths() {
        let p = build_supercategories(
            &medical_kb(),
            rational(2, 5),
            ClusterMode::ConnectedComponents,
        )
        .unwrap();
        assert_eq!(
            p.blocks(),
            &[ids(&["K1", "K3"]), ids(&["K2"]), ids(&["K4"]), ids(&["K5"])]
        );
    }

    #[test]
    fn theta_one_isolates_everything() {
        let p = build_supercategories(&medical_kb(), rational(1, 1), ClusterMode::ConnectedComponents)
            .unwrap();
        assert_eq!(p.blocks().len(), 5);
        assert!(p.blocks().iter().all(|b| b.len() == 1));
    }

    #[test]
    fn theta_minus_one_merges_everything() {
        let p = build_supercategories(
            &medical_kb(),
            rational(-1, 1),
            ClusterMode::ConnectedComponents,
        )
        .unwrap();
        assert_eq!(p.blocks().len(), 1);
        assert_eq!(p.blocks()[0], ids(&["K1", "K2", "K3", "K4", "K5"]));
    }

    #[test]
    fn disjunction_holds_on_component_partition() {
        let kb = medical_kb();
        let p =
            build_supercategories(&kb, rational(2, 5), ClusterMode::ConnectedComponents).unwrap();
        let report = verify_disjunction(&p, &kb);
        assert!(report.is_clean());
        assert_eq!(report.checked_pairs, 9);
    }

    #[test]
    fn disjunction_flags_a_hand_built_split() {
        let kb = medical_kb();
        let p = SuperCategoryPartition::from_blocks(
            rational(2, 5),
            ClusterMode::ConnectedComponents,
            [
                ids(&["K1"]),
                ids(&["K3"]),
                ids(&["K2"]),
                ids(&["K4"]),
                ids(&["K5"]),
            ],
        );
        let report = verify_disjunction(&p, &kb);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.first.as_str(), v.second.as_str()), ("K1", "K3"));
        assert_eq!(v.score, rational(1, 2));
    }

    #[test]
    fn disjunction_is_vacuous_on_single_block() {
        let kb = medical_kb();
        let p = SuperCategoryPartition::from_blocks(
            rational(2, 5),
            ClusterMode::ConnectedComponents,
            [ids(&["K1", "K2", "K3", "K4", "K5"])],
        );
        let report = verify_disjunction(&p, &kb);
        assert!(report.is_clean());
        assert_eq!(report.checked_pairs, 0);
    }

    #[test]
    fn hierarchy_over_medical_thresholds() {
        let kb = medical_kb();
        let thresholds = [rational(-1, 6), rational(0, 1), rational(2, 5)];
        let trace = build_hierarchy(&kb, &thresholds).unwrap();
        assert_eq!(trace.partitions.len(), 3);
        assert_eq!(
            trace.partitions[0].blocks(),
            &[ids(&["K1", "K2", "K3", "K4", "K5"])]
        );
        let step3 = &[ids(&["K1", "K3"]), ids(&["K2"]), ids(&["K4"]), ids(&["K5"])];
        assert_eq!(trace.partitions[1].blocks(), step3);
        assert_eq!(trace.partitions[2].blocks(), step3);
        assert!(trace.partitions[1].refines(&trace.partitions[0]));
        assert!(trace.partitions[2].refines(&trace.partitions[1]));
    }

    #[test]
    fn hierarchy_with_single_threshold_matches_direct_build() {
        let kb = medical_kb();
        let trace = build_hierarchy(&kb, &[rational(2, 5)]).unwrap();
        let direct =
            build_supercategories(&kb, rational(2, 5), ClusterMode::ConnectedComponents).unwrap();
        assert_eq!(trace.partitions, vec![direct]);
    }

    #[test]
    fn hierarchy_with_no_thresholds_is_empty() {
        let trace = build_hierarchy(&medical_kb(), &[]).unwrap();
        assert!(trace.partitions.is_empty());
    }

    #[test]
    fn hierarchy_rejects_non_ascending_thresholds() {
        let kb = medical_kb();
        assert_eq!(
            build_hierarchy(&kb, &[rational(1, 2), rational(1, 2)]),
            Err(HierarchyError::NonAscendingThresholds)
        );
        assert_eq!(
            build_hierarchy(&kb, &[rational(1, 2), rational(0, 1)]),
            Err(HierarchyError::NonAscendingThresholds)
        );
    }

    #[test]
    fn theta_outside_range_is_rejected() {
        let kb = medical_kb();
        let too_big = rational(3, 2);
        assert_eq!(
            build_supercategories(&kb, too_big, ClusterMode::ConnectedComponents),
            Err(HierarchyError::ThetaOutOfRange(too_big))
        );
        assert_eq!(
            build_hierarchy(&kb, &[rational(-2, 1)]),
            Err(HierarchyError::ThetaOutOfRange(rational(-2, 1)))
        );
    }

    #[test]
    fn strict_clique_splits_a_chain() {
        // a-b and b-c exceed the threshold, a-c does not: components give one
        // block, cliques two.
        let kb = KnowledgeBase::new([
            Entity::new("a", [pos("x"), pos("y")]),
            Entity::new("b", [pos("y"), pos("z")]),
            Entity::new("c", [pos("z"), pos("w")]),
        ])
        .unwrap();
        let theta = rational(1, 4);
        assert_eq!(
            score(&kb.entities()[0], &kb.entities()[1]),
            rational(1, 3)
        );
        assert_eq!(score(&kb.entities()[0], &kb.entities()[2]), rational(0, 1));

        let components =
            build_supercategories(&kb, theta, ClusterMode::ConnectedComponents).unwrap();
        assert_eq!(components.blocks(), &[ids(&["a", "b", "c"])]);

        let cliques = build_supercategories(&kb, theta, ClusterMode::StrictClique).unwrap();
        assert_eq!(cliques.blocks(), &[ids(&["a", "b"]), ids(&["c"])]);
    }

    #[test]
    fn strict_clique_matches_components_on_medical_kb() {
        let kb = medical_kb();
        let a = build_supercategories(&kb, rational(2, 5), ClusterMode::ConnectedComponents)
            .unwrap();
        let b = build_supercategories(&kb, rational(2, 5), ClusterMode::StrictClique).unwrap();
        assert_eq!(a.blocks(), b.blocks());
    }

    #[test]
    fn boundary_scores_do_not_create_edges() {
        // score(a, b) = 1/3 exactly; at theta = 1/3 they must stay apart.
        let kb = KnowledgeBase::new([
            Entity::new("a", [pos("x"), pos("y")]),
            Entity::new("b", [pos("y"), pos("z")]),
        ])
        .unwrap();
        let p = build_supercategories(&kb, rational(1, 3), ClusterMode::ConnectedComponents)
            .unwrap();
        assert_eq!(p.blocks().len(), 2);
    }
}
