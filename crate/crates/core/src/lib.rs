//! Paraconsistent similarity for knowledge bases of ground literals.
//!
//! Entities are finite sets of signed ground atoms. Comparing two entities
//! splits their property universe into shared literals, contradictory atoms
//! (asserted with opposite polarities across the pair), and the total
//! union; the net score `S*` rewards the shared fraction and penalizes the
//! contradictory fraction, all in exact rational arithmetic. On top of the
//! measure sit:
//!
//! - a contradiction extractor and minimal-repair machinery for entities
//!   that contradict themselves ([`contradiction`]),
//! - threshold clustering into super-categories with a verified separation
//!   guarantee ([`hierarchy`]),
//! - the classical Jaccard index as a contradiction-blind baseline
//!   ([`similarity::jaccard`]),
//! - a line-oriented text format for knowledge bases ([`format`]) and a
//!   versioned JSON form of every report ([`structured`]),
//! - a CLI exposing the whole surface ([`cli`]).
//!
//! ```
//! use parasim::format::parse_kb;
//! use parasim::similarity::score;
//! use parasim::Rational;
//!
//! let kb = parse_kb("K1: p1, p2, !p3\nK2: p2, p3, !p1\n").unwrap();
//! let s = score(&kb.entities()[0], &kb.entities()[1]);
//! assert_eq!(s, Rational::new(-1, 5));
//! ```

pub mod cli;
pub mod contradiction;
pub mod format;
pub mod hierarchy;
pub mod kb;
pub mod render;
pub mod similarity;
pub mod structured;

/// Exact rational number used for every score and threshold.
pub type Rational = num_rational::Rational64;

pub use contradiction::{RepairPlan, RepairPolicy, RepairReport};
pub use hierarchy::{ClusterMode, HierarchyTrace, SuperCategoryPartition};
pub use kb::{Atom, Entity, EntityId, KnowledgeBase, Literal, Polarity};
pub use similarity::{JaccardMode, PropertyPartition, SimilarityBreakdown, SimilarityMatrix};
