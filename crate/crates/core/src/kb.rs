//! Knowledge-base model: ground atoms, signed literals, entities, and
//! collections of entities.
//!
//! An entity is a finite *set* of literals — duplicates collapse on
//! construction — and a knowledge base is an ordered collection of entities
//! with pairwise-distinct ids. Everything here is immutable after
//! construction, so values can be shared freely across threads.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Characters that mark a literal as negated in the text format. Atom names
/// must not contain them.
pub const POLARITY_MARKERS: [char; 2] = ['!', '¬'];

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("atom name must be non-empty")]
    EmptyAtomName,
    #[error("atom name {0:?} contains a polarity marker")]
    PolarityMarkerInName(String),
    #[error("duplicate entity id \"{0}\"")]
    DuplicateEntityId(EntityId),
}

/// A ground atom: a predicate name plus an ordered tuple of ground term
/// strings (possibly empty). Equality is structural on `(name, args)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    name: String,
    args: Vec<String>,
}

impl Atom {
    pub fn new(
        name: impl Into<String>,
        args: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyAtomName);
        }
        if name.contains(POLARITY_MARKERS) {
            return Err(ModelError::PolarityMarkerInName(name));
        }
        Ok(Atom {
            name,
            args: args.into_iter().map(Into::into).collect(),
        })
    }

    /// A 0-ary atom (plain proposition).
    pub fn prop(name: impl Into<String>) -> Result<Self, ModelError> {
        Atom::new(name, Vec::<String>::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn args(&self) -> &[String] {
        &self.args
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(", "))?;
        }
        Ok(())
    }
}

/// Sign of a literal. `Negative` sorts before `Positive`, so `!p` precedes
/// `p` wherever literals are listed in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Negative => Polarity::Positive,
            Polarity::Positive => Polarity::Negative,
        }
    }
}

/// A signed ground atom: the unit of knowledge stored in entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    atom: Atom,
    polarity: Polarity,
}

impl Literal {
    pub fn new(atom: Atom, polarity: Polarity) -> Self {
        Literal { atom, polarity }
    }

    pub fn positive(atom: Atom) -> Self {
        Literal::new(atom, Polarity::Positive)
    }

    pub fn negative(atom: Atom) -> Self {
        Literal::new(atom, Polarity::Negative)
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    /// Same atom, flipped polarity. An involution: `l.complement().complement() == l`.
    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            polarity: self.polarity.flipped(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.polarity == Polarity::Negative {
            write!(f, "!")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Identifier of an entity within a knowledge base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId::new(s)
    }
}

impl From<String> for EntityId {
    fn from(s: String) -> Self {
        EntityId::new(s)
    }
}

/// An identified finite set of literals. Duplicate literals collapse on
/// construction; equality is order-insensitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    id: EntityId,
    literals: BTreeSet<Literal>,
}

impl Entity {
    pub fn new(id: impl Into<EntityId>, literals: impl IntoIterator<Item = Literal>) -> Self {
        Entity {
            id: id.into(),
            literals: literals.into_iter().collect(),
        }
    }

    pub fn id(&self) -> &EntityId {
        &self.id
    }

    pub fn literals(&self) -> &BTreeSet<Literal> {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, literal: &Literal) -> bool {
        self.literals.contains(literal)
    }

    /// True iff no atom occurs here with both polarities. The empty entity
    /// is consistent.
    pub fn is_internally_consistent(&self) -> bool {
        self.literals
            .iter()
            .all(|l| !self.literals.contains(&l.complement()))
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {{", self.id)?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered collection of entities with pairwise-distinct ids. Iteration
/// order is the input order, which keeps every downstream report
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeBase {
    entities: Vec<Entity>,
}

impl KnowledgeBase {
    pub fn new(entities: impl IntoIterator<Item = Entity>) -> Result<Self, ModelError> {
        let entities: Vec<Entity> = entities.into_iter().collect();
        let mut seen = BTreeSet::new();
        for e in &entities {
            if !seen.insert(e.id().clone()) {
                return Err(ModelError::DuplicateEntityId(e.id().clone()));
            }
        }
        Ok(KnowledgeBase { entities })
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn get(&self, id: &EntityId) -> Option<&Entity> {
        self.entities.iter().find(|e| e.id() == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Entity> {
        self.entities.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(name: &str) -> Literal {
        Literal::positive(Atom::prop(name).unwrap())
    }

    fn neg(name: &str) -> Literal {
        Literal::negative(Atom::prop(name).unwrap())
    }

    #[test]
    fn complement_flips_polarity() {
        assert_eq!(pos("p2").complement(), neg("p2"));
        assert_eq!(neg("p2").complement(), pos("p2"));
    }

    #[test]
    fn complement_is_involution() {
        let l = pos("fievre");
        assert_eq!(l.complement().complement(), l);
    }

    #[test]
    fn complement_preserves_atom() {
        let l = neg("toux");
        assert_eq!(l.complement().atom(), l.atom());
        assert_ne!(l.complement().polarity(), l.polarity());
    }

    #[test]
    fn atom_name_validation() {
        assert_eq!(Atom::prop(""), Err(ModelError::EmptyAtomName));
        assert_eq!(
            Atom::prop("!p"),
            Err(ModelError::PolarityMarkerInName("!p".into()))
        );
        assert_eq!(
            Atom::prop("a¬b"),
            Err(ModelError::PolarityMarkerInName("a¬b".into()))
        );
        assert!(Atom::new("rel", ["a", "b"]).is_ok());
    }

    #[test]
    fn consistency_of_medical_entity() {
        let k1 = Entity::new("K1", [pos("fievre"), pos("toux"), neg("maux_de_tete")]);
        assert!(k1.is_internally_consistent());
    }

    #[test]
    fn empty_entity_is_consistent() {
        assert!(Entity::new("K", []).is_internally_consistent());
    }

    #[test]
    fn complementary_pair_is_inconsistent() {
        let k = Entity::new("K", [pos("p"), neg("p"), pos("q")]);
        assert!(!k.is_internally_consistent());
    }

    #[test]
    fn consistency_matches_pointwise_definition() {
        let entities = [
            Entity::new("A", []),
            Entity::new("B", [pos("p"), pos("q")]),
            Entity::new("C", [pos("p"), neg("p")]),
            Entity::new("D", [neg("p"), neg("q"), pos("r")]),
        ];
        for k in &entities {
            let pointwise = k.literals().iter().all(|l| !k.contains(&l.complement()));
            assert_eq!(k.is_internally_consistent(), pointwise, "{k}");
        }
    }

    #[test]
    fn entity_deduplicates_literals() {
        let k = Entity::new("K", [pos("p"), pos("p")]);
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn entity_equality_is_order_insensitive() {
        let a = Entity::new("K", [pos("p"), neg("q"), pos("r")]);
        let b = Entity::new("K", [pos("r"), pos("p"), neg("q")]);
        assert_eq!(a, b);
    }

    #[test]
    fn kb_rejects_duplicate_ids() {
        let result = KnowledgeBase::new([
            Entity::new("K1", [pos("p")]),
            Entity::new("K1", [pos("q")]),
        ]);
        assert_eq!(result, Err(ModelError::DuplicateEntityId("K1".into())));
    }

    #[test]
    fn kb_preserves_input_order() {
        let kb = KnowledgeBase::new([
            Entity::new("B", [pos("p")]),
            Entity::new("A", [pos("q")]),
        ])
        .unwrap();
        let ids: Vec<&str> = kb.iter().map(|e| e.id().as_str()).collect();
        assert_eq!(ids, ["B", "A"]);
        assert!(kb.get(&"A".into()).is_some());
        assert!(kb.get(&"Z".into()).is_none());
    }

    #[test]
    fn literal_ordering_puts_negative_first() {
        let k = Entity::new("K", [pos("p"), neg("p")]);
        let rendered: Vec<String> = k.literals().iter().map(|l| l.to_string()).collect();
        assert_eq!(rendered, ["!p", "p"]);
    }

    #[test]
    fn model_values_cross_threads() {
        fn check<T: Send + Sync>() {}
        check::<Atom>();
        check::<Literal>();
        check::<Entity>();
        check::<KnowledgeBase>();
    }

    #[test]
    fn display_forms() {
        assert_eq!(pos("p").to_string(), "p");
        assert_eq!(neg("p").to_string(), "!p");
        let a = Atom::new("rel", ["x", "y"]).unwrap();
        assert_eq!(Literal::negative(a).to_string(), "!rel(x, y)");
        let k = Entity::new("K", [pos("b"), neg("a")]);
        assert_eq!(k.to_string(), "K = {!a, b}");
    }
}
