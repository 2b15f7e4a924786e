use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FactId(pub String);

impl FactId {
    pub fn new(id: impl Into<String>) -> Self {
        FactId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FactId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A concept token appearing as subject, relation or object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Concept(pub String);

impl Concept {
    pub fn new(token: impl Into<String>) -> Self {
        Concept(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Subject,
    Relation,
    Object,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Subject, Position::Relation, Position::Object];
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Subject => "subject",
            Position::Relation => "relation",
            Position::Object => "object",
        })
    }
}

/// A (subject, relation, object) triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub id: FactId,
    pub subject: Concept,
    pub relation: Concept,
    pub object: Concept,
}

impl Fact {
    pub fn new(id: &str, subject: &str, relation: &str, object: &str) -> Fact {
        Fact {
            id: FactId::new(id),
            subject: Concept::new(subject),
            relation: Concept::new(relation),
            object: Concept::new(object),
        }
    }

    pub fn element(&self, position: Position) -> &Concept {
        match position {
            Position::Subject => &self.subject,
            Position::Relation => &self.relation,
            Position::Object => &self.object,
        }
    }

    /// Positions at which the two triples carry different tokens.
    pub fn differing_positions(&self, other: &Fact) -> Vec<Position> {
        Position::ALL
            .into_iter()
            .filter(|p| self.element(*p) != other.element(*p))
            .collect()
    }
}

pub type FactSet = BTreeSet<FactId>;

/// The "is more specific than" order over concepts.
///
/// Declared pairs are closed transitively on construction; a cycle in the
/// declarations shows up as a concept narrower than itself and is reported by
/// [`validate_universe`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subsumption {
    declared: BTreeSet<(Concept, Concept)>,
    closure: BTreeSet<(Concept, Concept)>,
}

impl Subsumption {
    pub fn new(pairs: impl IntoIterator<Item = (Concept, Concept)>) -> Subsumption {
        let declared: BTreeSet<(Concept, Concept)> = pairs.into_iter().collect();
        let mut up: BTreeMap<&Concept, BTreeSet<&Concept>> = BTreeMap::new();
        for (narrow, broad) in &declared {
            up.entry(narrow).or_default().insert(broad);
        }
        let mut closure = BTreeSet::new();
        for &start in up.keys() {
            let mut stack: Vec<&Concept> = up[start].iter().copied().collect();
            let mut seen: BTreeSet<&Concept> = BTreeSet::new();
            while let Some(c) = stack.pop() {
                if seen.insert(c) {
                    if let Some(next) = up.get(c) {
                        stack.extend(next.iter().copied());
                    }
                }
            }
            for broad in seen {
                closure.insert((start.clone(), broad.clone()));
            }
        }
        Subsumption { declared, closure }
    }

    pub fn declare(narrower: &str, broader: &str) -> (Concept, Concept) {
        (Concept::new(narrower), Concept::new(broader))
    }

    /// `true` iff `a` is strictly more specific than `b`.
    pub fn is_narrower(&self, a: &Concept, b: &Concept) -> bool {
        a != b && self.closure.contains(&(a.clone(), b.clone()))
    }

    pub fn declared(&self) -> &BTreeSet<(Concept, Concept)> {
        &self.declared
    }

    /// Concepts that end up narrower than themselves.
    pub fn cyclic_concepts(&self) -> Vec<Concept> {
        self.closure
            .iter()
            .filter(|(a, b)| a == b)
            .map(|(a, _)| a.clone())
            .collect()
    }
}

/// Facts together with the annotated subsets the error definitions range
/// over. Truthfulness is stored as the true set; its complement within
/// `facts` is the false set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotatedFactUniverse {
    pub facts: BTreeMap<FactId, Fact>,
    pub source: FactSet,
    pub generation: FactSet,
    pub topic: FactSet,
    pub truthful: FactSet,
    pub important: FactSet,
    pub contradicts_source: FactSet,
    pub subsumption: Subsumption,
    /// `(f_src, f_gen)` pairs annotated as "f_src implies f_gen".
    pub implication_overrides: BTreeSet<(FactId, FactId)>,
}

impl AnnotatedFactUniverse {
    pub fn with_facts(facts: impl IntoIterator<Item = Fact>) -> Self {
        AnnotatedFactUniverse {
            facts: facts.into_iter().map(|f| (f.id.clone(), f)).collect(),
            ..Default::default()
        }
    }

    pub fn fact(&self, id: &FactId) -> Option<&Fact> {
        self.facts.get(id)
    }

    pub fn all_ids(&self) -> FactSet {
        self.facts.keys().cloned().collect()
    }

    pub fn false_facts(&self) -> FactSet {
        self.facts
            .keys()
            .filter(|id| !self.truthful.contains(*id))
            .cloned()
            .collect()
    }

    pub fn implies(&self, src: &FactId, gen: &FactId) -> bool {
        self.implication_overrides
            .contains(&(src.clone(), gen.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum UniverseViolation {
    UnknownFact { set: String, fact: FactId },
    EmptyElement { fact: FactId, position: Position },
    ImportantNotTrue { fact: FactId },
    ImportantOffTopic { fact: FactId },
    SourceNotTrue { fact: FactId },
    SubsumptionCycle { concepts: Vec<Concept> },
}

impl fmt::Display for UniverseViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniverseViolation::UnknownFact { set, fact } => {
                write!(f, "set `{set}` references unknown fact {fact}")
            }
            UniverseViolation::EmptyElement { fact, position } => {
                write!(f, "fact {fact} has an empty {position}")
            }
            UniverseViolation::ImportantNotTrue { fact } => {
                write!(f, "F_imp ⊄ F_true at {fact}")
            }
            UniverseViolation::ImportantOffTopic { fact } => {
                write!(f, "F_imp ⊄ F_topic at {fact}")
            }
            UniverseViolation::SourceNotTrue { fact } => {
                write!(f, "source fact not truthful: {fact}")
            }
            UniverseViolation::SubsumptionCycle { concepts } => {
                let names: Vec<&str> = concepts.iter().map(|c| c.as_str()).collect();
                write!(f, "subsumption cycle through {}", names.join(", "))
            }
        }
    }
}

/// Lists every broken universe invariant; empty means the universe is valid.
pub fn validate_universe(u: &AnnotatedFactUniverse) -> Vec<UniverseViolation> {
    let mut out = Vec::new();

    for fact in u.facts.values() {
        for p in Position::ALL {
            if fact.element(p).as_str().trim().is_empty() {
                out.push(UniverseViolation::EmptyElement {
                    fact: fact.id.clone(),
                    position: p,
                });
            }
        }
    }

    let named: [(&str, &FactSet); 6] = [
        ("source", &u.source),
        ("generation", &u.generation),
        ("topic", &u.topic),
        ("true", &u.truthful),
        ("important", &u.important),
        ("contradicts_source", &u.contradicts_source),
    ];
    for (name, set) in named {
        for id in set {
            if !u.facts.contains_key(id) {
                out.push(UniverseViolation::UnknownFact {
                    set: name.to_string(),
                    fact: id.clone(),
                });
            }
        }
    }
    for (src, gen) in &u.implication_overrides {
        for id in [src, gen] {
            if !u.facts.contains_key(id) {
                out.push(UniverseViolation::UnknownFact {
                    set: "implies".to_string(),
                    fact: id.clone(),
                });
            }
        }
    }

    for id in &u.important {
        if !u.truthful.contains(id) {
            out.push(UniverseViolation::ImportantNotTrue { fact: id.clone() });
        }
        if !u.topic.contains(id) {
            out.push(UniverseViolation::ImportantOffTopic { fact: id.clone() });
        }
    }
    for id in &u.source {
        if !u.truthful.contains(id) {
            out.push(UniverseViolation::SourceNotTrue { fact: id.clone() });
        }
    }

    let cyclic = u.subsumption.cyclic_concepts();
    if !cyclic.is_empty() {
        out.push(UniverseViolation::SubsumptionCycle { concepts: cyclic });
    }

    out
}
