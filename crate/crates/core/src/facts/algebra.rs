//! Set-algebraic error definitions over an annotated fact universe.
//!
//! Chains such as `F_src \ F_imp \ F_gen` associate to the left.

use serde::{Deserialize, Serialize};

use super::universe::{
    validate_universe, AnnotatedFactUniverse, Fact, FactId, FactSet, Position, Subsumption,
    UniverseViolation,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactAlgebraError {
    #[error("invalid fact universe: {}", join_violations(.0))]
    InvalidUniverse(Vec<UniverseViolation>),
    #[error("fact {0} is not in the universe")]
    UnknownFact(FactId),
    #[error("fact {fact} is not in the {set} set")]
    NotInSet { fact: FactId, set: &'static str },
}

fn join_violations(v: &[UniverseViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn ensure_valid(u: &AnnotatedFactUniverse) -> Result<(), FactAlgebraError> {
    let violations = validate_universe(u);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(FactAlgebraError::InvalidUniverse(violations))
    }
}

fn inter(a: &FactSet, b: &FactSet) -> FactSet {
    a.intersection(b).cloned().collect()
}

fn minus(a: &FactSet, b: &FactSet) -> FactSet {
    a.difference(b).cloned().collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InformationErrorSets {
    /// `F_gen \ F_topic`
    pub topic_shift: FactSet,
    /// `F_gen ∩ F_topic ∩ F_cont`
    pub faithfulness: FactSet,
    /// `F_gen ∩ F_topic ∩ F_false \ F_cont`
    pub factuality: FactSet,
}

pub fn derive_information_errors(
    u: &AnnotatedFactUniverse,
) -> Result<InformationErrorSets, FactAlgebraError> {
    ensure_valid(u)?;
    let gen_topic = inter(&u.generation, &u.topic);
    Ok(InformationErrorSets {
        topic_shift: minus(&u.generation, &u.topic),
        faithfulness: inter(&gen_topic, &u.contradicts_source),
        factuality: minus(&inter(&gen_topic, &u.false_facts()), &u.contradicts_source),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplificationSets {
    /// `F_gen \ F_imp`
    pub out_of_scope: FactSet,
    /// `out_of_scope \ F_src`: the "new and not important" reading.
    pub out_of_scope_new: FactSet,
    /// `F_src ∩ F_imp \ F_gen`
    pub loss: FactSet,
    /// `F_src \ F_imp \ F_gen`
    pub summarization: FactSet,
    /// `F_gen ∩ F_imp \ F_src`
    pub clarification: FactSet,
    /// `F_imp \ F_src \ F_gen`
    pub potential_clarification: FactSet,
}

pub fn derive_simplification_sets(
    u: &AnnotatedFactUniverse,
) -> Result<SimplificationSets, FactAlgebraError> {
    ensure_valid(u)?;
    let out_of_scope = minus(&u.generation, &u.important);
    let out_of_scope_new = minus(&out_of_scope, &u.source);
    Ok(SimplificationSets {
        out_of_scope,
        out_of_scope_new,
        loss: minus(&inter(&u.source, &u.important), &u.generation),
        summarization: minus(&minus(&u.source, &u.important), &u.generation),
        clarification: minus(&inter(&u.generation, &u.important), &u.source),
        potential_clarification: minus(&minus(&u.important, &u.source), &u.generation),
    })
}

/// A source is maximally simple when every source fact is important and
/// every important fact is already in the source.
pub fn is_maximally_simple(u: &AnnotatedFactUniverse) -> bool {
    u.source == u.important
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubstitutionKind {
    Overgeneralization,
    Overspecification,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionVerdict {
    pub kind: SubstitutionKind,
    /// Set whenever exactly one position differs, regardless of `kind`.
    pub differing_position: Option<Position>,
}

impl SubstitutionVerdict {
    fn none(position: Option<Position>) -> Self {
        SubstitutionVerdict {
            kind: SubstitutionKind::None,
            differing_position: position,
        }
    }

    pub fn is_error(&self) -> bool {
        self.kind != SubstitutionKind::None
    }
}

/// Classifies a single-element substitution between two triples.
///
/// `src_implies_gen` carries the annotated entailment: when the source fact
/// still implies the generated one, the reformulation is benign.
pub fn classify_substitution(
    src: &Fact,
    gen: &Fact,
    subsumption: &Subsumption,
    src_implies_gen: bool,
) -> SubstitutionVerdict {
    let differing = src.differing_positions(gen);
    let [position] = differing[..] else {
        return SubstitutionVerdict::none(None);
    };
    if src_implies_gen {
        return SubstitutionVerdict::none(Some(position));
    }
    let (e_src, e_gen) = (src.element(position), gen.element(position));
    let kind = if subsumption.is_narrower(e_src, e_gen) {
        SubstitutionKind::Overgeneralization
    } else if subsumption.is_narrower(e_gen, e_src) {
        SubstitutionKind::Overspecification
    } else {
        SubstitutionKind::None
    };
    SubstitutionVerdict {
        kind,
        differing_position: Some(position),
    }
}

/// Checks a (source fact, generated fact) pair for over-generalization or
/// over-specification using the universe's subsumption order and
/// implication overrides.
pub fn detect_substitution(
    src: &FactId,
    gen: &FactId,
    u: &AnnotatedFactUniverse,
) -> Result<SubstitutionVerdict, FactAlgebraError> {
    let f_src = u
        .fact(src)
        .ok_or_else(|| FactAlgebraError::UnknownFact(src.clone()))?;
    let f_gen = u
        .fact(gen)
        .ok_or_else(|| FactAlgebraError::UnknownFact(gen.clone()))?;
    if !u.source.contains(src) {
        return Err(FactAlgebraError::NotInSet {
            fact: src.clone(),
            set: "source",
        });
    }
    if !u.generation.contains(gen) {
        return Err(FactAlgebraError::NotInSet {
            fact: gen.clone(),
            set: "generation",
        });
    }
    Ok(classify_substitution(
        f_src,
        f_gen,
        &u.subsumption,
        u.implies(src, gen),
    ))
}

/// Every (source, generation) pair whose verdict is an error, in id order.
pub fn substitution_errors(
    u: &AnnotatedFactUniverse,
) -> Vec<(FactId, FactId, SubstitutionVerdict)> {
    let mut out = Vec::new();
    for s in &u.source {
        for g in &u.generation {
            if let Ok(v) = detect_substitution(s, g, u) {
                if v.is_error() {
                    out.push((s.clone(), g.clone(), v));
                }
            }
        }
    }
    out
}
