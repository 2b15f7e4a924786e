//! Fact triples, annotated fact universes, and the error and transformation
//! sets derived from them.

mod algebra;
mod fixture;
mod universe;

pub use algebra::{
    classify_substitution, derive_information_errors, derive_simplification_sets,
    detect_substitution, is_maximally_simple, substitution_errors, FactAlgebraError,
    InformationErrorSets, SimplificationSets, SubstitutionKind, SubstitutionVerdict,
};
pub use fixture::{parse_universe_fixture, FixtureError, FixtureErrors};
pub use universe::{
    validate_universe, AnnotatedFactUniverse, Concept, Fact, FactId, FactSet, Position,
    Subsumption, UniverseViolation,
};
