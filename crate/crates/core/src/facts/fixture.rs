//! TOML fixture format for annotated fact universes.
//!
//! ```toml
//! [[fact]]
//! id = "s1"
//! subject = "bees"
//! relation = "pollinate"
//! object = "crops"
//!
//! [sets]
//! source = ["s1"]
//! generation = ["g1"]
//! topic = ["s1", "g1"]
//! true = ["s1"]
//! important = ["s1"]
//! contradicts_source = []
//!
//! [[subsumption]]
//! narrower = "bees"
//! broader = "insects"
//!
//! [[implies]]
//! source = "s1"
//! generation = "g1"
//! ```
//!
//! Unknown keys, duplicate fact ids, empty triple elements and references to
//! undeclared facts are rejected with the line and column of the offending
//! value. Semantic invariants (important facts must be true, and so on) are
//! left to [`validate_universe`](super::validate_universe).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use super::universe::{AnnotatedFactUniverse, Concept, Fact, FactId, FactSet, Subsumption};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureError {
    pub line: usize,
    pub column: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}: {}",
            self.line, self.column, self.field, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct FixtureErrors(pub Vec<FixtureError>);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    #[serde(default)]
    fact: Vec<FactEntry>,
    #[serde(default)]
    sets: SetsEntry,
    #[serde(default)]
    subsumption: Vec<SubsumptionEntry>,
    #[serde(default)]
    implies: Vec<ImpliesEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactEntry {
    id: Spanned<String>,
    subject: Spanned<String>,
    relation: Spanned<String>,
    object: Spanned<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SetsEntry {
    #[serde(default)]
    source: Vec<Spanned<String>>,
    #[serde(default)]
    generation: Vec<Spanned<String>>,
    #[serde(default)]
    topic: Vec<Spanned<String>>,
    #[serde(default, rename = "true")]
    truthful: Vec<Spanned<String>>,
    #[serde(default)]
    important: Vec<Spanned<String>>,
    #[serde(default)]
    contradicts_source: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubsumptionEntry {
    narrower: Spanned<String>,
    broader: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ImpliesEntry {
    source: Spanned<String>,
    generation: Spanned<String>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, column)
}

struct Collector<'a> {
    text: &'a str,
    errors: Vec<FixtureError>,
}

impl Collector<'_> {
    fn push(&mut self, span: Range<usize>, field: impl Into<String>, message: impl Into<String>) {
        let (line, column) = line_col(self.text, span.start);
        self.errors.push(FixtureError {
            line,
            column,
            field: field.into(),
            message: message.into(),
        });
    }
}

/// Parses a universe fixture. All schema problems are collected before
/// returning.
pub fn parse_universe_fixture(text: &str) -> Result<AnnotatedFactUniverse, FixtureErrors> {
    let file: FixtureFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        FixtureErrors(vec![FixtureError {
            line,
            column,
            field: "document".to_string(),
            message: e.message().to_string(),
        }])
    })?;

    let mut c = Collector {
        text,
        errors: Vec::new(),
    };
    let mut universe = AnnotatedFactUniverse::default();

    for (i, entry) in file.fact.iter().enumerate() {
        let field = |name: &str| format!("fact[{i}].{name}");
        if entry.id.get_ref().trim().is_empty() {
            c.push(entry.id.span(), field("id"), "empty fact id");
            continue;
        }
        for (name, value) in [
            ("subject", &entry.subject),
            ("relation", &entry.relation),
            ("object", &entry.object),
        ] {
            if value.get_ref().trim().is_empty() {
                c.push(value.span(), field(name), "empty triple element");
            }
        }
        let fact = Fact {
            id: FactId::new(entry.id.get_ref().clone()),
            subject: Concept::new(entry.subject.get_ref().clone()),
            relation: Concept::new(entry.relation.get_ref().clone()),
            object: Concept::new(entry.object.get_ref().clone()),
        };
        if universe.facts.contains_key(&fact.id) {
            c.push(
                entry.id.span(),
                field("id"),
                format!("duplicate fact id `{}`", fact.id),
            );
            continue;
        }
        universe.facts.insert(fact.id.clone(), fact);
    }

    let known: BTreeSet<FactId> = universe.facts.keys().cloned().collect();
    let resolve = |c: &mut Collector, name: &str, refs: &[Spanned<String>]| -> FactSet {
        let mut out = FactSet::new();
        for (i, r) in refs.iter().enumerate() {
            let id = FactId::new(r.get_ref().clone());
            if known.contains(&id) {
                out.insert(id);
            } else {
                c.push(
                    r.span(),
                    format!("sets.{name}[{i}]"),
                    format!("unknown fact id `{id}`"),
                );
            }
        }
        out
    };

    universe.source = resolve(&mut c, "source", &file.sets.source);
    universe.generation = resolve(&mut c, "generation", &file.sets.generation);
    universe.topic = resolve(&mut c, "topic", &file.sets.topic);
    universe.truthful = resolve(&mut c, "true", &file.sets.truthful);
    universe.important = resolve(&mut c, "important", &file.sets.important);
    universe.contradicts_source =
        resolve(&mut c, "contradicts_source", &file.sets.contradicts_source);

    let mut pairs = Vec::new();
    for (i, s) in file.subsumption.iter().enumerate() {
        let (n, b) = (s.narrower.get_ref(), s.broader.get_ref());
        if n.trim().is_empty() || b.trim().is_empty() {
            c.push(s.narrower.span(), format!("subsumption[{i}]"), "empty concept");
        } else if n == b {
            c.push(
                s.narrower.span(),
                format!("subsumption[{i}]"),
                format!("`{n}` cannot be narrower than itself"),
            );
        } else {
            pairs.push((Concept::new(n.clone()), Concept::new(b.clone())));
        }
    }
    universe.subsumption = Subsumption::new(pairs);

    for (i, imp) in file.implies.iter().enumerate() {
        let src = FactId::new(imp.source.get_ref().clone());
        let gen = FactId::new(imp.generation.get_ref().clone());
        let mut ok = true;
        for (id, spanned, name) in [(&src, &imp.source, "source"), (&gen, &imp.generation, "generation")] {
            if !known.contains(id) {
                ok = false;
                c.push(
                    spanned.span(),
                    format!("implies[{i}].{name}"),
                    format!("unknown fact id `{id}`"),
                );
            }
        }
        if ok {
            universe.implication_overrides.insert((src, gen));
        }
    }

    if c.errors.is_empty() {
        Ok(universe)
    } else {
        Err(FixtureErrors(c.errors))
    }
}
