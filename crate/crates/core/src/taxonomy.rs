//! The error taxonomy: four greater categories, fourteen leaf codes, and the
//! label vector annotators fill in for one (source, simplification) item.
//!
//! Definitions and worked examples live in `data/taxonomy.toml` and are
//! loaded once into an immutable [`Taxonomy`]. The enums here carry only the
//! vocabulary (identifiers, short names, category membership).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TaxonomyError {
    #[error("unknown error code `{0}`")]
    UnknownCode(String),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("invalid taxonomy data: {0}")]
    Data(String),
}

/// A greater error category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Fluency,
    Alignment,
    Information,
    Simplification,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Fluency,
        Category::Alignment,
        Category::Information,
        Category::Simplification,
    ];

    pub fn letter(self) -> char {
        match self {
            Category::Fluency => 'A',
            Category::Alignment => 'B',
            Category::Information => 'C',
            Category::Simplification => 'D',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Fluency => "Fluency",
            Category::Alignment => "Alignment",
            Category::Information => "Information",
            Category::Simplification => "Simplification",
        }
    }

    /// `"A. Fluency"` style label used in rendered tables.
    pub fn label(self) -> String {
        format!("{}. {}", self.letter(), self.name())
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Leaf codes belonging to this category, in canonical order.
    pub fn codes(self) -> impl Iterator<Item = ErrorCode> {
        ErrorCode::ALL.into_iter().filter(move |c| c.category() == self)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Category::ALL
            .into_iter()
            .find(|c| {
                c.name().eq_ignore_ascii_case(t)
                    || (t.len() == 1 && t.eq_ignore_ascii_case(&c.letter().to_string()))
            })
            .ok_or_else(|| TaxonomyError::UnknownCategory(s.to_string()))
    }
}

/// One of the fourteen leaf error codes.
///
/// Identifiers use the underscore form (`D1_1`); [`ErrorCode::display_code`]
/// gives the dotted form (`D1.1`) used in rendered reports.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorCode {
    A1,
    A2,
    A3,
    A4,
    A5,
    B1,
    B2,
    C1,
    C2,
    C3,
    D1_1,
    D1_2,
    D2_1,
    D2_2,
}

pub const CODE_COUNT: usize = 14;

impl ErrorCode {
    pub const ALL: [ErrorCode; CODE_COUNT] = [
        ErrorCode::A1,
        ErrorCode::A2,
        ErrorCode::A3,
        ErrorCode::A4,
        ErrorCode::A5,
        ErrorCode::B1,
        ErrorCode::B2,
        ErrorCode::C1,
        ErrorCode::C2,
        ErrorCode::C3,
        ErrorCode::D1_1,
        ErrorCode::D1_2,
        ErrorCode::D2_1,
        ErrorCode::D2_2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn id(self) -> &'static str {
        match self {
            ErrorCode::A1 => "A1",
            ErrorCode::A2 => "A2",
            ErrorCode::A3 => "A3",
            ErrorCode::A4 => "A4",
            ErrorCode::A5 => "A5",
            ErrorCode::B1 => "B1",
            ErrorCode::B2 => "B2",
            ErrorCode::C1 => "C1",
            ErrorCode::C2 => "C2",
            ErrorCode::C3 => "C3",
            ErrorCode::D1_1 => "D1_1",
            ErrorCode::D1_2 => "D1_2",
            ErrorCode::D2_1 => "D2_1",
            ErrorCode::D2_2 => "D2_2",
        }
    }

    pub fn display_code(self) -> &'static str {
        match self {
            ErrorCode::D1_1 => "D1.1",
            ErrorCode::D1_2 => "D1.2",
            ErrorCode::D2_1 => "D2.1",
            ErrorCode::D2_2 => "D2.2",
            other => other.id(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorCode::A1 => "Random generation",
            ErrorCode::A2 => "Syntax error",
            ErrorCode::A3 => "Contradiction",
            ErrorCode::A4 => "Punctuation/grammar error",
            ErrorCode::A5 => "Redundancy",
            ErrorCode::B1 => "Format misalignment",
            ErrorCode::B2 => "Prompt misalignment",
            ErrorCode::C1 => "Factuality hallucination",
            ErrorCode::C2 => "Faithfulness hallucination",
            ErrorCode::C3 => "Topic shift",
            ErrorCode::D1_1 => "Overgeneralization",
            ErrorCode::D1_2 => "Overspecification",
            ErrorCode::D2_1 => "Loss of informative content",
            ErrorCode::D2_2 => "Out-of-scope generation",
        }
    }

    /// `"D2.1. Loss of informative content"`
    pub fn label(self) -> String {
        format!("{}. {}", self.display_code(), self.name())
    }

    pub fn category(self) -> Category {
        match self {
            ErrorCode::A1 | ErrorCode::A2 | ErrorCode::A3 | ErrorCode::A4 | ErrorCode::A5 => {
                Category::Fluency
            }
            ErrorCode::B1 | ErrorCode::B2 => Category::Alignment,
            ErrorCode::C1 | ErrorCode::C2 | ErrorCode::C3 => Category::Information,
            ErrorCode::D1_1 | ErrorCode::D1_2 | ErrorCode::D2_1 | ErrorCode::D2_2 => {
                Category::Simplification
            }
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Accepts both `D1_1` and `D1.1`.
impl FromStr for ErrorCode {
    type Err = TaxonomyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ErrorCode::ALL
            .into_iter()
            .find(|c| c.id() == s || c.display_code() == s)
            .ok_or_else(|| TaxonomyError::UnknownCode(s.to_string()))
    }
}

impl Serialize for ErrorCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for ErrorCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn category_of(code: ErrorCode) -> Category {
    code.category()
}

/// Parses a code token, rejecting anything outside the fourteen leaf codes.
pub fn parse_code(token: &str) -> Result<ErrorCode, TaxonomyError> {
    token.parse()
}

/// One annotator's judgement of one item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "LabelVectorRepr", into = "LabelVectorRepr")]
pub struct LabelVector {
    pub no_error: bool,
    flags: [bool; CODE_COUNT],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelVectorRepr {
    no_error: bool,
    #[serde(default)]
    flags: BTreeMap<ErrorCode, bool>,
}

impl From<LabelVector> for LabelVectorRepr {
    fn from(v: LabelVector) -> Self {
        LabelVectorRepr {
            no_error: v.no_error,
            flags: ErrorCode::ALL.into_iter().map(|c| (c, v.get(c))).collect(),
        }
    }
}

impl From<LabelVectorRepr> for LabelVector {
    fn from(r: LabelVectorRepr) -> Self {
        let mut v = LabelVector {
            no_error: r.no_error,
            ..Default::default()
        };
        for (code, on) in r.flags {
            v.set(code, on);
        }
        v
    }
}

impl LabelVector {
    pub fn no_error() -> Self {
        LabelVector {
            no_error: true,
            flags: [false; CODE_COUNT],
        }
    }

    /// A vector flagging exactly `codes`; `no_error` is set iff `codes` is empty.
    pub fn with_codes(codes: &[ErrorCode]) -> Self {
        let mut v = LabelVector::default();
        for &c in codes {
            v.set(c, true);
        }
        v.no_error = codes.is_empty();
        v
    }

    pub fn get(&self, code: ErrorCode) -> bool {
        self.flags[code.index()]
    }

    pub fn set(&mut self, code: ErrorCode, on: bool) {
        self.flags[code.index()] = on;
    }

    pub fn flags(&self) -> &[bool; CODE_COUNT] {
        &self.flags
    }

    pub fn flagged(&self) -> impl Iterator<Item = ErrorCode> + '_ {
        ErrorCode::ALL.into_iter().filter(|c| self.get(*c))
    }

    pub fn has_any_flag(&self) -> bool {
        self.flags.iter().any(|&f| f)
    }

    pub fn any_error(&self) -> bool {
        !self.no_error
    }
}

/// A breach of the no-error / flag biconditional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "code", rename_all = "snake_case")]
pub enum LabelViolation {
    NoErrorConflict(ErrorCode),
    EmptyErrorSet,
}

impl fmt::Display for LabelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelViolation::NoErrorConflict(c) => write!(f, "no_error/{} conflict", c.id()),
            LabelViolation::EmptyErrorSet => f.write_str("empty error set without no_error"),
        }
    }
}

/// Returns one violation per flag set alongside `no_error`, or a single
/// violation when nothing at all is marked.
pub fn validate_label_vector(v: &LabelVector) -> Vec<LabelViolation> {
    if v.no_error {
        v.flagged().map(LabelViolation::NoErrorConflict).collect()
    } else if !v.has_any_flag() {
        vec![LabelViolation::EmptyErrorSet]
    } else {
        Vec::new()
    }
}

/// Category-level view of a label vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFlags {
    categories: [bool; 4],
    pub any_error: bool,
}

impl CategoryFlags {
    pub fn get(&self, category: Category) -> bool {
        self.categories[category.index()]
    }

    pub fn to_map(&self) -> BTreeMap<Category, bool> {
        Category::ALL.into_iter().map(|c| (c, self.get(c))).collect()
    }
}

/// A category is flagged iff any of its codes is; `any_error` mirrors
/// `!no_error`.
pub fn aggregate_categories(v: &LabelVector) -> CategoryFlags {
    let mut categories = [false; 4];
    for code in v.flagged() {
        categories[code.category().index()] = true;
    }
    CategoryFlags {
        categories,
        any_error: v.any_error(),
    }
}

// ---------------------------------------------------------------------------
// Definitions and examples

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub source: String,
    pub simplification: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyEntry {
    pub code: ErrorCode,
    pub definition: String,
    #[serde(default)]
    pub details: Vec<String>,
    #[serde(default)]
    pub note: Option<String>,
    #[serde(rename = "example")]
    pub examples: Vec<Example>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryInfo {
    pub id: Category,
    pub focus: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaxonomyFile {
    category: Vec<CategoryInfo>,
    entry: Vec<TaxonomyEntry>,
}

/// The loaded taxonomy. Immutable once built.
#[derive(Debug, Clone)]
pub struct Taxonomy {
    categories: Vec<CategoryInfo>,
    entries: Vec<TaxonomyEntry>,
}

const BUILTIN: &str = include_str!("../data/taxonomy.toml");

impl Taxonomy {
    /// The embedded taxonomy.
    pub fn builtin() -> &'static Taxonomy {
        static CELL: OnceLock<Taxonomy> = OnceLock::new();
        CELL.get_or_init(|| Taxonomy::from_toml(BUILTIN).expect("embedded taxonomy is valid"))
    }

    pub fn from_toml(text: &str) -> Result<Taxonomy, TaxonomyError> {
        let file: TaxonomyFile =
            toml::from_str(text).map_err(|e| TaxonomyError::Data(e.to_string()))?;

        let mut categories = Vec::with_capacity(4);
        for cat in Category::ALL {
            let mut found = file.category.iter().filter(|c| c.id == cat);
            let info = found
                .next()
                .ok_or_else(|| TaxonomyError::Data(format!("category {cat} missing")))?;
            if found.next().is_some() {
                return Err(TaxonomyError::Data(format!("category {cat} listed twice")));
            }
            categories.push(info.clone());
        }

        let mut entries = Vec::with_capacity(CODE_COUNT);
        for code in ErrorCode::ALL {
            let mut found = file.entry.iter().filter(|e| e.code == code);
            let entry = found
                .next()
                .ok_or_else(|| TaxonomyError::Data(format!("code {code} has no entry")))?;
            if found.next().is_some() {
                return Err(TaxonomyError::Data(format!("code {code} listed twice")));
            }
            if entry.definition.trim().is_empty() {
                return Err(TaxonomyError::Data(format!("code {code} has an empty definition")));
            }
            if entry.examples.is_empty() {
                return Err(TaxonomyError::Data(format!("code {code} has no example")));
            }
            entries.push(entry.clone());
        }

        Ok(Taxonomy {
            categories,
            entries,
        })
    }

    pub fn entry(&self, code: ErrorCode) -> &TaxonomyEntry {
        &self.entries[code.index()]
    }

    pub fn entries(&self) -> &[TaxonomyEntry] {
        &self.entries
    }

    pub fn category(&self, category: Category) -> &CategoryInfo {
        &self.categories[category.index()]
    }

    /// Key/value tree consumed by the annotation UI and the docs generator.
    /// Categories and codes appear in canonical A1..D2_2 order.
    pub fn document(&self) -> TaxonomyDocument {
        TaxonomyDocument {
            categories: Category::ALL
                .into_iter()
                .map(|cat| CategoryDocument {
                    id: cat,
                    letter: cat.letter().to_string(),
                    label: cat.label(),
                    focus: self.category(cat).focus.clone(),
                    codes: cat
                        .codes()
                        .map(|code| {
                            let e = self.entry(code);
                            CodeDocument {
                                code,
                                display: code.display_code().to_string(),
                                name: code.name().to_string(),
                                definition: e.definition.clone(),
                                details: e.details.clone(),
                                note: e.note.clone(),
                                examples: e.examples.clone(),
                            }
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomyDocument {
    pub categories: Vec<CategoryDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDocument {
    pub id: Category,
    pub letter: String,
    pub label: String,
    pub focus: String,
    pub codes: Vec<CodeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub code: ErrorCode,
    pub display: String,
    pub name: String,
    pub definition: String,
    pub details: Vec<String>,
    pub note: Option<String>,
    pub examples: Vec<Example>,
}
