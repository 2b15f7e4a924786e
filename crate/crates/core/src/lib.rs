//! Error analysis toolkit for automatic text simplification.
//!
//! - [`taxonomy`]: the fourteen error codes, their categories, and label vectors.
//! - [`facts`]: fact-triple universes and the set definitions of information
//!   and simplification errors.
//! - [`collection`]: the annotation collection format and distribution statistics.
//! - [`agreement`]: Cohen's and Fleiss' kappa and unanimity.
//! - [`detect`]: AUROC / AUPRC evaluation of external error detectors.

pub mod agreement;
pub mod collection;
pub mod detect;
pub mod facts;
pub mod fixtures;
mod measure;
pub mod ratio;
pub mod table;
pub mod taxonomy;

pub use measure::NotMeasurable;

pub use ratio::Ratio;
pub use taxonomy::{
    aggregate_categories, category_of, validate_label_vector, Category, CategoryFlags, ErrorCode,
    LabelVector, LabelViolation, Taxonomy,
};
