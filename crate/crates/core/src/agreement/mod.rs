//! Inter-annotator agreement: pairwise Cohen's kappa, Fleiss' kappa and the
//! share of unanimous items, per agreement class.

mod kappa;
mod report;

pub use kappa::{cohen_kappa, fleiss_kappa, unanimous_pct, AgreementError, RatingMatrix};
pub use report::{agreement_report, AgreementClass, AgreementReport, ClassAgreement, PairKappa};
