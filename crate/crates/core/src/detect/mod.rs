//! Evaluation of external error detectors from per-item score files:
//! any-error AUROC and per-category / per-code AUPRC.

mod eval;
mod metrics;
mod scores;

pub use eval::{
    evaluate, gold_labels, render_codes, render_eval, render_greater, EvalError, EvalReport,
    GoldMode, Metric, Target, TargetResult,
};
pub use metrics::{auprc, auroc, MetricError};
pub use scores::{
    parse_score_file, score_table_to_string, Orientation, ScoreFileError, ScoreTable,
    SCORE_HEADER,
};
