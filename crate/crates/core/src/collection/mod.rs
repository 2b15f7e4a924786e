//! The annotation collection: records, the delimited file format, and the
//! distribution and self-consistency statistics computed over it.

mod consistency;
mod distribution;
mod format;
mod record;

pub use consistency::{consistency_rate, consistency_rates, ConsistencyRate};
pub use distribution::{code_row, distribution, DistributionReport, DistributionRow, RowKind};
pub use format::{
    collection_to_string, parse_collection, read_collection, write_collection, CollectionError,
    ParsedCollection, PositionedError, ValidationMode, COLUMNS, HEADER,
};
pub use record::{validate_records, AnnotationRecord, RecordViolation, ViolationKind};
