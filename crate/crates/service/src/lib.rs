//! Annotation collection service: per-annotator task queues with hidden
//! probes, submission validation, an append-only event log, and CSV export.

pub mod config;
pub mod http;
pub mod items;
pub mod log;
pub mod plan;
pub mod service;

use std::fs::File;

pub use config::{ConfigError, ServiceConfig};
pub use http::{router, serve, ErrorBody};
pub use items::{parse_items, Item, ItemsError, ITEMS_HEADER};
pub use plan::{build_queues, probe_item_id, QueueEntry};
pub use service::{
    Ack, FieldReason, Progress, Service, ServiceError, Submission, TaskAssignment, TaskView,
};

#[derive(Debug, thiserror::Error)]
pub enum StartError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("items file {path}: {source}")]
    Items {
        path: std::path::PathBuf,
        source: ItemsError,
    },
    #[error(transparent)]
    Service(#[from] ServiceError),
}

/// Validates the configuration, reads the items file and opens the service.
pub fn open_service(config: ServiceConfig) -> Result<Service, StartError> {
    config.validate()?;
    let items_err = |source| StartError::Items {
        path: config.items_path.clone(),
        source,
    };
    let file = File::open(&config.items_path).map_err(|e| items_err(ItemsError::Io(e)))?;
    let items = parse_items(file).map_err(items_err)?;
    Ok(Service::open(config, items)?)
}
