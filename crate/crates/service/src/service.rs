use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use errata_core::collection::{collection_to_string, AnnotationRecord};
use errata_core::taxonomy::{validate_label_vector, LabelViolation, TaxonomyDocument};
use errata_core::{LabelVector, Taxonomy};
use serde::{Deserialize, Serialize};

use crate::config::ServiceConfig;
use crate::items::Item;
use crate::log::{Event, EventLog, LogError};
use crate::plan::{build_queues, probe_item_id, QueueEntry};

/// A handed-out task as the server sees it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskAssignment {
    pub task_id: String,
    pub item_id: String,
    pub annotator_id: String,
    pub source_text: String,
    pub simplified_text: String,
    pub issued_at: DateTime<Utc>,
    #[serde(skip)]
    pub is_probe: bool,
}

/// What a client receives for a task. Carries no item id, so probes cannot
/// be told apart from ordinary items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskView {
    pub task_id: String,
    pub annotator_id: String,
    pub source_text: String,
    pub simplified_text: String,
    pub issued_at: DateTime<Utc>,
}

impl From<&TaskAssignment> for TaskView {
    fn from(t: &TaskAssignment) -> Self {
        TaskView {
            task_id: t.task_id.clone(),
            annotator_id: t.annotator_id.clone(),
            source_text: t.source_text.clone(),
            simplified_text: t.simplified_text.clone(),
            issued_at: t.issued_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub task_id: String,
    pub annotator_id: String,
    pub labels: LabelVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ack {
    pub task_id: String,
    pub accepted: bool,
    /// True when this replaces an earlier submission for the same task.
    pub supersedes: bool,
    pub submitted_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub annotator_id: String,
    pub total: usize,
    pub issued: usize,
    pub submitted: usize,
    pub remaining: usize,
}

/// A field-level reason a submission was refused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldReason {
    pub field: String,
    pub message: String,
}

fn label_reasons(violations: &[LabelViolation]) -> Vec<FieldReason> {
    violations
        .iter()
        .map(|v| FieldReason {
            field: match v {
                LabelViolation::NoErrorConflict(code) => format!("labels.flags.{}", code.id()),
                LabelViolation::EmptyErrorSet => "labels.no_error".to_string(),
            },
            message: v.to_string(),
        })
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("unknown annotator `{0}`")]
    UnknownAnnotator(String),
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("task `{task_id}` is not assigned to `{annotator_id}`")]
    NotAssigned {
        task_id: String,
        annotator_id: String,
    },
    #[error("invalid labels: {}", .0.iter().map(|r| r.message.as_str()).collect::<Vec<_>>().join("; "))]
    InvalidLabels(Vec<FieldReason>),
    #[error("event log does not match the configured plan: {0}")]
    Replay(String),
    #[error(transparent)]
    Log(#[from] LogError),
}

struct State {
    queues: BTreeMap<String, Vec<QueueEntry>>,
    cursor: HashMap<String, usize>,
    tasks: HashMap<String, TaskAssignment>,
    /// Task ids in issuance order.
    order: Vec<String>,
    latest: HashMap<String, LabelVector>,
    log: EventLog,
}

/// Task dispensing, submission and export over a single append-only log.
/// All mutations go through one lock, which also guards the log writer.
pub struct Service {
    config: ServiceConfig,
    items: Vec<Item>,
    state: Mutex<State>,
}

fn task_id(annotator: &str, position: usize) -> String {
    format!("{annotator}-{position:04}")
}

impl Service {
    /// Builds the plan from the configuration and replays the event log.
    pub fn open(config: ServiceConfig, items: Vec<Item>) -> Result<Service, ServiceError> {
        let queues = build_queues(items.len(), &config);
        let (log, events) = EventLog::open(&config.data_path)?;
        let mut state = State {
            cursor: queues.keys().map(|a| (a.clone(), 0)).collect(),
            queues,
            tasks: HashMap::new(),
            order: Vec::new(),
            latest: HashMap::new(),
            log,
        };
        for event in events {
            replay(&mut state, &items, event)?;
        }
        Ok(Service {
            config,
            items,
            state: Mutex::new(state),
        })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn annotators(&self) -> &[String] {
        &self.config.annotators
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Issues the next queue entry for `annotator`, or `None` when the queue
    /// is exhausted.
    pub fn next_task(&self, annotator: &str) -> Result<Option<TaskAssignment>, ServiceError> {
        let mut st = self.lock();
        let queue = st
            .queues
            .get(annotator)
            .ok_or_else(|| ServiceError::UnknownAnnotator(annotator.to_string()))?;
        let pos = st.cursor[annotator];
        let Some(&entry) = queue.get(pos) else {
            return Ok(None);
        };
        let item = &self.items[entry.item];
        let task = TaskAssignment {
            task_id: task_id(annotator, pos),
            item_id: item.item_id.clone(),
            annotator_id: annotator.to_string(),
            source_text: item.source_text.clone(),
            simplified_text: item.simplified_text.clone(),
            issued_at: Utc::now(),
            is_probe: entry.is_probe,
        };
        st.log.append(&Event::Issued {
            task_id: task.task_id.clone(),
            annotator_id: annotator.to_string(),
            position: pos,
            item_id: task.item_id.clone(),
            is_probe: task.is_probe,
            issued_at: task.issued_at,
        })?;
        st.cursor.insert(annotator.to_string(), pos + 1);
        st.order.push(task.task_id.clone());
        st.tasks.insert(task.task_id.clone(), task.clone());
        Ok(Some(task))
    }

    /// Validates and records a submission. A later submission for the same
    /// task replaces the earlier one at export time.
    pub fn submit(&self, sub: &Submission) -> Result<Ack, ServiceError> {
        let mut st = self.lock();
        let task = st
            .tasks
            .get(&sub.task_id)
            .ok_or_else(|| ServiceError::UnknownTask(sub.task_id.clone()))?;
        if task.annotator_id != sub.annotator_id {
            return Err(ServiceError::NotAssigned {
                task_id: sub.task_id.clone(),
                annotator_id: sub.annotator_id.clone(),
            });
        }
        let violations = validate_label_vector(&sub.labels);
        if !violations.is_empty() {
            return Err(ServiceError::InvalidLabels(label_reasons(&violations)));
        }
        let supersedes = st.latest.contains_key(&sub.task_id);
        let submitted_at = Utc::now();
        st.log.append(&Event::Submitted {
            task_id: sub.task_id.clone(),
            annotator_id: sub.annotator_id.clone(),
            labels: sub.labels,
            supersedes,
            submitted_at,
        })?;
        st.latest.insert(sub.task_id.clone(), sub.labels);
        Ok(Ack {
            task_id: sub.task_id.clone(),
            accepted: true,
            supersedes,
            submitted_at,
        })
    }

    pub fn progress(&self, annotator: &str) -> Result<Progress, ServiceError> {
        let st = self.lock();
        let queue = st
            .queues
            .get(annotator)
            .ok_or_else(|| ServiceError::UnknownAnnotator(annotator.to_string()))?;
        let issued = st.cursor[annotator];
        let submitted = st
            .latest
            .keys()
            .filter(|t| st.tasks[*t].annotator_id == annotator)
            .count();
        Ok(Progress {
            annotator_id: annotator.to_string(),
            total: queue.len(),
            issued,
            submitted,
            remaining: queue.len() - issued,
        })
    }

    pub fn taxonomy(&self) -> TaxonomyDocument {
        Taxonomy::builtin().document()
    }

    /// The latest submission of every task, in order of issuance. Probe rows
    /// carry `duplicate_of`; a probe whose original has not been submitted
    /// by the same annotator is held back so the export always validates.
    pub fn export_records(&self) -> Vec<AnnotationRecord> {
        let st = self.lock();
        let by_id: HashMap<&str, &Item> =
            self.items.iter().map(|i| (i.item_id.as_str(), i)).collect();
        let submitted_originals: HashSet<(&str, &str)> = st
            .order
            .iter()
            .filter(|t| st.latest.contains_key(*t))
            .map(|t| &st.tasks[t])
            .filter(|t| !t.is_probe)
            .map(|t| (t.item_id.as_str(), t.annotator_id.as_str()))
            .collect();
        let mut out = Vec::new();
        for tid in &st.order {
            let Some(labels) = st.latest.get(tid) else {
                continue;
            };
            let task = &st.tasks[tid];
            let item = by_id[task.item_id.as_str()];
            let (item_id, duplicate_of) = if task.is_probe {
                if !submitted_originals.contains(&(task.item_id.as_str(), task.annotator_id.as_str())) {
                    continue;
                }
                (
                    probe_item_id(&task.item_id, &task.annotator_id),
                    Some(task.item_id.clone()),
                )
            } else {
                (task.item_id.clone(), None)
            };
            out.push(AnnotationRecord {
                item_id,
                source_id: item.source_id.clone(),
                run_id: item.run_id.clone(),
                annotator_id: task.annotator_id.clone(),
                labels: *labels,
                duplicate_of,
                source_text: item.source_text.clone(),
                simplified_text: item.simplified_text.clone(),
            });
        }
        out
    }

    pub fn export_csv(&self) -> String {
        collection_to_string(&self.export_records())
    }
}

fn replay(st: &mut State, items: &[Item], event: Event) -> Result<(), ServiceError> {
    match event {
        Event::Issued {
            task_id: tid,
            annotator_id,
            position,
            item_id,
            is_probe,
            issued_at,
        } => {
            let queue = st
                .queues
                .get(&annotator_id)
                .ok_or_else(|| ServiceError::Replay(format!("unknown annotator `{annotator_id}`")))?;
            let expected = st.cursor[&annotator_id];
            let entry = queue.get(position).copied();
            let matches = position == expected
                && tid == task_id(&annotator_id, position)
                && entry.is_some_and(|e| items[e.item].item_id == item_id && e.is_probe == is_probe);
            if !matches {
                return Err(ServiceError::Replay(format!(
                    "task `{tid}` (item `{item_id}`) is not position {expected} of `{annotator_id}`'s queue"
                )));
            }
            let item = &items[entry.expect("checked").item];
            st.cursor.insert(annotator_id.clone(), position + 1);
            st.order.push(tid.clone());
            st.tasks.insert(
                tid.clone(),
                TaskAssignment {
                    task_id: tid,
                    item_id,
                    annotator_id,
                    source_text: item.source_text.clone(),
                    simplified_text: item.simplified_text.clone(),
                    issued_at,
                    is_probe,
                },
            );
        }
        Event::Submitted {
            task_id: tid,
            labels,
            ..
        } => {
            if !st.tasks.contains_key(&tid) {
                return Err(ServiceError::Replay(format!("submission for unissued task `{tid}`")));
            }
            st.latest.insert(tid, labels);
        }
    }
    Ok(())
}
