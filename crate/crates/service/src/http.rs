use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

use crate::service::{FieldReason, Service, ServiceError, Submission, TaskView};

#[derive(Debug, Deserialize)]
struct AnnotatorQuery {
    annotator: String,
}

/// Error body returned for every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasons: Vec<FieldReason>,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::UnknownAnnotator(_) | ServiceError::UnknownTask(_) => {
                StatusCode::NOT_FOUND
            }
            ServiceError::NotAssigned { .. } => StatusCode::FORBIDDEN,
            ServiceError::InvalidLabels(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Replay(_) | ServiceError::Log(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let reasons = match &self {
            ServiceError::InvalidLabels(r) => r.clone(),
            _ => Vec::new(),
        };
        let body = ErrorBody {
            error: self.to_string(),
            reasons,
        };
        (status, Json(body)).into_response()
    }
}

async fn next_task(
    State(svc): State<Arc<Service>>,
    Query(q): Query<AnnotatorQuery>,
) -> Result<Response, ServiceError> {
    Ok(match svc.next_task(&q.annotator)? {
        Some(task) => Json(TaskView::from(&task)).into_response(),
        None => StatusCode::NO_CONTENT.into_response(),
    })
}

async fn submit(
    State(svc): State<Arc<Service>>,
    Json(sub): Json<Submission>,
) -> Result<Response, ServiceError> {
    Ok(Json(svc.submit(&sub)?).into_response())
}

async fn progress(
    State(svc): State<Arc<Service>>,
    Query(q): Query<AnnotatorQuery>,
) -> Result<Response, ServiceError> {
    Ok(Json(svc.progress(&q.annotator)?).into_response())
}

async fn taxonomy(State(svc): State<Arc<Service>>) -> Response {
    Json(svc.taxonomy()).into_response()
}

async fn export(State(svc): State<Arc<Service>>) -> Response {
    (
        [(header::CONTENT_TYPE, "text/csv; charset=utf-8")],
        svc.export_csv(),
    )
        .into_response()
}

/// Routes:
///
/// - `GET  /api/task/next?annotator=ID`  200 task, 204 queue exhausted, 404 unknown annotator
/// - `POST /api/submit`                  200 ack, 422 invalid labels, 404 unknown task, 403 wrong annotator
/// - `GET  /api/taxonomy`
/// - `GET  /api/progress?annotator=ID`
/// - `GET  /api/export`                  collection CSV
pub fn router(svc: Arc<Service>) -> Router {
    Router::new()
        .route("/api/task/next", get(next_task))
        .route("/api/submit", post(submit))
        .route("/api/taxonomy", get(taxonomy))
        .route("/api/progress", get(progress))
        .route("/api/export", get(export))
        .layer(CorsLayer::permissive())
        .with_state(svc)
}

/// Serves until ctrl-c.
pub async fn serve(listener: TcpListener, svc: Arc<Service>) -> std::io::Result<()> {
    axum::serve(listener, router(svc))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
