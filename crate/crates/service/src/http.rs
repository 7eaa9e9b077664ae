//! Axum routes.
//!
//! | method | path                          | body / query          |
//! |--------|-------------------------------|-----------------------|
//! | GET    | `/api/datasets`               |                       |
//! | GET    | `/api/datasets/{id}/preview`  | `?limit=k`, 1..=100   |
//! | POST   | `/api/evaluate`               | `EvaluationRequest`   |

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::routing::{get, post};
use axum::{Json, Router};

use crate::error::ApiError;
use crate::evaluate::{evaluate, EngineConfig};
use crate::registry::{DatasetSummary, Registry};
use crate::request::{EvaluationRequest, EvaluationResponse};

const DEFAULT_PREVIEW_ROWS: usize = 10;
const MAX_PREVIEW_ROWS: usize = 100;

#[derive(Debug, Clone)]
pub struct AppState {
    pub registry: Arc<Registry>,
    pub engine: EngineConfig,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/datasets", get(list_datasets))
        .route("/api/datasets/{id}/preview", get(preview))
        .route("/api/evaluate", post(evaluate_handler))
        .with_state(state)
}

async fn list_datasets(State(state): State<AppState>) -> Json<Vec<DatasetSummary>> {
    Json(state.registry.summaries())
}

async fn preview(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Json<Vec<Vec<String>>>, ApiError> {
    let dataset = state
        .registry
        .get(&id)
        .ok_or_else(|| ApiError::UnknownDataset(id.clone()))?;
    let limit = match query.get("limit") {
        None => DEFAULT_PREVIEW_ROWS,
        Some(raw) => raw
            .parse::<usize>()
            .ok()
            .filter(|k| (1..=MAX_PREVIEW_ROWS).contains(k))
            .ok_or_else(|| ApiError::BadLimit(raw.clone()))?,
    };
    Ok(Json(dataset.preview(limit)))
}

async fn evaluate_handler(
    State(state): State<AppState>,
    body: Result<Json<EvaluationRequest>, JsonRejection>,
) -> Result<Json<EvaluationResponse>, ApiError> {
    let Json(request) = body.map_err(|e| ApiError::field("body", e.body_text()))?;
    let dataset = state
        .registry
        .get(&request.dataset_id)
        .ok_or_else(|| ApiError::UnknownDataset(request.dataset_id.clone()))?;
    let engine = state.engine;
    tokio::task::spawn_blocking(move || evaluate(&dataset, &request, &engine))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .map(Json)
}
