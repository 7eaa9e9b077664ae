use std::collections::BTreeMap;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use thiserror::Error;

/// Errors surfaced to API clients.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApiError {
    /// Per-field messages, keyed by request field path.
    #[error("request validation failed: {}", summarize(.0))]
    ValidationFailed(BTreeMap<String, String>),

    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),

    #[error("preview limit must be an integer in 1..=100, got {0:?}")]
    BadLimit(String),

    /// The request was well-formed but the data cannot support an evaluation
    /// (empty region, empty windowed pair space, unparseable trend column).
    #[error("{kind}: {message}")]
    Unprocessable { kind: &'static str, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

fn summarize(fields: &BTreeMap<String, String>) -> String {
    fields
        .iter()
        .map(|(k, v)| format!("{k}: {v}"))
        .collect::<Vec<_>>()
        .join("; ")
}

impl ApiError {
    pub fn field(name: &str, message: impl Into<String>) -> Self {
        ApiError::ValidationFailed(BTreeMap::from([(name.to_string(), message.into())]))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ApiError::ValidationFailed(_) => "ValidationFailed",
            ApiError::UnknownDataset(_) => "UnknownDataset",
            ApiError::BadLimit(_) => "BadLimit",
            ApiError::Unprocessable { kind, .. } => kind,
            ApiError::Internal(_) => "Internal",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::ValidationFailed(_) | ApiError::BadLimit(_) => StatusCode::BAD_REQUEST,
            ApiError::UnknownDataset(_) => StatusCode::NOT_FOUND,
            ApiError::Unprocessable { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            error: self.kind(),
            message: self.to_string(),
            fields: match self {
                ApiError::ValidationFailed(fields) => Some(fields.clone()),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fields: Option<BTreeMap<String, String>>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.body())).into_response()
    }
}
