//! JSON-over-HTTP front end for trendline statement evaluation.
//!
//! The evaluation pipeline in [`evaluate`] is shared with the CLI, so both
//! produce identical payloads for identical requests.

pub mod error;
pub mod evaluate;
pub mod http;
pub mod registry;
pub mod request;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

pub use error::ApiError;
pub use evaluate::{evaluate, EngineConfig};
pub use http::{router, AppState};
pub use registry::{DatasetSummary, Registry};
pub use request::{EvaluationRequest, EvaluationResponse, Task};

pub const ENV_PORT: &str = "TRENDCHECK_PORT";
pub const ENV_DATASETS: &str = "TRENDCHECK_DATASETS";
pub const ENV_MAX_EXACT_PAIRS: &str = "TRENDCHECK_MAX_EXACT_PAIRS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    pub port: u16,
    pub datasets: PathBuf,
    pub engine: EngineConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            port: 8080,
            datasets: PathBuf::from("datasets"),
            engine: EngineConfig::default(),
        }
    }
}

impl ServiceConfig {
    /// Reads `TRENDCHECK_PORT`, `TRENDCHECK_DATASETS` and
    /// `TRENDCHECK_MAX_EXACT_PAIRS`, keeping defaults for unset variables.
    pub fn from_env() -> Result<Self, String> {
        let mut config = Self::default();
        if let Ok(port) = std::env::var(ENV_PORT) {
            config.port = port.parse().map_err(|_| format!("{ENV_PORT}: bad port {port:?}"))?;
        }
        if let Ok(dir) = std::env::var(ENV_DATASETS) {
            config.datasets = dir.into();
        }
        if let Ok(max) = std::env::var(ENV_MAX_EXACT_PAIRS) {
            config.engine.max_exact_pairs = max
                .parse()
                .map_err(|_| format!("{ENV_MAX_EXACT_PAIRS}: bad value {max:?}"))?;
        }
        Ok(config)
    }
}

/// Loads the registry and serves until the future is dropped or fails.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let registry = Registry::from_dir(&config.datasets)?;
    for summary in registry.summaries() {
        tracing::info!(id = %summary.id, rows = summary.row_count, "dataset registered");
    }
    tracing::info!(count = registry.len(), dir = %config.datasets.display(), "registry loaded");

    let app = router(AppState {
        registry: Arc::new(registry),
        engine: config.engine,
    });
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, app).await
}
