use std::collections::BTreeMap;
use std::io;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use trendcheck_core::ingest::Column;
use trendcheck_core::Dataset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetSummary {
    pub id: String,
    pub name: String,
    pub row_count: usize,
    pub columns: Vec<Column>,
}

#[derive(Debug)]
struct Entry {
    dataset: Arc<Dataset>,
    summary: DatasetSummary,
}

/// Datasets available to the service, keyed and ordered by id.
/// Immutable after construction.
#[derive(Debug, Default)]
pub struct Registry {
    entries: BTreeMap<String, Entry>,
}

impl Registry {
    /// Loads every `*.csv` directly inside `dir`; the id is the file stem.
    /// Files that fail to parse are logged and skipped.
    pub fn from_dir(dir: impl AsRef<Path>) -> io::Result<Self> {
        let mut registry = Self::default();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            let is_csv = path
                .extension()
                .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
            if !is_csv || !path.is_file() {
                continue;
            }
            match Dataset::from_path(&path) {
                Ok(dataset) => {
                    let name = path
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    registry.insert(name, dataset);
                }
                Err(e) => tracing::warn!(path = %path.display(), error = %e, "skipping dataset"),
            }
        }
        Ok(registry)
    }

    pub fn insert(&mut self, name: impl Into<String>, dataset: Dataset) {
        let schema = dataset.schema();
        let summary = DatasetSummary {
            id: dataset.id().to_string(),
            name: name.into(),
            row_count: schema.row_count,
            columns: schema.columns,
        };
        self.entries.insert(
            summary.id.clone(),
            Entry {
                dataset: Arc::new(dataset),
                summary,
            },
        );
    }

    pub fn get(&self, id: &str) -> Option<Arc<Dataset>> {
        self.entries.get(id).map(|e| Arc::clone(&e.dataset))
    }

    pub fn summaries(&self) -> Vec<DatasetSummary> {
        self.entries.values().map(|e| e.summary.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
