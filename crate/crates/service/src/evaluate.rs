//! Request validation and the evaluation pipeline shared by the HTTP service
//! and the CLI.

use std::collections::BTreeMap;

use trendcheck_core::pairs::PairSpace;
use trendcheck_core::{
    build_differences, most_supported, parse_trend_value, slice_region, support_baseline,
    support_exact, support_random, tightest, Dataset, Error, Region, RegionPair, SamplingConfig,
    Side, Statement, StatementBounds, DEFAULT_BUDGETS, DEFAULT_MAX_EXACT_PAIRS,
};

use crate::error::ApiError;
use crate::request::{EvaluationRequest, EvaluationResponse, RangeInput, SupportBlock};

/// Largest seed handed out by default; stays exact in JavaScript numbers.
const MAX_GENERATED_SEED: u64 = (1 << 53) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Above this many pairs the brute-force baseline is skipped and
    /// discovery runs on sampled differences.
    pub max_exact_pairs: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            max_exact_pairs: DEFAULT_MAX_EXACT_PAIRS,
        }
    }
}

/// A request that passed validation, with everything parsed.
#[derive(Debug, Clone)]
struct Validated {
    statement: Statement,
    sampling: SamplingConfig,
    mss_width: Option<f64>,
    tightest_support: Option<f64>,
}

/// Fills in the seed if absent, then evaluates.
pub fn evaluate(
    dataset: &Dataset,
    request: &EvaluationRequest,
    config: &EngineConfig,
) -> Result<EvaluationResponse, ApiError> {
    let mut request = request.clone();
    if request.sampling.seed.is_none() {
        request.sampling.seed = Some(rand::random_range(0..=MAX_GENERATED_SEED));
    }
    evaluate_seeded(dataset, &request, config)
}

fn evaluate_seeded(
    dataset: &Dataset,
    request: &EvaluationRequest,
    config: &EngineConfig,
) -> Result<EvaluationResponse, ApiError> {
    let dataset = match request.row_limit {
        Some(n) => dataset
            .truncated(n)
            .map_err(|e| ApiError::field("row_limit", e.to_string()))?,
        None => dataset.clone(),
    };
    let valid = validate(&dataset, request)?;
    let statement = &valid.statement;
    let window = statement.regions().window();

    let begin = slice_region(&dataset, statement, Side::Begin).map_err(data_error)?;
    let end = slice_region(&dataset, statement, Side::End).map_err(data_error)?;
    let total_pairs = PairSpace::new(begin.points(), end.points(), window)
        .map_err(data_error)?
        .total();

    let mut warnings = Vec::new();
    for (side, series) in [("begin", &begin), ("end", &end)] {
        if series.dropped_rows() > 0 {
            warnings.push(format!(
                "{side} region: dropped {} row(s) with a missing or non-numeric value",
                series.dropped_rows()
            ));
        }
    }

    let task = request.task;
    let support = if task.wants_support() {
        let exact_baseline = if total_pairs <= config.max_exact_pairs {
            Some(support_baseline(&begin, &end, statement.bounds(), window).map_err(data_error)?)
        } else {
            warnings.push(format!(
                "exact baseline skipped: {total_pairs} pairs exceed the limit of {}",
                config.max_exact_pairs
            ));
            None
        };
        Some(SupportBlock {
            exact_baseline,
            exact: support_exact(&begin, &end, statement.bounds(), window).map_err(data_error)?,
            random: support_random(&begin, &end, statement.bounds(), window, &valid.sampling)
                .map_err(data_error)?,
        })
    } else {
        None
    };

    let (mut mss, mut tight) = (None, None);
    if task.wants_mss() || task.wants_tightest() {
        let diffs = build_differences(&begin, &end, window, config.max_exact_pairs, &valid.sampling)
            .map_err(data_error)?;
        if diffs.sampled() {
            warnings.push(format!(
                "discovery ran on {} sampled differences out of {total_pairs} pairs; supports are estimates",
                diffs.len()
            ));
        }
        if let Some(w) = valid.mss_width {
            mss = Some(most_supported(&diffs, w).map_err(internal)?);
        }
        if let Some(tau) = valid.tightest_support {
            tight = Some(tightest(&diffs, tau).map_err(internal)?);
        }
    }

    Ok(EvaluationResponse {
        support,
        mss,
        tightest: tight,
        echo: echo(request, &valid),
        warnings,
    })
}

/// The request as it was evaluated, with unused conditions cleared.
fn echo(request: &EvaluationRequest, valid: &Validated) -> EvaluationRequest {
    let mut echo = request.clone();
    echo.sampling.budgets = Some(valid.sampling.budgets().to_vec());
    echo.sampling.seed = Some(valid.sampling.seed());
    echo.mss_width = valid.mss_width;
    echo.tightest_support = valid.tightest_support;
    echo
}

fn validate(dataset: &Dataset, req: &EvaluationRequest) -> Result<Validated, ApiError> {
    let mut fields = BTreeMap::new();
    let mut fail = |field: &str, msg: String| {
        fields.entry(field.to_string()).or_insert(msg);
    };

    for (field, column) in [("target_column", &req.target_column), ("trend_column", &req.trend_column)] {
        if dataset.column_index(column).is_err() {
            fail(field, Error::UnknownColumn(column.clone()).to_string());
        }
    }

    let bounds = StatementBounds::from_options(req.bounds.lower, req.bounds.upper)
        .map_err(|e| fail("bounds", e.to_string()))
        .ok();

    let mut region = |field: &str, range: &RangeInput| {
        let from = parse_trend_value(&range.from, req.trend_is_date)
            .map_err(|e| fail(&format!("{field}.from"), e.to_string()))
            .ok();
        let to = parse_trend_value(&range.to, req.trend_is_date)
            .map_err(|e| fail(&format!("{field}.to"), e.to_string()))
            .ok();
        Region::new(from?, to?).map_err(|e| fail(field, e.to_string())).ok()
    };
    let begin = region("regions.begin", &req.regions.begin);
    let end = region("regions.end", &req.regions.end);

    let regions = match (begin, end) {
        (Some(begin), Some(end)) => RegionPair::new(begin, end, req.window)
            .map_err(|e| match e {
                Error::InvalidWindow(_) => fail("window", e.to_string()),
                _ => fail("regions", e.to_string()),
            })
            .ok(),
        _ => None,
    };

    let statement = match (bounds, regions) {
        (Some(bounds), Some(regions)) => Statement::new(
            req.target_column.clone(),
            req.trend_column.clone(),
            req.trend_is_date,
            bounds,
            regions,
        )
        .map_err(|e| fail("trend_column", e.to_string()))
        .ok(),
        _ => None,
    };

    let budgets = req
        .sampling
        .budgets
        .clone()
        .unwrap_or_else(|| DEFAULT_BUDGETS.to_vec());
    let sampling = SamplingConfig::new(budgets, req.sampling.seed.unwrap_or_default())
        .map_err(|e| fail("sampling.budgets", e.to_string()))
        .ok();

    let mss_width = if req.task.wants_mss() {
        match req.mss_width {
            Some(w) if w > 0.0 && w.is_finite() => Some(w),
            Some(w) => {
                fail("mss_width", Error::InvalidWidth(w).to_string());
                None
            }
            None => {
                fail("mss_width", "required for this task".into());
                None
            }
        }
    } else {
        None
    };

    let tightest_support = if req.task.wants_tightest() {
        match req.tightest_support {
            Some(t) if t > 0.0 && t <= 1.0 => Some(t),
            Some(t) => {
                fail("tightest_support", Error::InvalidThreshold(t).to_string());
                None
            }
            None => {
                fail("tightest_support", "required for this task".into());
                None
            }
        }
    } else {
        None
    };

    if !fields.is_empty() {
        return Err(ApiError::ValidationFailed(fields));
    }
    match (statement, sampling) {
        (Some(statement), Some(sampling)) => Ok(Validated {
            statement,
            sampling,
            mss_width,
            tightest_support,
        }),
        _ => Err(ApiError::Internal("validation produced no statement".into())),
    }
}

fn data_error(e: Error) -> ApiError {
    let kind = match e {
        Error::EmptyRegion(_) => "EmptyRegion",
        Error::EmptyPairSpace => "EmptyPairSpace",
        Error::UnparseableValue { .. } => "UnparseableValue",
        _ => return internal(e),
    };
    ApiError::Unprocessable {
        kind,
        message: e.to_string(),
    }
}

fn internal(e: Error) -> ApiError {
    ApiError::Internal(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::request::{BoundsInput, RegionsInput, SamplingInput, Task};

    fn toy() -> Dataset {
        Dataset::from_reader("toy", "x,y\n1,10\n2,12\n3,11\n4,15\n".as_bytes()).unwrap()
    }

    fn request(task: Task) -> EvaluationRequest {
        EvaluationRequest {
            dataset_id: "toy".into(),
            task,
            target_column: "y".into(),
            trend_column: "x".into(),
            trend_is_date: false,
            bounds: BoundsInput { lower: Some(0.0), upper: None },
            regions: RegionsInput {
                begin: RangeInput { from: "1".into(), to: "2".into() },
                end: RangeInput { from: "3".into(), to: "4".into() },
            },
            window: None,
            row_limit: None,
            sampling: SamplingInput { budgets: Some(vec![1000]), seed: Some(7) },
            mss_width: Some(2.0),
            tightest_support: Some(0.5),
        }
    }

    fn fields(err: ApiError) -> BTreeMap<String, String> {
        match err {
            ApiError::ValidationFailed(f) => f,
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn all_tasks_on_toy() {
        let resp = evaluate(&toy(), &request(Task::All), &EngineConfig::default()).unwrap();
        let support = resp.support.unwrap();
        assert_eq!(support.exact.support, 0.75);
        assert_eq!(support.exact_baseline.unwrap(), support.exact);
        assert_eq!(support.random.len(), 1);
        let mss = resp.mss.unwrap();
        assert_eq!((mss.lo, mss.hi, mss.support), (-1.0, 1.0, 0.5));
        let t = resp.tightest.unwrap();
        assert_eq!((t.lo, t.hi, t.width), (-1.0, 1.0, 2.0));
        assert!(resp.warnings.is_empty());
    }

    #[test]
    fn task_masking() {
        let resp = evaluate(&toy(), &request(Task::Support), &EngineConfig::default()).unwrap();
        assert!(resp.support.is_some() && resp.mss.is_none() && resp.tightest.is_none());
        assert_eq!(resp.echo.mss_width, None);
        assert_eq!(resp.echo.tightest_support, None);

        let resp = evaluate(&toy(), &request(Task::Mss), &EngineConfig::default()).unwrap();
        assert!(resp.support.is_none() && resp.mss.is_some() && resp.tightest.is_none());
        assert_eq!(resp.echo.mss_width, Some(2.0));
    }

    #[test]
    fn unbounded_support_is_one() {
        let mut req = request(Task::Support);
        req.bounds = BoundsInput::default();
        let resp = evaluate(&toy(), &req, &EngineConfig::default()).unwrap();
        assert_eq!(resp.support.unwrap().exact.support, 1.0);
    }

    #[test]
    fn negative_width_fails_validation() {
        let mut req = request(Task::Mss);
        req.mss_width = Some(-5.0);
        let f = fields(evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err());
        assert!(f.contains_key("mss_width"));
    }

    #[test]
    fn missing_task_parameters() {
        let mut req = request(Task::All);
        req.mss_width = None;
        req.tightest_support = Some(1.5);
        let f = fields(evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err());
        assert_eq!(f.keys().collect::<Vec<_>>(), vec!["mss_width", "tightest_support"]);
    }

    #[test]
    fn collects_every_field_error() {
        let mut req = request(Task::Support);
        req.target_column = "nope".into();
        req.bounds = BoundsInput { lower: Some(3.0), upper: Some(1.0) };
        req.regions.end.from = "abc".into();
        req.sampling.budgets = Some(vec![]);
        let f = fields(evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err());
        assert_eq!(
            f.keys().collect::<Vec<_>>(),
            vec!["bounds", "regions.end.from", "sampling.budgets", "target_column"]
        );
    }

    #[test]
    fn overlapping_regions_and_bad_window() {
        let mut req = request(Task::Support);
        req.regions.begin.to = "3".into();
        let f = fields(evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err());
        assert!(f["regions"].contains("overlap"));

        let mut req = request(Task::Support);
        req.window = Some(0.0);
        let f = fields(evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err());
        assert!(f.contains_key("window"));
    }

    #[test]
    fn row_limit_handling() {
        let mut req = request(Task::Support);
        req.row_limit = Some(10);
        let f = fields(evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err());
        assert!(f.contains_key("row_limit"));

        // First three rows leave a single end point (x = 3).
        req.row_limit = Some(3);
        let resp = evaluate(&toy(), &req, &EngineConfig::default()).unwrap();
        assert_eq!(resp.support.unwrap().exact.total_pairs, 2);
    }

    #[test]
    fn empty_region_and_pair_space_are_unprocessable() {
        let mut req = request(Task::Support);
        req.regions.end = RangeInput { from: "100".into(), to: "200".into() };
        let err = evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err();
        assert_eq!(err.kind(), "EmptyRegion");
        assert_eq!(err.status(), 422);

        let mut req = request(Task::Support);
        req.window = Some(0.5);
        let err = evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err();
        assert_eq!(err.kind(), "EmptyPairSpace");
    }

    #[test]
    fn wrong_date_flag_is_unprocessable() {
        let mut req = request(Task::Support);
        req.trend_is_date = true;
        req.regions = RegionsInput {
            begin: RangeInput { from: "2013-01-01".into(), to: "2013-02-01".into() },
            end: RangeInput { from: "2013-06-01".into(), to: "2013-07-01".into() },
        };
        let err = evaluate(&toy(), &req, &EngineConfig::default()).unwrap_err();
        assert_eq!(err.kind(), "UnparseableValue");
    }

    #[test]
    fn baseline_skipped_above_limit() {
        let cfg = EngineConfig { max_exact_pairs: 3 };
        let resp = evaluate(&toy(), &request(Task::All), &cfg).unwrap();
        let support = resp.support.unwrap();
        assert!(support.exact_baseline.is_none());
        assert_eq!(support.exact.support, 0.75);
        assert!(resp.warnings.iter().any(|w| w.contains("baseline skipped")));
        assert!(resp.warnings.iter().any(|w| w.contains("sampled")));
    }

    #[test]
    fn seed_is_generated_and_echoed() {
        let mut req = request(Task::Support);
        req.sampling = SamplingInput::default();
        let resp = evaluate(&toy(), &req, &EngineConfig::default()).unwrap();
        let seed = resp.echo.sampling.seed.unwrap();
        assert!(seed <= MAX_GENERATED_SEED);
        assert_eq!(resp.echo.sampling.budgets.as_deref(), Some(&DEFAULT_BUDGETS[..]));

        let replay = evaluate(&toy(), &resp.echo, &EngineConfig::default()).unwrap();
        assert_eq!(replay, resp);
    }

    #[test]
    fn dropped_rows_become_warnings() {
        let ds = Dataset::from_reader("m", "x,y\n1,10\n2,\n3,11\n4,15\n".as_bytes()).unwrap();
        let resp = evaluate(&ds, &request(Task::Support), &EngineConfig::default()).unwrap();
        assert_eq!(resp.warnings.len(), 1);
        assert!(resp.warnings[0].starts_with("begin region: dropped 1"));
    }
}
