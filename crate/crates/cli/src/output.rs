//! Human-readable results table.
//!
//! Conditions the user supplied print plain; computed values carry a `*` in
//! the marker column. Conditions the task did not use print as `- -`.

use std::fmt::Write;

use trendcheck_core::Dataset;
use trendcheck_service::EvaluationResponse;

const UNUSED: &str = "- -";

fn bound(v: Option<f64>, infinity: &str) -> String {
    v.map_or_else(|| infinity.to_string(), |v| v.to_string())
}

pub fn render(dataset: &Dataset, response: &EvaluationResponse) -> String {
    let req = &response.echo;
    let rows = req.row_limit.unwrap_or(dataset.row_count());
    let lower = bound(req.bounds.lower, "-inf");
    let upper = bound(req.bounds.upper, "+inf");
    let open = if req.bounds.lower.is_some() { "[" } else { "(" };
    let close = if req.bounds.upper.is_some() { "]" } else { ")" };
    let sampling = match (&req.sampling.budgets, req.sampling.seed) {
        (Some(b), Some(seed)) => format!(
            "budgets {}; seed {seed}",
            b.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        ),
        _ => UNUSED.to_string(),
    };
    let opt = |v: Option<f64>| v.map_or_else(|| UNUSED.to_string(), |v| v.to_string());

    let conditions = [
        ("dataset", format!("{} ({rows} rows)", req.dataset_id)),
        ("target", req.target_column.clone()),
        (
            "trend",
            format!("{}{}", req.trend_column, if req.trend_is_date { " (dates)" } else { "" }),
        ),
        ("statement bounds", format!("{open}{lower}, {upper}{close}")),
        ("begin region", format!("{} .. {}", req.regions.begin.from, req.regions.begin.to)),
        ("end region", format!("{} .. {}", req.regions.end.from, req.regions.end.to)),
        ("window", opt(req.window)),
        ("sampling", sampling),
        ("mss width", opt(req.mss_width)),
        ("tightest support", opt(req.tightest_support)),
    ];

    let mut out = String::from("conditions\n");
    for (name, value) in conditions {
        let _ = writeln!(out, "    {name:<18} {value}");
    }

    out.push_str("results (* = computed)\n");
    let mut line = |text: String| {
        let _ = writeln!(out, "  * {text}");
    };
    match &response.support {
        Some(s) => {
            match &s.exact_baseline {
                Some(b) => line(format!(
                    "support (baseline): {:.3}  [{}/{} pairs]",
                    b.support, b.supporting_pairs, b.total_pairs
                )),
                None => line(format!("support (baseline): {UNUSED}  [skipped]")),
            }
            line(format!(
                "support (exact): {:.3}  [{}/{} pairs]",
                s.exact.support, s.exact.supporting_pairs, s.exact.total_pairs
            ));
            for est in &s.random {
                line(format!(
                    "support (random, N={}): {:.3} ±{:.3}",
                    est.budget, est.estimate, est.epsilon95
                ));
            }
        }
        None => line(format!("support: {UNUSED}")),
    }
    match &response.mss {
        Some(m) => line(format!(
            "mss: lo={:.3} hi={:.3} support={:.3} width={:.3}",
            m.lo, m.hi, m.support, m.width
        )),
        None => line(format!("mss: {UNUSED}")),
    }
    match &response.tightest {
        Some(t) => line(format!(
            "tightest: lo={:.3} hi={:.3} width={:.3} support={:.3}",
            t.lo, t.hi, t.width, t.support
        )),
        None => line(format!("tightest: {UNUSED}")),
    }

    for w in &response.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
