//! Report rendering: markdown for reading, csv/json for machines.
//!
//! The csv and json renderings are deterministic functions of the results
//! (wall-clock timings stay out of them); the markdown rendering adds a
//! runtime table on top.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use super::{
    percent_best, runtime_summary, ExperimentResults, SummaryEntry, SummaryTable, AS_IS,
};
use crate::{Error, Result};

/// Output flavors of [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReportFormat> {
        match s.trim().to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// One point of the budget -> percent-best series (one line per sampler in
/// a plot).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub sampler: String,
    pub budget: usize,
    pub percent_best: f64,
}

/// The machine-readable report: full results plus the summary table and a
/// plot-ready percent-best series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub results: ExperimentResults,
    pub summary: SummaryTable,
    pub series: Vec<SeriesPoint>,
}

impl Report {
    pub fn new(results: ExperimentResults) -> Report {
        let summary = percent_best(&results);
        let series = summary
            .entries
            .iter()
            .map(|e| SeriesPoint {
                sampler: e.sampler.clone(),
                budget: e.budget,
                percent_best: e.percent_best,
            })
            .collect();
        Report {
            results,
            summary,
            series,
        }
    }
}

/// Render results in the requested format.
pub fn emit_report(results: &ExperimentResults, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Markdown => Ok(markdown(results)),
        ReportFormat::Csv => Ok(csv(results)),
        ReportFormat::Json => {
            let report = Report::new(results.clone());
            Ok(serde_json::to_string_pretty(&report)? + "\n")
        }
    }
}

/// Cell text in the box-table style: median d2h scaled to 0..100 plus the
/// rank letter, e.g. `24 a`.
fn cell_text(median_d2h: f64, letter: char) -> String {
    format!("{} {letter}", (median_d2h * 100.0).round() as i64)
}

fn fmt_opt(v: Option<f64>, scale: f64) -> String {
    match v {
        Some(v) => format!("{}", (v * scale).round() as i64),
        None => "n/a".to_string(),
    }
}

fn markdown(results: &ExperimentResults) -> String {
    let mut out = String::new();
    out.push_str("# bench report\n\n");
    out.push_str(&format!(
        "master seed {}, repeats {}, budgets {}\n\n",
        results.master_seed,
        results.repeats,
        results
            .budgets
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    ));

    // one row per dataset: delta, the as-is column, then each treatment
    let treatments: Vec<String> = results
        .samplers
        .iter()
        .flat_map(|s| results.budgets.iter().map(move |b| format!("{s}-{b}")))
        .collect();
    out.push_str("## results\n\n");
    out.push_str("cells show `median-d2h rank` with d2h scaled to 0..100; lower is better\n\n");
    out.push_str(&format!("| dataset | rows | Δ | Before | {} |\n", treatments.join(" | ")));
    out.push_str(&format!("|---|---|---|---|{}\n", "---|".repeat(treatments.len())));
    for ds in &results.datasets {
        let before = ds
            .cells
            .iter()
            .find(|c| c.treatment == AS_IS)
            .map(|c| cell_text(c.median_d2h, c.letter))
            .unwrap_or_else(|| "n/a".into());
        let mut line = format!(
            "| {} | {} | {} | {} |",
            ds.name,
            ds.rows,
            fmt_opt(ds.median_delta, 1.0),
            before
        );
        for t in &treatments {
            let text = ds
                .cells
                .iter()
                .find(|c| &c.treatment == t)
                .map(|c| cell_text(c.median_d2h, c.letter))
                .unwrap_or_else(|| "-".into());
            line.push_str(&format!(" {text} |"));
        }
        out.push_str(&line);
        out.push('\n');
    }

    let summary = percent_best(results);
    out.push_str("\n## summary\n\n");
    out.push_str(
        "percent-best: share of datasets ranked `a` (higher is better, top-3 per column marked ^1..^3)\n\n",
    );
    out.push_str(&summary_grid(results, &summary.entries, |e| {
        Some(e.percent_best)
    }, true));
    out.push_str(
        "\nwhen-best: mean d2h (0..100) on the datasets ranked `a` (lower is better)\n\n",
    );
    out.push_str(&summary_grid(results, &summary.entries, |e| {
        e.when_best.map(|w| w * 100.0)
    }, false));

    out.push_str("\n## series (budget -> percent-best)\n\n");
    out.push_str("```\nsampler,budget,percent_best\n");
    for e in &summary.entries {
        out.push_str(&format!("{},{},{}\n", e.sampler, e.budget, e.percent_best));
    }
    out.push_str("```\n");

    let runtimes = runtime_summary(results);
    if runtimes.iter().any(|r| r.runs > 0) {
        out.push_str("\n## runtimes\n\n");
        out.push_str("| sampler | runs | mean ms | median ms | max ms |\n");
        out.push_str("|---|---|---|---|---|\n");
        for r in &runtimes {
            out.push_str(&format!(
                "| {} | {} | {:.3} | {:.3} | {:.3} |\n",
                r.sampler, r.runs, r.mean_ms, r.median_ms, r.max_ms
            ));
        }
    }

    if !results.warnings.is_empty() {
        out.push_str("\n## warnings\n\n");
        for w in &results.warnings {
            out.push_str(&format!("- {w}\n"));
        }
    }
    out
}

/// Sampler x budget grid for one summary metric, with `^1 ^2 ^3` markers on
/// the top three per budget column.
fn summary_grid(
    results: &ExperimentResults,
    entries: &[SummaryEntry],
    metric: impl Fn(&SummaryEntry) -> Option<f64>,
    higher_better: bool,
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "| sampler | {} |\n",
        results
            .budgets
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" | ")
    ));
    out.push_str(&format!("|---|{}\n", "---|".repeat(results.budgets.len())));

    // per budget column, rank the samplers on the metric
    let mut markers: Vec<Vec<String>> = Vec::new();
    for (bi, &budget) in results.budgets.iter().enumerate() {
        let mut column: Vec<(usize, f64)> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.budget == budget)
            .filter_map(|(i, e)| metric(e).map(|v| (i, v)))
            // a percent-best of zero is never "top"
            .filter(|&(_, v)| !higher_better || v > 0.0)
            .collect();
        column.sort_by(|a, b| {
            if higher_better {
                b.1.partial_cmp(&a.1).unwrap()
            } else {
                a.1.partial_cmp(&b.1).unwrap()
            }
        });
        let mut col_markers = vec![String::new(); entries.len()];
        for (pos, (idx, _)) in column.iter().take(3).enumerate() {
            col_markers[*idx] = format!(" ^{}", pos + 1);
        }
        markers.push(col_markers);
        let _ = bi;
    }

    for sampler in &results.samplers {
        let mut line = format!("| {sampler} |");
        for (bi, &budget) in results.budgets.iter().enumerate() {
            let idx_entry = entries
                .iter()
                .enumerate()
                .find(|(_, e)| &e.sampler == sampler && e.budget == budget);
            let text = match idx_entry {
                Some((idx, e)) => match metric(e) {
                    Some(v) => format!("{}{}", round1(v), markers[bi][idx]),
                    None => "n/a".into(),
                },
                None => "-".into(),
            };
            line.push_str(&format!(" {text} |"));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn round1(v: f64) -> String {
    let r = (v * 10.0).round() / 10.0;
    if (r - r.round()).abs() < f64::EPSILON {
        format!("{}", r.round() as i64)
    } else {
        format!("{r:.1}")
    }
}

fn csv(results: &ExperimentResults) -> String {
    let mut out = String::new();
    out.push_str("# cells\n");
    out.push_str("dataset,rows,treatment,sampler,budget,median_d2h,rank,letter,median_delta\n");
    for ds in &results.datasets {
        for cell in &ds.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                ds.name,
                ds.rows,
                cell.treatment,
                cell.sampler.map(|s| s.name()).unwrap_or(""),
                cell.budget.map(|b| b.to_string()).unwrap_or_default(),
                cell.median_d2h,
                cell.rank,
                cell.letter,
                cell.median_delta()
                    .map(|d| d.to_string())
                    .unwrap_or_default(),
            ));
        }
    }

    let summary = percent_best(results);
    out.push_str("\n# summary\n");
    out.push_str("sampler,budget,percent_best,when_best\n");
    for e in &summary.entries {
        out.push_str(&format!(
            "{},{},{},{}\n",
            e.sampler,
            e.budget,
            e.percent_best,
            e.when_best.map(|w| w.to_string()).unwrap_or_default()
        ));
    }

    out.push_str("\n# series\n");
    out.push_str("sampler,budget,percent_best\n");
    for e in &summary.entries {
        out.push_str(&format!("{},{},{}\n", e.sampler, e.budget, e.percent_best));
    }
    out
}
