//! Experiment orchestration: run (dataset x sampler x budget x repeat)
//! grids, rank treatments per dataset, and build percent-best summaries.
//!
//! Per-cell seeds come from a stable string hash of (master seed, dataset,
//! sampler, budget, repeat), so adding a dataset or sampler never perturbs
//! the randomness of existing cells, and a fixed master seed reproduces a
//! report byte for byte.

pub mod report;

pub use report::{emit_report, Report, ReportFormat, SeriesPoint};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::dataio::Table;
use crate::objective::{baseline_stats, delta_score, BaselineStats};
use crate::samplers::{SamplerKind, LITE_MIN_BUDGET};
use crate::stats::{median_of, scott_knott_default, RankedGroups, TreatmentSample};
use crate::{Error, Result};

/// Budgets used when a plan names none.
pub const DEFAULT_BUDGETS: [usize; 7] = [6, 12, 18, 24, 50, 100, 200];
/// Repeats used when a plan names none.
pub const DEFAULT_REPEATS: usize = 20;
/// Label of the untouched-table pseudo-treatment.
pub const AS_IS: &str = "As is";

/// A full experiment: which datasets, samplers, budgets, and how many
/// seeded repeats per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub datasets: Vec<PathBuf>,
    pub samplers: Vec<SamplerKind>,
    pub budgets: Vec<usize>,
    pub repeats: usize,
    pub master_seed: u64,
    pub workers: usize,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            datasets: Vec::new(),
            samplers: SamplerKind::ALL.to_vec(),
            budgets: DEFAULT_BUDGETS.to_vec(),
            repeats: DEFAULT_REPEATS,
            master_seed: 1,
            workers: 1,
        }
    }
}

impl ExperimentPlan {
    /// Read a flat key-value plan file. Recognized keys: `datasets`,
    /// `samplers`, `budgets`, `repeats`, `seed`, `workers`. Lists are
    /// comma-separated; `#` starts a comment.
    pub fn from_file(path: impl AsRef<Path>) -> Result<ExperimentPlan> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        ExperimentPlan::parse(&text)
    }

    /// Parse plan text; see [`ExperimentPlan::from_file`].
    pub fn parse(text: &str) -> Result<ExperimentPlan> {
        let mut plan = ExperimentPlan::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Plan(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let items = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            match key {
                "datasets" => plan.datasets = items().map(PathBuf::from).collect(),
                "samplers" => {
                    plan.samplers = items()
                        .map(str::parse)
                        .collect::<Result<Vec<SamplerKind>>>()?
                }
                "budgets" => {
                    plan.budgets = items()
                        .map(|s| {
                            s.parse::<usize>().map_err(|_| {
                                Error::Plan(format!("bad budget '{s}' on line {}", lineno + 1))
                            })
                        })
                        .collect::<Result<Vec<usize>>>()?
                }
                "repeats" => {
                    plan.repeats = value
                        .parse()
                        .map_err(|_| Error::Plan(format!("bad repeats '{value}'")))?
                }
                "seed" => {
                    plan.master_seed = value
                        .parse()
                        .map_err(|_| Error::Plan(format!("bad seed '{value}'")))?
                }
                "workers" => {
                    plan.workers = value
                        .parse()
                        .map_err(|_| Error::Plan(format!("bad workers '{value}'")))?
                }
                other => return Err(Error::Plan(format!("unknown key '{other}'"))),
            }
        }
        plan.validate()?;
        Ok(plan)
    }

    /// Check invariants and normalize: budgets are sorted, deduped, and
    /// compatible with every chosen sampler.
    pub fn validate(&mut self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Plan("no datasets given".into()));
        }
        if self.samplers.is_empty() {
            return Err(Error::Plan("no samplers given".into()));
        }
        if self.budgets.is_empty() {
            return Err(Error::Plan("no budgets given".into()));
        }
        if self.repeats < 1 {
            return Err(Error::Plan("repeats must be at least 1".into()));
        }
        if self.workers < 1 {
            return Err(Error::Plan("workers must be at least 1".into()));
        }
        self.budgets.sort_unstable();
        self.budgets.dedup();
        if self.budgets[0] < 1 {
            return Err(Error::Plan("budgets must be at least 1".into()));
        }
        if self.samplers.contains(&SamplerKind::Lite) && self.budgets[0] < LITE_MIN_BUDGET {
            return Err(Error::Plan(format!(
                "budget {} is too small for LITE (needs at least {LITE_MIN_BUDGET})",
                self.budgets[0]
            )));
        }
        Ok(())
    }
}

/// Treatment label for a sampler at a budget, e.g. `LITE-6`.
pub fn treatment_label(sampler: SamplerKind, budget: usize) -> String {
    format!("{}-{}", sampler.name(), budget)
}

/// One treatment's outcomes on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub treatment: String,
    /// `None` for the untouched-table pseudo-treatment.
    pub sampler: Option<SamplerKind>,
    pub budget: Option<usize>,
    /// Best d2h of each repeat.
    pub d2h: Vec<f64>,
    /// Delta of each repeat; empty when the dataset is degenerate.
    pub delta: Vec<f64>,
    pub median_d2h: f64,
    /// Scott-Knott rank over this dataset's treatments, 1 = best.
    pub rank: usize,
    pub letter: char,
    /// Wall-clock per run. Deliberately not serialized: reports must be
    /// byte-identical across reruns of the same plan.
    #[serde(skip)]
    pub run_millis: Vec<f64>,
}

impl CellResult {
    pub fn median_delta(&self) -> Option<f64> {
        if self.delta.is_empty() {
            None
        } else {
            Some(median_of(&self.delta))
        }
    }
}

/// All treatments of one dataset, plus its baseline scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetResult {
    pub name: String,
    pub rows: usize,
    pub baseline: BaselineStats,
    pub degenerate: bool,
    /// Median delta over every optimizer run; `None` when degenerate.
    pub median_delta: Option<f64>,
    pub cells: Vec<CellResult>,
}

/// Everything a bench run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResults {
    pub samplers: Vec<String>,
    pub budgets: Vec<usize>,
    pub repeats: usize,
    pub master_seed: u64,
    pub datasets: Vec<DatasetResult>,
    pub warnings: Vec<String>,
}

/// Percent-best and when-best for one treatment across all datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub sampler: String,
    pub budget: usize,
    pub treatment: String,
    /// Share of datasets (in %) where this treatment ranked `a`.
    pub percent_best: f64,
    /// Mean median-d2h over the datasets where it ranked `a`; undefined
    /// when it never did.
    pub when_best: Option<f64>,
}

/// The percent-best / when-best table over all (sampler, budget) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SummaryTable {
    pub entries: Vec<SummaryEntry>,
}

/// FNV-1a; a fixed, documented hash so per-cell seeds survive toolchain
/// changes.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Seed of one (dataset, sampler, budget, repeat) run.
pub fn cell_seed(master: u64, dataset: &str, sampler: SamplerKind, budget: usize, repeat: usize) -> u64 {
    fnv1a(format!("{master}|{dataset}|{}|{budget}|{repeat}", sampler.name()).as_bytes())
}

fn subseed(seed: u64, tag: &str) -> u64 {
    fnv1a(format!("{seed}|{tag}").as_bytes())
}

struct CellJob<'a> {
    dataset_idx: usize,
    table: &'a Table,
    baseline: BaselineStats,
    sampler: SamplerKind,
    budget: usize,
    effective_budget: usize,
}

struct CellOutput {
    dataset_idx: usize,
    cell: CellResult,
}

/// Run the whole plan. Cells execute concurrently up to `plan.workers`;
/// assembly is keyed by cell identity, so the output is independent of
/// scheduling.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentResults> {
    let mut checked = plan.clone();
    checked.validate()?;
    let plan = &checked;

    let tables: Vec<Table> = plan
        .datasets
        .iter()
        .map(Table::load)
        .collect::<Result<Vec<_>>>()?;
    let baselines: Vec<BaselineStats> = tables
        .iter()
        .map(baseline_stats)
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    let mut jobs = Vec::new();
    for (dataset_idx, table) in tables.iter().enumerate() {
        for &sampler in &plan.samplers {
            for &budget in &plan.budgets {
                let effective_budget = budget.min(table.rows.len());
                if effective_budget < budget {
                    warnings.push(format!(
                        "{}: budget {budget} capped at pool size {}",
                        table.name,
                        table.rows.len()
                    ));
                }
                jobs.push(CellJob {
                    dataset_idx,
                    table,
                    baseline: baselines[dataset_idx],
                    sampler,
                    budget,
                    effective_budget,
                });
            }
        }
    }

    let worker_pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::Plan(format!("cannot build worker pool: {e}")))?;
    let mut outputs: Vec<CellOutput> = worker_pool.install(|| {
        jobs.par_iter()
            .map(|job| run_cell(plan, job))
            .collect::<Result<Vec<_>>>()
    })?;
    // restore plan order (sampler-major, budget-minor) per dataset
    outputs.sort_by(|a, b| {
        (a.dataset_idx, position_of(plan, &a.cell))
            .cmp(&(b.dataset_idx, position_of(plan, &b.cell)))
    });

    let mut datasets = Vec::new();
    for (dataset_idx, table) in tables.iter().enumerate() {
        let baseline = baselines[dataset_idx];
        let degenerate = baseline.is_degenerate();

        let mut cells = vec![as_is_cell(baseline)];
        cells.extend(
            outputs
                .iter()
                .filter(|o| o.dataset_idx == dataset_idx)
                .map(|o| o.cell.clone()),
        );

        rank_cells(&mut cells, plan.master_seed, &table.name)?;

        let pooled: Vec<f64> = cells
            .iter()
            .filter(|c| c.sampler.is_some())
            .flat_map(|c| c.delta.iter().copied())
            .collect();
        let median_delta = if pooled.is_empty() {
            None
        } else {
            Some(median_of(&pooled))
        };

        datasets.push(DatasetResult {
            name: table.name.clone(),
            rows: table.rows.len(),
            baseline,
            degenerate,
            median_delta,
            cells,
        });
    }

    Ok(ExperimentResults {
        samplers: plan.samplers.iter().map(|s| s.name().to_string()).collect(),
        budgets: plan.budgets.clone(),
        repeats: plan.repeats,
        master_seed: plan.master_seed,
        datasets,
        warnings,
    })
}

fn position_of(plan: &ExperimentPlan, cell: &CellResult) -> (usize, usize) {
    let s = cell
        .sampler
        .and_then(|s| plan.samplers.iter().position(|&p| p == s))
        .unwrap_or(usize::MAX);
    let b = cell
        .budget
        .and_then(|b| plan.budgets.iter().position(|&p| p == b))
        .unwrap_or(usize::MAX);
    (s, b)
}

/// The shuffled row order a run with this seed sees; row ids in that run's
/// trace index into this table.
pub fn shuffled_for_run(table: &Table, seed: u64) -> Table {
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, "shuffle"));
    table.shuffle(&mut rng)
}

/// One rig-conformant run: shuffle the row order with a seed-derived rng,
/// then run the sampler. Both the bench grid and the `optimize` command go
/// through here.
pub fn single_run(
    table: &Table,
    sampler: SamplerKind,
    budget: usize,
    seed: u64,
) -> Result<crate::samplers::RunResult> {
    let shuffled = shuffled_for_run(table, seed);
    sampler.run(&shuffled, budget, subseed(seed, "search"))
}

fn run_cell(plan: &ExperimentPlan, job: &CellJob) -> Result<CellOutput> {
    let mut d2h = Vec::with_capacity(plan.repeats);
    let mut delta = Vec::with_capacity(plan.repeats);
    let mut run_millis = Vec::with_capacity(plan.repeats);
    for repeat in 0..plan.repeats {
        let seed = cell_seed(
            plan.master_seed,
            &job.table.name,
            job.sampler,
            job.budget,
            repeat,
        );
        let started = Instant::now();
        let run = single_run(job.table, job.sampler, job.effective_budget, seed)?;
        run_millis.push(started.elapsed().as_secs_f64() * 1000.0);
        d2h.push(run.best_d2h);
        if let Some(dv) = delta_score(run.best_d2h, &job.baseline) {
            delta.push(dv);
        }
    }
    let median_d2h = median_of(&d2h);
    Ok(CellOutput {
        dataset_idx: job.dataset_idx,
        cell: CellResult {
            treatment: treatment_label(job.sampler, job.budget),
            sampler: Some(job.sampler),
            budget: Some(job.budget),
            d2h,
            delta,
            median_d2h,
            rank: 0,
            letter: '?',
            run_millis,
        },
    })
}

fn as_is_cell(baseline: BaselineStats) -> CellResult {
    let delta = if baseline.is_degenerate() {
        Vec::new()
    } else {
        vec![0.0] // by definition: the as-is score *is* the mean
    };
    CellResult {
        treatment: AS_IS.to_string(),
        sampler: None,
        budget: None,
        d2h: vec![baseline.d2h_mean],
        delta,
        median_d2h: baseline.d2h_mean,
        rank: 0,
        letter: '?',
        run_millis: Vec::new(),
    }
}

/// Scott-Knott over one dataset's treatments, mapping ranks 1, 2, 3... to
/// letters a, b, c...
pub fn rank_dataset(treatments: &[TreatmentSample], seed: u64) -> Result<RankedGroups> {
    scott_knott_default(treatments, seed)
}

fn rank_cells(cells: &mut [CellResult], master_seed: u64, dataset: &str) -> Result<()> {
    let treatments: Vec<TreatmentSample> = cells
        .iter()
        .map(|c| TreatmentSample::new(c.treatment.clone(), c.d2h.clone()))
        .collect();
    let seed = fnv1a(format!("{master_seed}|{dataset}|rank").as_bytes());
    let ranked = rank_dataset(&treatments, seed)?;
    for cell in cells {
        let group = ranked
            .groups
            .iter()
            .find(|g| g.label == cell.treatment)
            .expect("every treatment was ranked");
        cell.rank = group.rank;
        cell.letter = group.letter;
    }
    Ok(())
}

/// Build the percent-best / when-best summary over every (sampler, budget)
/// treatment. The as-is pseudo-treatment is not summarized.
pub fn percent_best(results: &ExperimentResults) -> SummaryTable {
    let n_datasets = results.datasets.len();
    let mut entries = Vec::new();
    for sampler in &results.samplers {
        for &budget in &results.budgets {
            let treatment = format!("{sampler}-{budget}");
            let mut best_medians = Vec::new();
            for ds in &results.datasets {
                if let Some(cell) = ds.cells.iter().find(|c| c.treatment == treatment) {
                    if cell.letter == 'a' {
                        best_medians.push(cell.median_d2h);
                    }
                }
            }
            let percent_best = if n_datasets == 0 {
                0.0
            } else {
                100.0 * best_medians.len() as f64 / n_datasets as f64
            };
            let when_best = if best_medians.is_empty() {
                None
            } else {
                Some(best_medians.iter().sum::<f64>() / best_medians.len() as f64)
            };
            entries.push(SummaryEntry {
                sampler: sampler.clone(),
                budget,
                treatment,
                percent_best,
                when_best,
            });
        }
    }
    SummaryTable { entries }
}

/// Per-sampler wall-clock summary (in milliseconds); rendered only in the
/// markdown report, never in the deterministic formats.
#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeSummary {
    pub sampler: String,
    pub runs: usize,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub max_ms: f64,
}

pub fn runtime_summary(results: &ExperimentResults) -> Vec<RuntimeSummary> {
    results
        .samplers
        .iter()
        .map(|sampler| {
            let times: Vec<f64> = results
                .datasets
                .iter()
                .flat_map(|ds| {
                    ds.cells
                        .iter()
                        .filter(|c| c.sampler.map(|s| s.name()) == Some(sampler.as_str()))
                        .flat_map(|c| c.run_millis.iter().copied())
                })
                .collect();
            if times.is_empty() {
                RuntimeSummary {
                    sampler: sampler.clone(),
                    runs: 0,
                    mean_ms: 0.0,
                    median_ms: 0.0,
                    max_ms: 0.0,
                }
            } else {
                RuntimeSummary {
                    sampler: sampler.clone(),
                    runs: times.len(),
                    mean_ms: times.iter().sum::<f64>() / times.len() as f64,
                    median_ms: median_of(&times),
                    max_ms: times.iter().cloned().fold(0.0, f64::max),
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn fixture_csv(dir: &tempfile::TempDir, name: &str, rows: usize) -> PathBuf {
        let path = dir.path().join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "X,w,Y+,Z-").unwrap();
        for i in 0..rows {
            let w = if i % 3 == 0 { "on" } else { "off" };
            writeln!(f, "{i},{w},{},{}", i * 2, 100 - i).unwrap();
        }
        path
    }

    #[test]
    fn plan_parsing_defaults_and_errors() {
        let plan = ExperimentPlan::parse(
            "datasets = a.csv, b.csv\nsamplers = RANDOM, LITE\nbudgets = 12,6\nrepeats = 3\nseed = 9\nworkers = 2\n",
        )
        .unwrap();
        assert_eq!(plan.datasets.len(), 2);
        assert_eq!(plan.samplers, vec![SamplerKind::Random, SamplerKind::Lite]);
        assert_eq!(plan.budgets, vec![6, 12]); // sorted ascending
        assert_eq!(plan.repeats, 3);
        assert_eq!(plan.master_seed, 9);
        assert_eq!(plan.workers, 2);

        assert!(ExperimentPlan::parse("").is_err()); // no datasets
        assert!(ExperimentPlan::parse("datasets = a.csv\nbogus = 1").is_err());
        assert!(ExperimentPlan::parse("datasets = a.csv\nsamplers = TURBO").is_err());
        assert!(ExperimentPlan::parse("datasets = a.csv\nbudgets = 3\nsamplers = LITE").is_err());
        assert!(ExperimentPlan::parse("datasets = a.csv\nrepeats = 0").is_err());
    }

    #[test]
    fn cell_seeds_are_stable_and_distinct() {
        let a = cell_seed(1, "auto93", SamplerKind::Lite, 6, 0);
        assert_eq!(a, cell_seed(1, "auto93", SamplerKind::Lite, 6, 0));
        assert_ne!(a, cell_seed(1, "auto93", SamplerKind::Lite, 6, 1));
        assert_ne!(a, cell_seed(1, "auto93", SamplerKind::Line, 6, 0));
        assert_ne!(a, cell_seed(2, "auto93", SamplerKind::Lite, 6, 0));
        assert_ne!(a, cell_seed(1, "wine", SamplerKind::Lite, 6, 0));
    }

    #[test]
    fn experiment_is_deterministic_and_complete() {
        let dir = tempfile::tempdir().unwrap();
        let csv = fixture_csv(&dir, "ramp.csv", 40);
        let plan = ExperimentPlan {
            datasets: vec![csv],
            samplers: vec![SamplerKind::Random, SamplerKind::Lite],
            budgets: vec![6, 12],
            repeats: 2,
            master_seed: 5,
            workers: 2,
        };
        let a = run_experiment(&plan).unwrap();
        let b = run_experiment(&plan).unwrap();
        // determinism is a contract on the serialized reports; wall-clock
        // timings are in-memory only
        for format in [report::ReportFormat::Json, report::ReportFormat::Csv] {
            assert_eq!(
                report::emit_report(&a, format).unwrap(),
                report::emit_report(&b, format).unwrap()
            );
        }

        let ds = &a.datasets[0];
        assert_eq!(ds.cells.len(), 1 + 2 * 2); // as-is + sampler x budget
        assert_eq!(ds.cells[0].treatment, AS_IS);
        for cell in &ds.cells[1..] {
            assert_eq!(cell.d2h.len(), 2);
            assert_eq!(cell.delta.len(), 2);
            assert!(cell.delta.iter().all(|&d| d <= 100.0));
            assert!(cell.rank >= 1);
        }
        // distinct seeds per repeat: repeats of one cell rarely tie exactly
        assert!(a.warnings.is_empty());
    }

    #[test]
    fn budget_capped_with_warning() {
        let dir = tempfile::tempdir().unwrap();
        let csv = fixture_csv(&dir, "tiny.csv", 8);
        let plan = ExperimentPlan {
            datasets: vec![csv],
            samplers: vec![SamplerKind::Random],
            budgets: vec![6, 50],
            repeats: 2,
            master_seed: 1,
            workers: 1,
        };
        let results = run_experiment(&plan).unwrap();
        assert_eq!(results.warnings.len(), 1);
        assert!(results.warnings[0].contains("capped"));
        // capped cell labels the whole pool, hence finds the global best
        let cell = results.datasets[0]
            .cells
            .iter()
            .find(|c| c.treatment == "RANDOM-50")
            .unwrap();
        assert!(cell.d2h.iter().all(|&d| d == results.datasets[0].baseline.d2h_min));
    }

    #[test]
    fn percent_best_arithmetic_on_hand_built_results() {
        // five datasets; LITE-6 ranks 'a' on three of them at median d2h
        // 0.11, 0.35, 0.14 -> percent-best 60, when-best mean of those
        let cell = |treatment: &str, sampler, median: f64, letter: char| CellResult {
            treatment: treatment.into(),
            sampler,
            budget: Some(6),
            d2h: vec![median],
            delta: vec![],
            median_d2h: median,
            rank: if letter == 'a' { 1 } else { 2 },
            letter,
            run_millis: vec![],
        };
        let datasets: Vec<DatasetResult> = [('a', 0.11), ('b', 0.40), ('a', 0.35), ('c', 0.50), ('a', 0.14)]
            .iter()
            .enumerate()
            .map(|(i, &(letter, median))| DatasetResult {
                name: format!("d{i}"),
                rows: 10,
                baseline: BaselineStats {
                    d2h_min: 0.05,
                    d2h_mean: 0.6,
                },
                degenerate: false,
                median_delta: Some(50.0),
                cells: vec![cell("LITE-6", Some(SamplerKind::Lite), median, letter)],
            })
            .collect();
        let results = ExperimentResults {
            samplers: vec!["LITE".into()],
            budgets: vec![6],
            repeats: 1,
            master_seed: 0,
            datasets,
            warnings: vec![],
        };
        let summary = percent_best(&results);
        let entry = &summary.entries[0];
        assert_eq!(entry.percent_best, 60.0);
        let want = (0.11 + 0.35 + 0.14) / 3.0;
        assert!((entry.when_best.unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn degenerate_dataset_reports_no_delta() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("flat.csv");
        std::fs::write(&path, "X,Y+\n1,7\n2,7\n3,7\n4,7\n5,7\n6,7\n").unwrap();
        let plan = ExperimentPlan {
            datasets: vec![path],
            samplers: vec![SamplerKind::Random],
            budgets: vec![2],
            repeats: 3,
            master_seed: 4,
            workers: 1,
        };
        let results = run_experiment(&plan).unwrap();
        let ds = &results.datasets[0];
        assert!(ds.degenerate);
        assert_eq!(ds.median_delta, None);
        for cell in &ds.cells {
            assert!(cell.delta.is_empty());
            assert_eq!(cell.letter, 'a'); // every treatment ties
        }
        let md = report::emit_report(&results, report::ReportFormat::Markdown).unwrap();
        assert!(md.contains("| flat | 6 | n/a |"));
    }

    #[test]
    fn as_is_delta_is_zero_and_summary_sums() {
        let dir = tempfile::tempdir().unwrap();
        let csv1 = fixture_csv(&dir, "one.csv", 30);
        let csv2 = fixture_csv(&dir, "two.csv", 45);
        let plan = ExperimentPlan {
            datasets: vec![csv1, csv2],
            samplers: vec![SamplerKind::Random, SamplerKind::Line],
            budgets: vec![6, 12],
            repeats: 3,
            master_seed: 2,
            workers: 1,
        };
        let results = run_experiment(&plan).unwrap();
        for ds in &results.datasets {
            let as_is = &ds.cells[0];
            assert_eq!(as_is.delta, vec![0.0]);
        }
        let summary = percent_best(&results);
        assert_eq!(summary.entries.len(), 4);
        let total: f64 = summary.entries.iter().map(|e| e.percent_best).sum();
        assert!(total >= 100.0, "every dataset awards at least one 'a': {total}");
        for e in &summary.entries {
            assert!(e.percent_best >= 0.0 && e.percent_best <= 100.0);
            assert_eq!(e.when_best.is_some(), e.percent_best > 0.0);
        }
    }
}
