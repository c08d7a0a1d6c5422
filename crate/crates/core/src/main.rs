//! Command-line front end: one-shot optimization runs, full bench grids,
//! Scott-Knott re-ranking of saved results, bucket-occupancy probes, and
//! sample-size floors.

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::ExitCode;

use neo::bingo::{bingo_sweep, bingo_verdict, BingoVerdict, DEFAULT_VERDICT_THRESHOLD};
use neo::complexity::{n_bestarm, n_neo, n_rewardfree, Regime, RegimeParams};
use neo::harness::{
    emit_report, run_experiment, shuffled_for_run, single_run, ExperimentPlan, Report,
    ReportFormat,
};
use neo::objective::{baseline_stats, delta_score};
use neo::samplers::SamplerKind;
use neo::stats::{scott_knott, TreatmentSample, DEFAULT_CLIFF_SMALL, DEFAULT_CONF, DEFAULT_RESAMPLES};
use neo::{Result, Table};

#[derive(Parser)]
#[command(name = "neo", version, about = "near-enough optimization over tabular decision datasets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One sampler run on one dataset; prints the best row, its d2h, and delta.
    Optimize(OptimizeArgs),
    /// Run a full (dataset x sampler x budget x repeat) experiment plan.
    Bench(BenchArgs),
    /// Re-rank the treatments of a saved json report with Scott-Knott.
    Rank(RankArgs),
    /// Probe dataset topology: bucket occupancy before/after more divisions.
    Bingo(BingoArgs),
    /// Closed-form sample-size floors per optimization regime.
    Samplesize(SampleSizeArgs),
}

#[derive(Args)]
struct OptimizeArgs {
    /// Dataset CSV path.
    csv: PathBuf,
    /// RANDOM, LINE, or LITE.
    #[arg(long, default_value = "LITE")]
    sampler: String,
    /// Label budget.
    #[arg(long, default_value_t = 50)]
    budget: usize,
    /// Run seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Plan file: flat `key = value` lines (datasets, samplers, budgets,
    /// repeats, seed, workers).
    #[arg(long)]
    plan: PathBuf,
    /// markdown, csv, or json.
    #[arg(long, default_value = "markdown")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    /// A json report produced by `bench --format json`.
    results: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CLIFF_SMALL)]
    cliff_small: f64,
    #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
    resamples: usize,
    #[arg(long, default_value_t = DEFAULT_CONF)]
    conf: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BingoArgs {
    /// Dataset CSV paths.
    #[arg(required = true)]
    csv: Vec<PathBuf>,
    /// Accepted sweep iterations.
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Occupancy floor per bucket (default: 2 * dims).
    #[arg(long)]
    min_pts: Option<usize>,
    /// Filled-bucket ceiling for the data-light verdict.
    #[arg(long, default_value_t = DEFAULT_VERDICT_THRESHOLD)]
    threshold: f64,
    /// text, csv, or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct SampleSizeArgs {
    /// neo, bestarm, or rewardfree.
    #[arg(long)]
    regime: String,
    /// Confidence in (0, 1).
    #[arg(long = "C", default_value_t = 0.95)]
    c: f64,
    /// Tolerance in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Action count (bestarm, rewardfree).
    #[arg(long = "A", default_value_t = 1)]
    a: u64,
    /// State count (rewardfree).
    #[arg(long = "S", default_value_t = 1)]
    s: u64,
    /// Planning horizon (rewardfree).
    #[arg(long = "H", default_value_t = 1)]
    h: u64,
    /// Also print a table over C and eps grids.
    #[arg(long)]
    grid: bool,
    /// Comma-separated C values for --grid.
    #[arg(long, default_value = "0.9,0.95,0.99")]
    grid_c: String,
    /// Comma-separated eps values for --grid.
    #[arg(long, default_value = "0.01,0.02,0.05,0.1,0.2")]
    grid_eps: String,
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Die quietly when a pager closes the pipe instead of panicking mid-print.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Optimize(args) => optimize(args),
        Command::Bench(args) => bench(args),
        Command::Rank(args) => rank(args),
        Command::Bingo(args) => bingo(args),
        Command::Samplesize(args) => samplesize(args),
    }
}

fn optimize(args: OptimizeArgs) -> Result<()> {
    let sampler: SamplerKind = args.sampler.parse()?;
    let table = Table::load(&args.csv)?;
    let budget = args.budget.min(table.rows.len());
    let stats = baseline_stats(&table)?;
    let run = single_run(&table, sampler, budget, args.seed)?;

    // best_row indexes the shuffled order; reconstruct it to print cells
    let shuffled = shuffled_for_run(&table, args.seed);
    let best = &shuffled.rows[run.best_row];

    println!("dataset: {} ({} rows)", table.name, table.rows.len());
    println!("sampler: {sampler}, budget {budget}, seed {}", args.seed);
    let header: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
    println!("best row: {}", header.join(","));
    let cells: Vec<String> = best.cells.iter().map(|c| c.to_string()).collect();
    println!("          {}", cells.join(","));
    println!("d2h: {:.4} (table min {:.4}, mean {:.4})", run.best_d2h, stats.d2h_min, stats.d2h_mean);
    match delta_score(run.best_d2h, &stats) {
        Some(d) => println!("delta: {:.1}", d),
        None => println!("delta: n/a (degenerate dataset: every row scores the same)"),
    }
    println!("labels spent: {}", run.labels_spent);
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let format: ReportFormat = args.format.parse()?;
    let plan = ExperimentPlan::from_file(&args.plan)?;
    let results = run_experiment(&plan)?;
    let text = emit_report(&results, format)?;
    match args.out {
        Some(path) => std::fs::write(&path, text).map_err(|source| neo::Error::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(())
}

fn rank(args: RankArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.results).map_err(|source| neo::Error::Io {
        path: args.results.display().to_string(),
        source,
    })?;
    let report: Report = serde_json::from_str(&text)?;
    for ds in &report.results.datasets {
        let treatments: Vec<TreatmentSample> = ds
            .cells
            .iter()
            .map(|c| TreatmentSample::new(c.treatment.clone(), c.d2h.clone()))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let ranked = scott_knott(
            &treatments,
            args.cliff_small,
            args.resamples,
            args.conf,
            &mut rng,
        )?;
        println!("{} ({} rows)", ds.name, ds.rows);
        for g in &ranked.groups {
            println!("  {} {:>6.2} {}", g.letter, g.median * 100.0, g.label);
        }
    }
    Ok(())
}

fn bingo(args: BingoArgs) -> Result<()> {
    let tables: Vec<Table> = args.csv.iter().map(Table::load).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let records = bingo_sweep(&tables, args.iterations, args.min_pts, &mut rng)?;
    let verdict = bingo_verdict(&records, args.threshold)?;
    match args.format.trim().to_ascii_lowercase().as_str() {
        "text" => print_bingo_text(&verdict),
        "csv" => print_bingo_csv(&verdict),
        "json" => println!("{}", serde_json::to_string_pretty(&verdict)?),
        other => return Err(neo::Error::UnknownFormat(other.to_string())),
    }
    Ok(())
}

fn print_bingo_text(v: &BingoVerdict) {
    println!("bands (grouped by floor(log2 rows)):");
    println!(
        "{:>10} {:>10} {:>8} {:>15} {:>14} {:>13}",
        "log2(rows)", "rows", "records", "buckets-before", "buckets-after", "filled-ratio"
    );
    for b in &v.bands {
        println!(
            "{:>10} {:>10.0} {:>8} {:>15} {:>14} {:>12.2}%",
            b.log2_rows,
            b.mean_rows,
            b.records,
            b.median_filled_before,
            b.median_filled_after,
            b.median_filled_ratio * 100.0
        );
    }
    println!("\nverdicts (threshold: median filled <= {}):", v.threshold);
    for d in &v.datasets {
        println!("  {}: median filled {:.0} -> {}", d.dataset, d.median_filled, d.verdict);
    }
}

fn print_bingo_csv(v: &BingoVerdict) {
    println!("# bands");
    println!("log2_rows,mean_rows,records,median_filled_before,median_filled_after,median_filled_ratio");
    for b in &v.bands {
        println!(
            "{},{},{},{},{},{}",
            b.log2_rows,
            b.mean_rows,
            b.records,
            b.median_filled_before,
            b.median_filled_after,
            b.median_filled_ratio
        );
    }
    println!();
    println!("# verdicts");
    println!("dataset,median_filled,verdict");
    for d in &v.datasets {
        println!("{},{},{}", d.dataset, d.median_filled, d.verdict);
    }
}

fn samplesize(args: SampleSizeArgs) -> Result<()> {
    let regime: Regime = args.regime.parse()?;
    let params = RegimeParams {
        c: args.c,
        eps: args.eps,
        a: args.a,
        s: args.s,
        h: args.h,
    };
    let n = regime.samples(&params)?;
    match regime {
        Regime::NearEnough => println!(
            "regime neo: C={} eps={} -> at least {n} samples",
            args.c, args.eps
        ),
        Regime::BestArm => println!(
            "regime bestarm: C={} eps={} A={} -> at least {n} samples",
            args.c, args.eps, args.a
        ),
        Regime::RewardFree => println!(
            "regime rewardfree: C={} eps={} S={} A={} H={} -> at least {n} samples",
            args.c, args.eps, args.s, args.a, args.h
        ),
    }

    if args.grid {
        let cs = parse_grid(&args.grid_c, "grid-c")?;
        let epss = parse_grid(&args.grid_eps, "grid-eps")?;
        println!();
        let eps_header: Vec<String> = epss.iter().map(|e| format!("eps={e}")).collect();
        println!("{:>8} {}", "C", eps_header.join(" "));
        for &c in &cs {
            let mut line = format!("{c:>8}");
            for &eps in &epss {
                let n = match regime {
                    Regime::NearEnough => n_neo(c, eps)?,
                    Regime::BestArm => n_bestarm(c, eps, args.a)?,
                    Regime::RewardFree => n_rewardfree(c, eps, args.s, args.a, args.h)?,
                };
                line.push_str(&format!(" {n:>width$}", width = eps_header[0].len()));
            }
            println!("{line}");
        }
    }
    Ok(())
}

fn parse_grid(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| neo::Error::Plan(format!("bad {what} value '{s}'")))
        })
        .collect()
}
