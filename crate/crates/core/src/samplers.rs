//! Label-budgeted pool samplers: RANDOM, LINE, and LITE.
//!
//! Samplers see the table's independent columns through a [`Pool`] and its
//! goal values only through a [`Labeler`], which meters every reveal against
//! a fixed budget. There is no other path to a y-value, so budget accounting
//! holds by construction.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::str::FromStr;

use crate::dataio::{Cell, ColKind, Table};
use crate::objective::Heaven;
use crate::{Error, Result};

/// LITE starts from this many uniformly labeled rows.
pub const LITE_INIT: usize = 4;

/// Smallest budget LITE accepts: its init rows plus one acquisition.
pub const LITE_MIN_BUDGET: usize = LITE_INIT + 1;

/// Read-only view of a table's independent columns. Samplers choose rows
/// through this; they never touch goal cells.
pub struct Pool<'a> {
    table: &'a Table,
    x_cols: Vec<usize>,
}

impl<'a> Pool<'a> {
    pub fn new(table: &'a Table) -> Pool<'a> {
        Pool {
            table,
            x_cols: table.x_indices(),
        }
    }

    pub fn len(&self) -> usize {
        self.table.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.rows.is_empty()
    }

    pub fn x_cols(&self) -> &[usize] {
        &self.x_cols
    }

    /// Independent cell of a row.
    pub fn x_cell(&self, row: usize, col: usize) -> &Cell {
        debug_assert!(self.x_cols.contains(&col));
        &self.table.rows[row].cells[col]
    }

    /// Column metadata for naive-bayes likelihoods.
    pub fn column(&self, col: usize) -> &crate::dataio::Column {
        &self.table.columns[col]
    }

    /// Distance between two rows over independent columns only.
    pub fn x_dist(&self, a: usize, b: usize) -> f64 {
        self.table
            .row_dist(&self.table.rows[a], &self.table.rows[b], &self.x_cols)
            .expect("pool tables always have independent columns")
    }
}

/// Budget-metered oracle over a table's goal values. Labeling a new row
/// costs one unit and returns its d2h; re-reading a revealed row is free.
pub struct Labeler<'a> {
    table: &'a Table,
    heaven: Heaven,
    budget: usize,
    revealed: HashMap<usize, f64>,
    trace: Vec<(usize, f64)>,
}

impl<'a> Labeler<'a> {
    pub fn new(table: &'a Table, budget: usize) -> Result<Labeler<'a>> {
        if budget < 1 {
            return Err(Error::BudgetTooSmall { min: 1, got: budget });
        }
        Ok(Labeler {
            table,
            heaven: Heaven::new(table),
            budget,
            revealed: HashMap::new(),
            trace: Vec::new(),
        })
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn spent(&self) -> usize {
        self.trace.len()
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.spent()
    }

    pub fn is_revealed(&self, row: usize) -> bool {
        self.revealed.contains_key(&row)
    }

    /// Reveal a row's d2h, charging the budget on first touch.
    pub fn label(&mut self, row: usize) -> Result<f64> {
        if let Some(&d) = self.revealed.get(&row) {
            return Ok(d);
        }
        if self.spent() >= self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        let d = self.heaven.d2h(self.table, &self.table.rows[row])?;
        self.revealed.insert(row, d);
        self.trace.push((row, d));
        Ok(d)
    }

    /// First-reveal order of (row, d2h) pairs.
    pub fn trace(&self) -> &[(usize, f64)] {
        &self.trace
    }
}

/// Outcome of one sampler run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_row: usize,
    pub best_d2h: f64,
    pub labels_spent: usize,
    pub trace: Vec<(usize, f64)>,
    pub seed: u64,
}

impl RunResult {
    fn from_labeler(labeler: &Labeler, seed: u64) -> RunResult {
        let (best_row, best_d2h) = labeler
            .trace()
            .iter()
            .copied()
            .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
            .expect("samplers label at least one row");
        RunResult {
            best_row,
            best_d2h,
            labels_spent: labeler.spent(),
            trace: labeler.trace().to_vec(),
            seed,
        }
    }
}

/// The three pool-based samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SamplerKind {
    Random,
    Line,
    Lite,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 3] = [SamplerKind::Random, SamplerKind::Line, SamplerKind::Lite];

    pub fn name(&self) -> &'static str {
        match self {
            SamplerKind::Random => "RANDOM",
            SamplerKind::Line => "LINE",
            SamplerKind::Lite => "LITE",
        }
    }

    /// One seeded run against a table. The rng, pool view, and labeler are
    /// built here so a (table, budget, seed) triple fully determines the
    /// result.
    pub fn run(&self, table: &Table, budget: usize, seed: u64) -> Result<RunResult> {
        let pool = Pool::new(table);
        let mut labeler = Labeler::new(table, budget)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            SamplerKind::Random => random_search(&pool, &mut labeler, &mut rng)?,
            SamplerKind::Line => line_search(&pool, &mut labeler, &mut rng)?,
            SamplerKind::Lite => lite_search(&pool, &mut labeler, &mut rng)?,
        }
        Ok(RunResult::from_labeler(&labeler, seed))
    }
}

impl std::fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<SamplerKind> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RANDOM" | "RAND" => Ok(SamplerKind::Random),
            "LINE" => Ok(SamplerKind::Line),
            "LITE" => Ok(SamplerKind::Lite),
            other => Err(Error::UnknownSampler(other.to_string())),
        }
    }
}

/// Label `budget` distinct uniformly chosen rows (the whole pool when the
/// budget exceeds it).
pub fn random_search<R: Rng>(pool: &Pool, labeler: &mut Labeler, rng: &mut R) -> Result<()> {
    let take = labeler.budget().min(pool.len());
    for row in rand::seq::index::sample(rng, pool.len(), take) {
        labeler.label(row)?;
    }
    Ok(())
}

/// Diversity sampling: first pick uniform, every later pick drawn with
/// probability proportional to its squared minimum distance to the rows
/// already picked. All picks are labeled once selection ends.
pub fn line_search<R: Rng>(pool: &Pool, labeler: &mut Labeler, rng: &mut R) -> Result<()> {
    let n = pool.len();
    let take = labeler.budget().min(n);
    let mut picked = Vec::with_capacity(take);
    let mut in_set = vec![false; n];

    let first = rng.random_range(0..n);
    picked.push(first);
    in_set[first] = true;

    // min distance from each row to the picked set, refreshed per pick
    let mut min_dist: Vec<f64> = (0..n).map(|i| pool.x_dist(i, first)).collect();

    while picked.len() < take {
        let candidates: Vec<usize> = (0..n).filter(|&i| !in_set[i]).collect();
        let weights: Vec<f64> = candidates.iter().map(|&i| min_dist[i] * min_dist[i]).collect();
        let total: f64 = weights.iter().sum();
        let next = if total > 0.0 && total.is_finite() {
            let dist = WeightedIndex::new(&weights)
                .expect("weights are nonnegative with a positive sum");
            candidates[dist.sample(rng)]
        } else {
            // every remaining row sits on the picked set; fall back to uniform
            candidates[rng.random_range(0..candidates.len())]
        };
        picked.push(next);
        in_set[next] = true;
        for i in 0..n {
            if !in_set[i] {
                min_dist[i] = min_dist[i].min(pool.x_dist(i, next));
            }
        }
    }

    for row in picked {
        labeler.label(row)?;
    }
    Ok(())
}

/// LINE's selection weights for one step: squared min distance from each
/// unpicked row to the picked set. Split out so the weighting is testable
/// against hand-enumerated cases.
pub fn line_weights(pool: &Pool, picked: &[usize]) -> Vec<(usize, f64)> {
    (0..pool.len())
        .filter(|i| !picked.contains(i))
        .map(|i| {
            let d = picked
                .iter()
                .map(|&p| pool.x_dist(i, p))
                .fold(f64::INFINITY, f64::min);
            (i, d * d)
        })
        .collect()
}

/// Naive-bayes acquisition: label 4 uniform rows, then repeatedly sort the
/// labeled rows by d2h, split into ceil(sqrt(N)) good / rest, fit a
/// two-class model on the independent columns, and label the unlabeled row
/// maximizing the good-vs-rest log-likelihood gap.
pub fn lite_search<R: Rng>(pool: &Pool, labeler: &mut Labeler, rng: &mut R) -> Result<()> {
    if labeler.budget() < LITE_MIN_BUDGET {
        return Err(Error::BudgetTooSmall {
            min: LITE_MIN_BUDGET,
            got: labeler.budget(),
        });
    }
    let n = pool.len();
    let init = LITE_INIT.min(n);
    for row in rand::seq::index::sample(rng, n, init) {
        labeler.label(row)?;
    }

    while labeler.remaining() > 0 {
        let unlabeled: Vec<usize> = (0..n).filter(|&i| !labeler.is_revealed(i)).collect();
        if unlabeled.is_empty() {
            break; // pool exhausted before the budget
        }

        // sort labeled rows by d2h, best first; ties break on row id so
        // reruns are exact
        let mut labeled: Vec<(usize, f64)> = labeler.trace().to_vec();
        labeled.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        let n_good = (labeled.len() as f64).sqrt().ceil() as usize;
        let good: Vec<usize> = labeled[..n_good].iter().map(|&(r, _)| r).collect();
        let rest: Vec<usize> = labeled[n_good..].iter().map(|&(r, _)| r).collect();

        let model = NbModel::fit(pool, &good, &rest)?;
        let mut best: Option<(usize, f64)> = None;
        for &row in &unlabeled {
            let score = model.loglike(pool, row, NbClass::Good) - model.loglike(pool, row, NbClass::Rest);
            // strict > keeps the lowest row index on ties
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((row, score));
            }
        }
        let (pick, _) = best.expect("unlabeled set is non-empty");
        labeler.label(pick)?;
    }
    Ok(())
}

/// Good-vs-rest class tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbClass {
    Good,
    Rest,
}

/// m-estimate smoothing weight for symbolic frequencies and class priors.
const NB_M: f64 = 2.0;

#[derive(Debug, Clone)]
enum ColModel {
    /// Per-class mean and standard deviation; `None` when a class saw only
    /// missing cells.
    Numeric {
        good: Option<(f64, f64)>,
        rest: Option<(f64, f64)>,
    },
    /// Per-class value counts plus the distinct-value tally shared by both
    /// classes.
    Symbolic {
        good: HashMap<String, usize>,
        good_total: usize,
        rest: HashMap<String, usize>,
        rest_total: usize,
        distinct: usize,
    },
}

/// Two-class naive-bayes model over a pool's independent columns.
///
/// Numeric columns use Gaussian likelihoods with the standard deviation
/// floored at `1e-9 * (hi - lo) + 1e-12`; symbolic columns use m-estimate
/// frequencies with m = 2. Class priors get the same m-estimate treatment,
/// so they stay positive and sum to 1.
#[derive(Debug, Clone)]
pub struct NbModel {
    cols: Vec<(usize, ColModel)>,
    log_prior_good: f64,
    log_prior_rest: f64,
}

impl NbModel {
    /// Fit from two disjoint labeled row sets. Both classes must be
    /// non-empty.
    pub fn fit(pool: &Pool, good: &[usize], rest: &[usize]) -> Result<NbModel> {
        if good.is_empty() {
            return Err(Error::EmptyClass("good"));
        }
        if rest.is_empty() {
            return Err(Error::EmptyClass("rest"));
        }
        let n = (good.len() + rest.len()) as f64;
        let log_prior_good = ((good.len() as f64 + NB_M * 0.5) / (n + NB_M)).ln();
        let log_prior_rest = ((rest.len() as f64 + NB_M * 0.5) / (n + NB_M)).ln();

        let mut cols = Vec::new();
        for &c in pool.x_cols() {
            let col = pool.column(c);
            let model = match col.kind {
                ColKind::Numeric => ColModel::Numeric {
                    good: gaussian_stats(pool, c, good),
                    rest: gaussian_stats(pool, c, rest),
                },
                ColKind::Symbolic => {
                    let (good_counts, good_total) = sym_counts(pool, c, good);
                    let (rest_counts, rest_total) = sym_counts(pool, c, rest);
                    let distinct = {
                        let mut values: Vec<&String> =
                            good_counts.keys().chain(rest_counts.keys()).collect();
                        values.sort();
                        values.dedup();
                        values.len().max(1)
                    };
                    ColModel::Symbolic {
                        good: good_counts,
                        good_total,
                        rest: rest_counts,
                        rest_total,
                        distinct,
                    }
                }
            };
            cols.push((c, model));
        }
        Ok(NbModel {
            cols,
            log_prior_good,
            log_prior_rest,
        })
    }

    /// Log prior plus the per-column log likelihoods; missing cells are
    /// skipped.
    pub fn loglike(&self, pool: &Pool, row: usize, class: NbClass) -> f64 {
        let mut total = match class {
            NbClass::Good => self.log_prior_good,
            NbClass::Rest => self.log_prior_rest,
        };
        for (c, model) in &self.cols {
            let cell = pool.x_cell(row, *c);
            if cell.is_missing() {
                continue;
            }
            match model {
                ColModel::Numeric { good, rest } => {
                    let stats = match class {
                        NbClass::Good => good,
                        NbClass::Rest => rest,
                    };
                    if let (Some((mean, sd)), Some(v)) = (stats, cell.num()) {
                        total += log_gaussian(v, *mean, *sd);
                    }
                }
                ColModel::Symbolic {
                    good,
                    good_total,
                    rest,
                    rest_total,
                    distinct,
                } => {
                    if let Cell::Sym(s) = cell {
                        let (counts, n_class) = match class {
                            NbClass::Good => (good, good_total),
                            NbClass::Rest => (rest, rest_total),
                        };
                        let count = counts.get(s).copied().unwrap_or(0) as f64;
                        let p = (count + NB_M / *distinct as f64) / (*n_class as f64 + NB_M);
                        total += p.ln();
                    }
                }
            }
        }
        total
    }
}

fn gaussian_stats(pool: &Pool, col: usize, rows: &[usize]) -> Option<(f64, f64)> {
    let vals: Vec<f64> = rows
        .iter()
        .filter_map(|&r| pool.x_cell(r, col).num())
        .collect();
    if vals.is_empty() {
        return None;
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let span = {
        let c = pool.column(col);
        if c.hi > c.lo {
            c.hi - c.lo
        } else {
            0.0
        }
    };
    let sd = var.sqrt().max(1e-9 * span + 1e-12);
    Some((mean, sd))
}

fn sym_counts(pool: &Pool, col: usize, rows: &[usize]) -> (HashMap<String, usize>, usize) {
    let mut counts = HashMap::new();
    let mut total = 0;
    for &r in rows {
        if let Cell::Sym(s) = pool.x_cell(r, col) {
            *counts.entry(s.clone()).or_insert(0) += 1;
            total += 1;
        }
    }
    (counts, total)
}

fn log_gaussian(v: f64, mean: f64, sd: f64) -> f64 {
    let z = (v - mean) / sd;
    -0.5 * (2.0 * std::f64::consts::PI).ln() - sd.ln() - 0.5 * z * z
}
