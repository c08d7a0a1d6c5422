//! Bucket-occupancy probe for data topology.
//!
//! Rows are projected onto `d` dimensions, each defined by a pair of
//! mutually distant rows ("korners") found Fastmap-style, then binned into
//! `b` bins per dimension. When data clumps, the number of occupied buckets
//! stays far below `b^d`, which is the signal that a handful of labels can
//! cover the whole decision space.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::dataio::{Row, Table};
use crate::stats::median_of;
use crate::{Error, Result};

/// One projection dimension: a pair of distant rows and their cached
/// distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Korner {
    pub k1: usize,
    pub k2: usize,
    pub dist: f64,
}

/// The `d` corner pairs defining a projection. `degenerate` is set when the
/// whole table is a single point and no positive-distance pair exists.
#[derive(Debug, Clone, PartialEq)]
pub struct KornerSet {
    pub pairs: Vec<Korner>,
    pub degenerate: bool,
}

/// Occupancy of the `b^d` bucket grid. Bucket coordinates are vectors of
/// length `d` with entries in `[0, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketGrid {
    pub dims: usize,
    pub bins: usize,
    pub min_pts: usize,
    pub occupancy: BTreeMap<Vec<u16>, usize>,
}

impl BucketGrid {
    /// Buckets holding at least `min_pts` rows.
    pub fn filled(&self) -> usize {
        self.occupancy.values().filter(|&&n| n >= self.min_pts).count()
    }

    pub fn total_rows(&self) -> usize {
        self.occupancy.values().sum()
    }

    pub fn capacity(&self) -> f64 {
        (self.bins as f64).powi(self.dims as i32)
    }
}

/// One accepted sweep iteration: filled-bucket counts before and after
/// increasing the data divisions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub dataset: String,
    pub rows: usize,
    pub log2_rows: u32,
    pub d1: usize,
    pub b1: usize,
    pub n1: usize,
    pub d2: usize,
    pub b2: usize,
    pub n2: usize,
}

impl SweepRecord {
    pub fn capacity1(&self) -> f64 {
        (self.b1 as f64).powi(self.d1 as i32)
    }

    pub fn capacity2(&self) -> f64 {
        (self.b2 as f64).powi(self.d2 as i32)
    }
}

/// Default bucket occupancy floor: `2 d`, following density-clustering
/// practice.
pub fn default_min_pts(dims: usize) -> usize {
    2 * dims
}

/// Pick `d` korner pairs: a random row seeds the first pair (farthest row,
/// then farthest-from-that); each later pair starts from the row maximizing
/// its minimum distance to every korner so far recruited.
pub fn korners<R: Rng>(table: &Table, dims: usize, rng: &mut R) -> Result<KornerSet> {
    if table.rows.len() < 2 {
        return Err(Error::TooFewRows);
    }
    let cols = table.x_indices();
    let dist = |a: usize, b: usize| -> f64 {
        table
            .row_dist(&table.rows[a], &table.rows[b], &cols)
            .expect("tables always have independent columns")
    };
    let farthest_from = |origin: usize| -> (usize, f64) {
        let mut best = (origin, 0.0);
        for i in 0..table.rows.len() {
            let d = dist(origin, i);
            if d > best.1 {
                best = (i, d);
            }
        }
        best
    };

    let seed_row = rng.random_range(0..table.rows.len());
    let (k1, _) = farthest_from(seed_row);
    let (k2, d12) = farthest_from(k1);
    if d12 <= 0.0 {
        // single-point table: keep the coordinate length at `dims` anyway
        return Ok(KornerSet {
            pairs: vec![Korner { k1, k2, dist: 0.0 }; dims.max(1)],
            degenerate: true,
        });
    }

    let mut recruited = vec![k1, k2];
    let mut pairs = vec![Korner { k1, k2, dist: d12 }];
    while pairs.len() < dims {
        // next korner: max over rows of the min distance to all prior korners
        let mut best = (0, f64::NEG_INFINITY);
        for i in 0..table.rows.len() {
            let min_d = recruited
                .iter()
                .map(|&k| dist(i, k))
                .fold(f64::INFINITY, f64::min);
            if min_d > best.1 {
                best = (i, min_d);
            }
        }
        let ka = best.0;
        let (kb, dab) = farthest_from(ka);
        pairs.push(Korner {
            k1: ka,
            k2: kb,
            dist: dab,
        });
        recruited.push(ka);
        recruited.push(kb);
    }
    Ok(KornerSet {
        pairs,
        degenerate: false,
    })
}

/// Bucket coordinates of one row: per dimension, the cosine-rule position
/// `t = (D(k1,r)^2 + D(k1,k2)^2 - D(k2,r)^2) / (2 D(k1,k2)^2)`, clamped to
/// `[0, 1]`, then floored into one of `b` bins. A zero-distance pair puts
/// everything in bin 0.
pub fn bucket_of(table: &Table, row: &Row, ks: &KornerSet, bins: usize) -> Vec<u16> {
    let cols = table.x_indices();
    ks.pairs
        .iter()
        .map(|pair| {
            if pair.dist <= 0.0 {
                return 0;
            }
            let d1 = table
                .row_dist(row, &table.rows[pair.k1], &cols)
                .expect("x columns are never empty");
            let d2 = table
                .row_dist(row, &table.rows[pair.k2], &cols)
                .expect("x columns are never empty");
            let c2 = pair.dist * pair.dist;
            let t = ((d1 * d1 + c2 - d2 * d2) / (2.0 * c2)).clamp(0.0, 1.0);
            ((t * bins as f64) as usize).min(bins - 1) as u16
        })
        .collect()
}

/// Project every row, bin it, and count buckets holding at least `min_pts`
/// rows (`2 d` when not given).
pub fn filled_buckets<R: Rng>(
    table: &Table,
    dims: usize,
    bins: usize,
    min_pts: Option<usize>,
    rng: &mut R,
) -> Result<(usize, BucketGrid)> {
    let min_pts = min_pts.unwrap_or_else(|| default_min_pts(dims));
    let ks = korners(table, dims, rng)?;
    let mut occupancy: BTreeMap<Vec<u16>, usize> = BTreeMap::new();
    for row in &table.rows {
        *occupancy.entry(bucket_of(table, row, &ks, bins)).or_insert(0) += 1;
    }
    let grid = BucketGrid {
        dims,
        bins,
        min_pts,
        occupancy,
    };
    Ok((grid.filled(), grid))
}

/// Randomized before/after sweep: draw `d1 <= d2` in `[3, 8]` and
/// `b1 <= b2` in `[3, 10]`, keep only draws that actually increase the
/// divisions, and record the filled-bucket counts of a random dataset at
/// both settings. Runs until `iterations` records are accepted.
pub fn bingo_sweep<R: Rng>(
    datasets: &[Table],
    iterations: usize,
    min_pts: Option<usize>,
    rng: &mut R,
) -> Result<Vec<SweepRecord>> {
    if datasets.is_empty() {
        return Err(Error::NoDatasets);
    }
    let mut records = Vec::with_capacity(iterations);
    while records.len() < iterations {
        let d1 = rng.random_range(3..=8usize);
        let d2 = rng.random_range(d1..=8usize);
        let b1 = rng.random_range(3..=10usize);
        let b2 = rng.random_range(b1..=10usize);
        if !(d2 > d1 || b2 > b1) {
            continue; // not a division increase; redraw
        }
        let table = &datasets[rng.random_range(0..datasets.len())];
        let (n1, _) = filled_buckets(table, d1, b1, min_pts, rng)?;
        let (n2, _) = filled_buckets(table, d2, b2, min_pts, rng)?;
        records.push(SweepRecord {
            dataset: table.name.clone(),
            rows: table.rows.len(),
            log2_rows: (table.rows.len() as f64).log2().floor() as u32,
            d1,
            b1,
            n1,
            d2,
            b2,
            n2,
        });
    }
    Ok(records)
}

/// Whether a dataset looks amenable to data-light sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DataLight {
    Ok,
    NeedsMoreSamples,
}

impl std::fmt::Display for DataLight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DataLight::Ok => f.write_str("data-light OK"),
            DataLight::NeedsMoreSamples => f.write_str("needs more samples"),
        }
    }
}

/// Default filled-bucket ceiling below which data-light methods are
/// advised.
pub const DEFAULT_VERDICT_THRESHOLD: f64 = 1000.0;

/// Per-dataset advisory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetVerdict {
    pub dataset: String,
    pub median_filled: f64,
    pub verdict: DataLight,
}

/// Per-`floor(log2 rows)` band summary: the sweep's three series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub log2_rows: u32,
    pub records: usize,
    pub mean_rows: f64,
    pub median_filled_before: f64,
    pub median_filled_after: f64,
    /// Median of filled / capacity over both measurements in the band.
    pub median_filled_ratio: f64,
}

/// Aggregated sweep advisory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BingoVerdict {
    pub threshold: f64,
    pub datasets: Vec<DatasetVerdict>,
    pub bands: Vec<BandSummary>,
}

/// Aggregate sweep records into per-dataset verdicts and per-band series.
/// A dataset is "data-light OK" when its median filled-bucket count stays
/// at or below `threshold`.
pub fn bingo_verdict(records: &[SweepRecord], threshold: f64) -> Result<BingoVerdict> {
    if records.is_empty() {
        return Err(Error::Plan("no sweep records to aggregate".into()));
    }

    let mut names: Vec<&str> = records.iter().map(|r| r.dataset.as_str()).collect();
    names.sort();
    names.dedup();
    let datasets = names
        .iter()
        .map(|&name| {
            let filled: Vec<f64> = records
                .iter()
                .filter(|r| r.dataset == name)
                .flat_map(|r| [r.n1 as f64, r.n2 as f64])
                .collect();
            let median_filled = median_of(&filled);
            DatasetVerdict {
                dataset: name.to_string(),
                median_filled,
                verdict: if median_filled <= threshold {
                    DataLight::Ok
                } else {
                    DataLight::NeedsMoreSamples
                },
            }
        })
        .collect();

    let mut band_keys: Vec<u32> = records.iter().map(|r| r.log2_rows).collect();
    band_keys.sort_unstable();
    band_keys.dedup();
    let bands = band_keys
        .iter()
        .map(|&band| {
            let in_band: Vec<&SweepRecord> =
                records.iter().filter(|r| r.log2_rows == band).collect();
            let before: Vec<f64> = in_band.iter().map(|r| r.n1 as f64).collect();
            let after: Vec<f64> = in_band.iter().map(|r| r.n2 as f64).collect();
            let ratios: Vec<f64> = in_band
                .iter()
                .flat_map(|r| {
                    [
                        r.n1 as f64 / r.capacity1(),
                        r.n2 as f64 / r.capacity2(),
                    ]
                })
                .collect();
            let mean_rows =
                in_band.iter().map(|r| r.rows as f64).sum::<f64>() / in_band.len() as f64;
            BandSummary {
                log2_rows: band,
                records: in_band.len(),
                mean_rows,
                median_filled_before: median_of(&before),
                median_filled_after: median_of(&after),
                median_filled_ratio: median_of(&ratios),
            }
        })
        .collect();

    Ok(BingoVerdict {
        threshold,
        datasets,
        bands,
    })
}
