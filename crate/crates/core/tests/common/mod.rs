//! Shared test support: fixture paths and synthetic table generators.

#![allow(dead_code)] // each integration test binary uses a different subset

use std::path::PathBuf;

use neo::Table;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: [&str; 3] = ["auto93.csv", "storm_tuning.csv", "wine_small.csv"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> Table {
    Table::load(fixture_path(name)).expect("bundled fixture parses")
}

pub fn parse(text: &str) -> Table {
    Table::parse(text.as_bytes(), "t").unwrap()
}

/// Clustered synthetic data: `centers` cluster centers in the unit cube,
/// cluster populations roughly proportional to 1/rank, tight gaussian
/// jitter. Strongly clumped, like real decision datasets.
pub fn clustered_table(rows: usize, centers: usize, dims: usize, sigma: f64, seed: u64) -> Table {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center_points: Vec<Vec<f64>> = (0..centers)
        .map(|_| (0..dims).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    // zipf-ish weights: big clusters stay big at every dataset size
    let weights: Vec<f64> = (1..=centers).map(|k| 1.0 / k as f64).collect();
    let total: f64 = weights.iter().sum();

    let mut text = String::new();
    for d in 0..dims {
        text.push_str(&format!("X{d},"));
    }
    text.push_str("Y+\n");
    for _ in 0..rows {
        let mut pick = rng.random_range(0.0..total);
        let mut c = 0;
        for (i, w) in weights.iter().enumerate() {
            if pick < *w {
                c = i;
                break;
            }
            pick -= w;
        }
        let mut y = 0.0;
        for center in center_points[c].iter().take(dims) {
            let v: f64 = center + rng.random_range(-1.0..1.0) * sigma;
            text.push_str(&format!("{v:.6},"));
            y += v;
        }
        text.push_str(&format!("{y:.6}\n"));
    }
    Table::parse(text.as_bytes(), &format!("clustered{rows}")).unwrap()
}

/// Uniform random points in the unit cube; the opposite of clumped.
pub fn uniform_table(rows: usize, dims: usize, seed: u64) -> Table {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for d in 0..dims {
        text.push_str(&format!("X{d},"));
    }
    text.push_str("Y+\n");
    for _ in 0..rows {
        let mut y = 0.0;
        for _ in 0..dims {
            let v: f64 = rng.random_range(0.0..1.0);
            text.push_str(&format!("{v:.6},"));
            y += v;
        }
        text.push_str(&format!("{y:.6}\n"));
    }
    Table::parse(text.as_bytes(), &format!("uniform{rows}")).unwrap()
}

/// `n` evenly spaced points on a 1-D segment; bucket positions are exact.
pub fn grid_1d(n: usize) -> Table {
    let mut text = String::from("X,Y+\n");
    for i in 0..n {
        text.push_str(&format!("{},1\n", i as f64 / (n - 1) as f64));
    }
    Table::parse(text.as_bytes(), &format!("grid{n}")).unwrap()
}
