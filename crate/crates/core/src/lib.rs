//! Near-enough optimization over tabular decision datasets.
//!
//! The library works on tables whose column names carry their own schema:
//! numeric columns start with an uppercase letter, goal columns end in `+`
//! (maximize) or `-` (minimize), everything else is a symbolic independent
//! column. Rows are scored by *distance to heaven* (d2h), the normalized
//! distance from a row's goal values to the per-goal ideal point.
//!
//! On top of that sit:
//!
//! - three label-budgeted pool samplers (`RANDOM`, `LINE`, `LITE`) that only
//!   read goal values through a metered [`samplers::Labeler`];
//! - Scott-Knott ranking with Cliff's-delta and bootstrap gates ([`stats`]);
//! - closed-form sample-size floors for three optimization regimes
//!   ([`complexity`]);
//! - a bucket-occupancy probe that predicts when data-light sampling
//!   suffices ([`bingo`]);
//! - an experiment harness that runs (dataset x sampler x budget x repeat)
//!   grids and renders percent-best summary reports ([`harness`]).
//!
//! ```no_run
//! use neo::harness::single_run;
//! use neo::objective::{baseline_stats, delta_score};
//! use neo::{SamplerKind, Table};
//!
//! # fn main() -> neo::Result<()> {
//! let table = Table::load("crates/core/fixtures/auto93.csv")?;
//! let stats = baseline_stats(&table)?;
//! let run = single_run(&table, SamplerKind::Lite, 50, 1)?;
//! println!(
//!     "best d2h {:.3}, delta {:?}",
//!     run.best_d2h,
//!     delta_score(run.best_d2h, &stats)
//! );
//! # Ok(())
//! # }
//! ```

pub mod bingo;
pub mod complexity;
pub mod dataio;
pub mod harness;
pub mod objective;
pub mod samplers;
pub mod stats;

mod error;

pub use error::{Error, Result};

pub use dataio::{Cell, ColKind, Column, Direction, Role, Row, Table};
pub use objective::{baseline_stats, d2h, delta_score, BaselineStats, Heaven};
pub use samplers::{Labeler, Pool, RunResult, SamplerKind};
pub use stats::{scott_knott, RankedGroup, RankedGroups, TreatmentSample};
