//! Row scoring: distance to heaven and the Δ improvement metric.
//!
//! "Heaven" is the per-goal ideal point after normalizing goal values to
//! `[0, 1]`: 1 for a maximized goal, 0 for a minimized one. A row's d2h is
//! its normalized distance to that point, so lower is better.

use serde::{Deserialize, Serialize};

use crate::dataio::{Direction, Role, Row, Table};
use crate::{Error, Result};

/// The per-goal ideal point of a table, ordered as its goal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Heaven {
    goal_cols: Vec<usize>,
    targets: Vec<f64>,
}

impl Heaven {
    pub fn new(table: &Table) -> Heaven {
        let mut goal_cols = Vec::new();
        let mut targets = Vec::new();
        for col in &table.columns {
            if let Role::Goal(dir) = col.role {
                goal_cols.push(col.index);
                targets.push(match dir {
                    Direction::Maximize => 1.0,
                    Direction::Minimize => 0.0,
                });
            }
        }
        Heaven { goal_cols, targets }
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Distance to heaven for one row:
    /// `sqrt(sum((norm(y_g) - heaven_g)^2) / |goals|)`, in `[0, 1]`.
    ///
    /// Goal normalization uses the table's full lo/hi stats; this is an
    /// evaluation-side score, samplers only ever see it through a
    /// [`Labeler`](crate::samplers::Labeler).
    pub fn d2h(&self, table: &Table, row: &Row) -> Result<f64> {
        let mut sum = 0.0;
        for (&c, &target) in self.goal_cols.iter().zip(&self.targets) {
            let col = &table.columns[c];
            let v = row.cells[c].num().ok_or_else(|| Error::MissingGoal {
                column: col.name.clone(),
            })?;
            let d = col.normalize(v) - target;
            sum += d * d;
        }
        Ok((sum / self.goal_cols.len() as f64).sqrt())
    }
}

/// Convenience wrapper building the heaven point on the fly.
pub fn d2h(table: &Table, row: &Row) -> Result<f64> {
    Heaven::new(table).d2h(table, row)
}

/// Min and mean d2h over a whole table; the yardstick for Δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineStats {
    pub d2h_min: f64,
    pub d2h_mean: f64,
}

impl BaselineStats {
    /// A dataset is degenerate when every row scores the same, which leaves
    /// Δ undefined.
    pub fn is_degenerate(&self) -> bool {
        self.d2h_mean <= self.d2h_min
    }
}

/// Full-table scan for min and mean d2h. Harness-side only: this labels
/// every row.
pub fn baseline_stats(table: &Table) -> Result<BaselineStats> {
    let heaven = Heaven::new(table);
    let mut min = f64::INFINITY;
    let mut sum = 0.0;
    for row in &table.rows {
        let d = heaven.d2h(table, row)?;
        min = min.min(d);
        sum += d;
    }
    Ok(BaselineStats {
        d2h_min: min,
        d2h_mean: sum / table.rows.len() as f64,
    })
}

/// Δ = 100 * (1 - (x - min) / (mean - min)).
///
/// 100 means the run found the best row, 0 means no improvement over the
/// table mean. Returns `None` on a degenerate dataset (mean = min), where
/// the score is undefined.
pub fn delta_score(x: f64, stats: &BaselineStats) -> Option<f64> {
    if stats.is_degenerate() {
        return None;
    }
    Some(100.0 * (1.0 - (x - stats.d2h_min) / (stats.d2h_mean - stats.d2h_min)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::Table;

    fn parse(text: &str) -> Table {
        Table::parse(text.as_bytes(), "t").unwrap()
    }

    #[test]
    fn ideal_and_anti_ideal_rows() {
        // one goal, row at the column max
        let t = parse("x,Y+\na,0\nb,5\nc,10\n");
        let h = Heaven::new(&t);
        assert_eq!(h.d2h(&t, &t.rows[2]).unwrap(), 0.0);
        assert_eq!(h.d2h(&t, &t.rows[0]).unwrap(), 1.0);

        // two goals (max, min): normalized (0, 1) is the anti-ideal
        let t = parse("x,Y+,Z-\na,0,10\nb,10,0\n");
        let h = Heaven::new(&t);
        assert!((h.d2h(&t, &t.rows[0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(h.d2h(&t, &t.rows[1]).unwrap(), 0.0);
    }

    #[test]
    fn midpoint_row_scores_half() {
        let t = parse("x,Y+,Z-\na,0,10\nb,10,0\nc,5,5\n");
        let h = Heaven::new(&t);
        let d = h.d2h(&t, &t.rows[2]).unwrap();
        assert!((d - 0.5).abs() < 1e-12, "got {d}");
    }

    #[test]
    fn missing_goal_cell_errors() {
        let t = parse("x,Y+\na,1\nb,?\n");
        assert!(matches!(
            d2h(&t, &t.rows[1]),
            Err(Error::MissingGoal { .. })
        ));
    }

    #[test]
    fn baseline_stats_by_hand() {
        // identical rows: min = mean
        let t = parse("x,Y+\na,2\nb,2\n");
        let s = baseline_stats(&t).unwrap();
        assert_eq!(s.d2h_min, s.d2h_mean);
        assert!(s.is_degenerate());

        // two rows with hand-computed d2h {0, 1}: min 0, mean 0.5
        let t = parse("x,Y+\na,0\nb,10\n");
        let s = baseline_stats(&t).unwrap();
        assert_eq!(s.d2h_min, 0.0);
        assert!((s.d2h_mean - 0.5).abs() < 1e-12);
    }

    #[test]
    fn delta_endpoints() {
        let stats = BaselineStats {
            d2h_min: 0.2,
            d2h_mean: 0.6,
        };
        assert_eq!(delta_score(0.2, &stats), Some(100.0));
        assert_eq!(delta_score(0.6, &stats), Some(0.0));
        // halfway between min and mean
        assert!((delta_score(0.4, &stats).unwrap() - 50.0).abs() < 1e-9);
        // worse than the mean goes negative, never above 100
        assert!(delta_score(0.8, &stats).unwrap() < 0.0);

        let degenerate = BaselineStats {
            d2h_min: 0.3,
            d2h_mean: 0.3,
        };
        assert_eq!(delta_score(0.3, &degenerate), None);
    }

    #[test]
    fn direction_value_duality() {
        // negating a goal's direction and its values leaves d2h unchanged
        let t = parse("x,Y+\na,1\nb,4\nc,9\n");
        let flipped = parse("x,Y-\na,-1\nb,-4\nc,-9\n");
        let h = Heaven::new(&t);
        let hf = Heaven::new(&flipped);
        for (r, rf) in t.rows.iter().zip(&flipped.rows) {
            let a = h.d2h(&t, r).unwrap();
            let b = hf.d2h(&flipped, rf).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}
