//! Scott-Knott ranking with Cliff's-delta and bootstrap gates.
//!
//! Treatments are sorted by median, then recursively bi-clustered at the
//! cut that maximizes the expected mean difference. A cut only stands when
//! the two halves differ by more than a small Cliff's delta *and* a
//! two-sample bootstrap calls the difference non-accidental; otherwise the
//! whole sub-list collapses into one rank.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default Cliff's-delta threshold: the conventional "small" effect size.
pub const DEFAULT_CLIFF_SMALL: f64 = 0.147;
/// Default bootstrap resample count.
pub const DEFAULT_RESAMPLES: usize = 512;
/// Default bootstrap confidence level.
pub const DEFAULT_CONF: f64 = 0.95;

/// One treatment's label and its observed values (e.g. d2h over repeats).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreatmentSample {
    pub label: String,
    pub values: Vec<f64>,
}

impl TreatmentSample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> TreatmentSample {
        TreatmentSample {
            label: label.into(),
            values,
        }
    }

    pub fn median(&self) -> f64 {
        median(&self.values)
    }
}

/// One ranked treatment in a [`RankedGroups`] result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedGroup {
    pub label: String,
    /// 1 = best (lowest median).
    pub rank: usize,
    /// 'a' = rank 1, 'b' = rank 2, ...
    pub letter: char,
    pub median: f64,
}

/// Scott-Knott output: treatments in median order with contiguous ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedGroups {
    pub groups: Vec<RankedGroup>,
}

impl RankedGroups {
    pub fn rank_of(&self, label: &str) -> Option<usize> {
        self.groups.iter().find(|g| g.label == label).map(|g| g.rank)
    }

    pub fn letter_of(&self, label: &str) -> Option<char> {
        self.groups
            .iter()
            .find(|g| g.label == label)
            .map(|g| g.letter)
    }

    pub fn rank_count(&self) -> usize {
        self.groups.iter().map(|g| g.rank).max().unwrap_or(0)
    }
}

/// Rank letter for a 1-based rank.
pub fn rank_letter(rank: usize) -> char {
    (b'a' + ((rank - 1).min(25) as u8)) as char
}

/// Cliff's delta: `(#(x > y) - #(x < y)) / (|xs| * |ys|)` over all pairs.
pub fn cliffs_delta(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySample("xs".into()));
    }
    if ys.is_empty() {
        return Err(Error::EmptySample("ys".into()));
    }
    let mut gt = 0i64;
    let mut lt = 0i64;
    for &x in xs {
        for &y in ys {
            if x > y {
                gt += 1;
            } else if x < y {
                lt += 1;
            }
        }
    }
    Ok((gt - lt) as f64 / (xs.len() as f64 * ys.len() as f64))
}

/// Two-sample bootstrap on the mean difference, resampling from the pooled
/// null (both samples shifted to the pooled mean). Returns `true` when the
/// observed difference is *not* extreme at level `1 - conf`, i.e. the
/// samples may well be the same.
pub fn bootstrap_same<R: Rng>(
    xs: &[f64],
    ys: &[f64],
    resamples: usize,
    conf: f64,
    rng: &mut R,
) -> Result<bool> {
    if xs.is_empty() {
        return Err(Error::EmptySample("xs".into()));
    }
    if ys.is_empty() {
        return Err(Error::EmptySample("ys".into()));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let x_mean = mean(xs);
    let y_mean = mean(ys);
    let observed = (x_mean - y_mean).abs();

    let pooled = (x_mean * xs.len() as f64 + y_mean * ys.len() as f64)
        / (xs.len() + ys.len()) as f64;
    let x_null: Vec<f64> = xs.iter().map(|v| v - x_mean + pooled).collect();
    let y_null: Vec<f64> = ys.iter().map(|v| v - y_mean + pooled).collect();

    let mut extreme = 0usize;
    for _ in 0..resamples {
        let xm = resample_mean(&x_null, rng);
        let ym = resample_mean(&y_null, rng);
        if (xm - ym).abs() >= observed {
            extreme += 1;
        }
    }
    let p = extreme as f64 / resamples as f64;
    Ok(p > 1.0 - conf)
}

fn resample_mean<R: Rng>(vals: &[f64], rng: &mut R) -> f64 {
    let n = vals.len();
    let mut sum = 0.0;
    for _ in 0..n {
        sum += vals[rng.random_range(0..n)];
    }
    sum / n as f64
}

/// Best bi-cluster cut of a median-ordered treatment list: the index
/// maximizing `(|l1|/l)(E(l1)-E(l))^2 + (|l2|/l)(E(l2)-E(l))^2`, where `E`
/// is the mean over all values in a sub-list. Returns (cut, score); the cut
/// splits `groups[..cut]` from `groups[cut..]`.
pub fn sk_split(groups: &[TreatmentSample]) -> Result<(usize, f64)> {
    if groups.len() < 2 {
        return Err(Error::TooFewTreatments {
            need: 2,
            got: groups.len(),
        });
    }
    let all: Vec<f64> = groups.iter().flat_map(|g| g.values.iter().copied()).collect();
    let total_n = all.len() as f64;
    let total_sum: f64 = all.iter().sum();
    let total_mean = total_sum / total_n;

    let mut best = (1, f64::NEG_INFINITY);
    let mut left_n = 0.0;
    let mut left_sum = 0.0;
    for cut in 1..groups.len() {
        let g = &groups[cut - 1];
        left_n += g.values.len() as f64;
        left_sum += g.values.iter().sum::<f64>();
        let right_n = total_n - left_n;
        let right_sum = total_sum - left_sum;
        let l_mean = left_sum / left_n;
        let r_mean = right_sum / right_n;
        let score = (left_n / total_n) * (l_mean - total_mean).powi(2)
            + (right_n / total_n) * (r_mean - total_mean).powi(2);
        if score > best.1 {
            best = (cut, score);
        }
    }
    Ok(best)
}

/// Scott-Knott with default gates and a seeded rng.
pub fn scott_knott_default(treatments: &[TreatmentSample], seed: u64) -> Result<RankedGroups> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    scott_knott(
        treatments,
        DEFAULT_CLIFF_SMALL,
        DEFAULT_RESAMPLES,
        DEFAULT_CONF,
        &mut rng,
    )
}

/// Recursive bi-clustering: sort by median (ties break on label), split at
/// the best cut, and keep the cut only when both gates pass. Rank 1 is the
/// best (lowest) median group.
pub fn scott_knott<R: Rng>(
    treatments: &[TreatmentSample],
    cliff_small: f64,
    resamples: usize,
    conf: f64,
    rng: &mut R,
) -> Result<RankedGroups> {
    if treatments.is_empty() {
        return Err(Error::TooFewTreatments { need: 1, got: 0 });
    }
    for t in treatments {
        if t.values.is_empty() {
            return Err(Error::EmptySample(t.label.clone()));
        }
    }
    let mut ordered: Vec<&TreatmentSample> = treatments.iter().collect();
    ordered.sort_by(|a, b| {
        a.median()
            .partial_cmp(&b.median())
            .unwrap()
            .then_with(|| a.label.cmp(&b.label))
    });

    let mut leaves: Vec<Vec<&TreatmentSample>> = Vec::new();
    split_rec(&ordered, cliff_small, resamples, conf, rng, &mut leaves)?;

    let mut groups = Vec::new();
    for (i, leaf) in leaves.iter().enumerate() {
        for t in leaf {
            groups.push(RankedGroup {
                label: t.label.clone(),
                rank: i + 1,
                letter: rank_letter(i + 1),
                median: t.median(),
            });
        }
    }
    Ok(RankedGroups { groups })
}

fn split_rec<'a, R: Rng>(
    ordered: &[&'a TreatmentSample],
    cliff_small: f64,
    resamples: usize,
    conf: f64,
    rng: &mut R,
    leaves: &mut Vec<Vec<&'a TreatmentSample>>,
) -> Result<()> {
    if ordered.len() < 2 {
        leaves.push(ordered.to_vec());
        return Ok(());
    }
    let owned: Vec<TreatmentSample> = ordered.iter().map(|t| (*t).clone()).collect();
    let (cut, _) = sk_split(&owned)?;
    let left: Vec<f64> = ordered[..cut]
        .iter()
        .flat_map(|t| t.values.iter().copied())
        .collect();
    let right: Vec<f64> = ordered[cut..]
        .iter()
        .flat_map(|t| t.values.iter().copied())
        .collect();

    let effect = cliffs_delta(&left, &right)?.abs();
    let split_stands =
        effect > cliff_small && !bootstrap_same(&left, &right, resamples, conf, rng)?;
    if split_stands {
        split_rec(&ordered[..cut], cliff_small, resamples, conf, rng, leaves)?;
        split_rec(&ordered[cut..], cliff_small, resamples, conf, rng, leaves)?;
    } else {
        leaves.push(ordered.to_vec());
    }
    Ok(())
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Median of a slice; shared by the harness's report tables.
pub fn median_of(values: &[f64]) -> f64 {
    median(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    fn sample(label: &str, values: &[f64]) -> TreatmentSample {
        TreatmentSample::new(label, values.to_vec())
    }

    #[test]
    fn cliffs_delta_hand_cases() {
        let xs = [1.0, 2.0];
        let ys = [2.0, 3.0];
        // pairs: 1<2, 1<3, 2=2, 2<3 -> (0 - 3) / 4
        assert_eq!(cliffs_delta(&xs, &ys).unwrap(), -0.75);
        assert_eq!(cliffs_delta(&xs, &xs).unwrap(), 0.0);
        assert_eq!(cliffs_delta(&[5.0, 6.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert!(cliffs_delta(&[], &ys).is_err());
    }

    #[test]
    fn cliffs_delta_antisymmetry_and_monotone_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let xs: Vec<f64> = (0..7).map(|_| rng.random_range(0.0..4.0)).collect();
            let ys: Vec<f64> = (0..9).map(|_| rng.random_range(0.0..4.0)).collect();
            let d = cliffs_delta(&xs, &ys).unwrap();
            let d_rev = cliffs_delta(&ys, &xs).unwrap();
            assert!((d + d_rev).abs() < 1e-12);

            // strictly monotone transform (exp) preserves all pair orderings
            let tx: Vec<f64> = xs.iter().map(|v| v.exp()).collect();
            let ty: Vec<f64> = ys.iter().map(|v| v.exp()).collect();
            assert_eq!(d, cliffs_delta(&tx, &ty).unwrap());
        }
    }

    #[test]
    fn bootstrap_identical_and_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..20).map(|i| i as f64 / 20.0).collect();
        assert!(bootstrap_same(&xs, &xs, 256, 0.95, &mut rng).unwrap());

        let zeros = vec![0.0; 20];
        let tens = vec![10.0; 20];
        assert!(!bootstrap_same(&zeros, &tens, 256, 0.95, &mut rng).unwrap());
    }

    #[test]
    fn bootstrap_overlapping_gaussians_usually_same() {
        // means 0 and 0.05, sd 1: the difference should look accidental
        let mut same = 0;
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Normal::new(0.0, 1.0).unwrap();
            let b = Normal::new(0.05, 1.0).unwrap();
            let xs: Vec<f64> = (0..20).map(|_| a.sample(&mut rng)).collect();
            let ys: Vec<f64> = (0..20).map(|_| b.sample(&mut rng)).collect();
            if bootstrap_same(&xs, &ys, 256, 0.95, &mut rng).unwrap() {
                same += 1;
            }
        }
        assert!(same >= 90, "only {same}/100 seeds judged same");
    }

    #[test]
    fn sk_split_hand_cases() {
        let groups = [sample("a", &[0.0, 0.0]), sample("b", &[1.0, 1.0])];
        assert_eq!(sk_split(&groups).unwrap().0, 1);

        // means 0, 0, 10: E(delta) is larger isolating the third
        let groups = [
            sample("a", &[0.0, 0.0]),
            sample("b", &[0.0, 0.0]),
            sample("c", &[10.0, 10.0]),
        ];
        let (cut, score) = sk_split(&groups).unwrap();
        assert_eq!(cut, 2);
        assert!(score > 0.0);

        // all identical: every cut scores 0
        let groups = [
            sample("a", &[3.0]),
            sample("b", &[3.0]),
            sample("c", &[3.0]),
        ];
        let (_, score) = sk_split(&groups).unwrap();
        assert_eq!(score, 0.0);

        assert!(sk_split(&groups[..1]).is_err());
    }

    #[test]
    fn scott_knott_three_separated_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let noisy = |center: f64, rng: &mut ChaCha8Rng| -> Vec<f64> {
            let n = Normal::new(center, 0.01).unwrap();
            (0..20).map(|_| n.sample(rng)).collect()
        };
        let treatments = vec![
            TreatmentSample::new("mid", noisy(1.0, &mut rng)),
            TreatmentSample::new("low", noisy(0.0, &mut rng)),
            TreatmentSample::new("high", noisy(2.0, &mut rng)),
        ];
        let ranked = scott_knott_default(&treatments, 7).unwrap();
        assert_eq!(ranked.rank_count(), 3);
        assert_eq!(ranked.letter_of("low"), Some('a'));
        assert_eq!(ranked.letter_of("mid"), Some('b'));
        assert_eq!(ranked.letter_of("high"), Some('c'));

        // brute-force pairwise gates agree that every pair differs
        for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let d = cliffs_delta(&treatments[a].values, &treatments[b].values)
                .unwrap()
                .abs();
            assert!(d > DEFAULT_CLIFF_SMALL);
        }
    }

    #[test]
    fn scott_knott_identical_copies_collapse() {
        let vals: Vec<f64> = (0..20).map(|i| (i % 5) as f64).collect();
        let treatments: Vec<TreatmentSample> = (0..7)
            .map(|i| TreatmentSample::new(format!("t{i}"), vals.clone()))
            .collect();
        let ranked = scott_knott_default(&treatments, 11).unwrap();
        assert_eq!(ranked.rank_count(), 1);
        assert!(ranked.groups.iter().all(|g| g.letter == 'a'));
    }

    #[test]
    fn scott_knott_single_treatment() {
        let ranked = scott_knott_default(&[sample("only", &[1.0, 2.0])], 3).unwrap();
        assert_eq!(ranked.rank_count(), 1);
        assert_eq!(ranked.letter_of("only"), Some('a'));
    }

    #[test]
    fn permuting_input_never_changes_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let treatments: Vec<TreatmentSample> = (0..5)
            .map(|i| {
                let n = Normal::new(i as f64 * 0.4, 0.2).unwrap();
                TreatmentSample::new(
                    format!("t{i}"),
                    (0..20).map(|_| n.sample(&mut rng)).collect::<Vec<f64>>(),
                )
            })
            .collect();
        let base = scott_knott_default(&treatments, 1).unwrap();
        let mut perm = treatments.clone();
        perm.reverse();
        perm.swap(0, 2);
        let again = scott_knott_default(&perm, 1).unwrap();
        for t in &treatments {
            assert_eq!(base.rank_of(&t.label), again.rank_of(&t.label));
        }
        assert!(base.rank_count() <= treatments.len());
    }

    #[test]
    fn gate_boundary_behavior() {
        let treatments: Vec<TreatmentSample> = (0..4)
            .map(|i| sample(&format!("t{i}"), &[i as f64, i as f64 + 0.1]))
            .collect();

        // gates disabled: every treatment lands in its own rank
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ranked = scott_knott(&treatments, -1.0, 64, 0.0, &mut rng).unwrap();
        assert_eq!(ranked.rank_count(), treatments.len());

        // cliff_small = 1 cannot be exceeded: one rank
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ranked = scott_knott(&treatments, 1.0, 64, 0.95, &mut rng).unwrap();
        assert_eq!(ranked.rank_count(), 1);
    }

    #[test]
    fn median_tie_breaks_by_label() {
        let a = sample("b-second", &[1.0, 1.0]);
        let b = sample("a-first", &[1.0, 1.0]);
        let ranked = scott_knott_default(&[a, b], 4).unwrap();
        assert_eq!(ranked.groups[0].label, "a-first");
        assert_eq!(ranked.groups[1].label, "b-second");
    }
}
