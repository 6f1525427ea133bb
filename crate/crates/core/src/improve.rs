//! Rank gains from raising a single attribute to its column maximum.
//!
//! Scores are arithmetic means throughout.

use crate::dataset::AttributeMatrix;
use crate::error::{Error, Result};
use crate::scoring::{rank_by_score, ArithmeticMean, Ranking, Scorer, ScoreVector, WeightVector};

pub const DEFAULT_BUCKETS: usize = 10;

/// `w_k (a*_k - a_ik)` where `a*_k` is the column maximum.
pub fn score_delta(a: &AttributeMatrix, w: &WeightVector, i: usize, k: usize) -> Result<f64> {
    check(a, w)?;
    if i >= a.rows() {
        return Err(Error::OutOfRange { index: i, len: a.rows() });
    }
    if k >= a.cols() {
        return Err(Error::OutOfRange { index: k, len: a.cols() });
    }
    Ok(w.as_slice()[k] * (a.column_max(k) - a.get(i, k)))
}

/// The attribute with the largest delta for row `i`, lowest index on ties.
pub fn best_attribute(a: &AttributeMatrix, w: &WeightVector, i: usize) -> Result<(usize, f64)> {
    let mut best = (0, score_delta(a, w, i, 0)?);
    for k in 1..a.cols() {
        let d = score_delta(a, w, i, k)?;
        if d > best.1 {
            best = (k, d);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowImprovement {
    pub row: usize,
    pub label: String,
    pub old_rank: usize,
    pub attribute: usize,
    pub delta: f64,
    pub old_score: f64,
    pub new_score: f64,
    pub case_one_rank: usize,
    pub case_all_rank: usize,
    /// `(old_rank - case_one_rank) / old_rank`.
    pub improvement: f64,
    /// Same ratio for Case All; negative when the row loses places.
    pub case_all_improvement: f64,
    /// `delta / old_score`, absent for a zero score.
    pub score_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementReport {
    pub rows: Vec<RowImprovement>,
}

impl ImprovementReport {
    pub fn improvements(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.improvement).collect()
    }

    pub fn case_all_improvements(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.case_all_improvement).collect()
    }
}

fn check(a: &AttributeMatrix, w: &WeightVector) -> Result<()> {
    if w.len() != a.cols() {
        return Err(Error::Dimension {
            expected: a.cols(),
            found: w.len(),
        });
    }
    Ok(())
}

/// Rank of a row whose score changed to `s` while every other row keeps
/// its score, ties broken by row index.
fn rank_with(scores: &[f64], i: usize, s: f64) -> usize {
    1 + scores
        .iter()
        .enumerate()
        .filter(|&(j, &sj)| j != i && (sj > s || (sj == s && j < i)))
        .count()
}

/// Case One for every row: only that row raises its best attribute.
/// Case All ranks use the same attribute raised for every row.
pub fn improve_case_one(a: &AttributeMatrix, w: &WeightVector) -> Result<ImprovementReport> {
    check(a, w)?;
    let scores = ArithmeticMean.score(a, w)?;
    let old = rank_by_score(&scores);
    let s = scores.as_slice();
    let case_all: Vec<Ranking> = (0..a.cols())
        .map(|k| improve_case_all(a, w, k))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(a.rows());
    let mut buf = Vec::with_capacity(a.cols());
    for i in 0..a.rows() {
        let (k, delta) = best_attribute(a, w, i)?;
        buf.clear();
        buf.extend_from_slice(a.row(i));
        buf[k] = a.column_max(k);
        let new_score = ArithmeticMean.score_row(&buf, w.as_slice());
        let old_rank = old.rank_of(i);
        let case_one_rank = rank_with(s, i, new_score);
        let case_all_rank = case_all[k].rank_of(i);
        let ratio = |r: usize| (old_rank as f64 - r as f64) / old_rank as f64;
        rows.push(RowImprovement {
            row: i,
            label: a.labels()[i].clone(),
            old_rank,
            attribute: k,
            delta,
            old_score: s[i],
            new_score,
            case_one_rank,
            case_all_rank,
            improvement: ratio(case_one_rank),
            case_all_improvement: ratio(case_all_rank),
            score_ratio: (s[i] != 0.0).then(|| delta / s[i]),
        });
    }
    Ok(ImprovementReport { rows })
}

/// Every row raises attribute `k` to the column maximum.
pub fn improve_case_all(a: &AttributeMatrix, w: &WeightVector, k: usize) -> Result<Ranking> {
    check(a, w)?;
    if k >= a.cols() {
        return Err(Error::OutOfRange { index: k, len: a.cols() });
    }
    let top = a.column_max(k);
    let mut buf = Vec::with_capacity(a.cols());
    let scores: Vec<f64> = (0..a.rows())
        .map(|i| {
            buf.clear();
            buf.extend_from_slice(a.row(i));
            buf[k] = top;
            ArithmeticMean.score_row(&buf, w.as_slice())
        })
        .collect();
    Ok(rank_by_score(&ScoreVector::new(scores)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<usize>,
    pub cumulative: Vec<usize>,
}

impl Histogram {
    /// Lower edge of bucket `b`.
    pub fn edge(&self, b: usize) -> f64 {
        b as f64 / self.counts.len() as f64
    }
}

/// Equal-width buckets over [0, 1]; 1.0 falls in the last bucket and
/// negative values in the first.
pub fn improvement_histogram(values: &[f64], buckets: usize) -> Result<Histogram> {
    if buckets == 0 {
        return Err(Error::Config("histogram needs at least one bucket".into()));
    }
    let mut counts = vec![0; buckets];
    for &v in values {
        if v.is_nan() {
            return Err(Error::InvalidMatrix("NaN improvement".into()));
        }
        let b = ((v.clamp(0.0, 1.0) * buckets as f64) as usize).min(buckets - 1);
        counts[b] += 1;
    }
    let cumulative = counts
        .iter()
        .scan(0, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    Ok(Histogram { counts, cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matrix(rows: &[Vec<f64>]) -> AttributeMatrix {
        AttributeMatrix::from_values(rows).unwrap()
    }

    // Rewrites the matrix and ranks it from scratch.
    fn oracle_rank(a: &AttributeMatrix, w: &WeightVector, rows: &[usize], k: usize, target: usize) -> usize {
        let top = a.column_max(k);
        let data: Vec<Vec<f64>> = (0..a.rows())
            .map(|i| {
                let mut r = a.row(i).to_vec();
                if rows.contains(&i) {
                    r[k] = top;
                }
                r
            })
            .collect();
        let b = matrix(&data);
        rank_by_score(&ArithmeticMean.score(&b, w).unwrap()).rank_of(target)
    }

    #[test]
    fn delta_examples() {
        let a = matrix(&[vec![1.0, 0.5], vec![0.5, 1.0]]);
        let w = WeightVector::new(vec![0.2, 0.8]).unwrap();
        assert_eq!(score_delta(&a, &w, 0, 0).unwrap(), 0.0);
        assert!((score_delta(&a, &w, 1, 0).unwrap() - 0.1).abs() < 1e-15);
        let w0 = WeightVector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(score_delta(&a, &w0, 1, 0).unwrap(), 0.0);
        assert!(score_delta(&a, &w, 2, 0).is_err());
    }

    #[test]
    fn leader_gains_nothing() {
        let a = matrix(&[vec![0.9, 0.8], vec![0.2, 0.1], vec![0.5, 0.4]]);
        let rep = improve_case_one(&a, &WeightVector::uniform(2).unwrap()).unwrap();
        assert_eq!(rep.rows[0].old_rank, 1);
        assert_eq!(rep.rows[0].case_one_rank, 1);
        assert_eq!(rep.rows[0].improvement, 0.0);
    }

    #[test]
    fn bounded_by_competitor() {
        let a = matrix(&[vec![1.0, 1.0], vec![0.0, 0.0]]);
        let rep = improve_case_one(&a, &WeightVector::uniform(2).unwrap()).unwrap();
        let r = &rep.rows[1];
        assert_eq!(r.attribute, 0);
        assert!((r.delta - 0.5).abs() < 1e-15);
        assert_eq!((r.old_rank, r.case_one_rank), (2, 2));
        assert_eq!(r.improvement, 0.0);
    }

    #[test]
    fn ties_pick_lowest_attribute() {
        let a = matrix(&[vec![1.0, 1.0, 1.0], vec![0.0, 0.0, 0.0]]);
        let (k, _) = best_attribute(&a, &WeightVector::uniform(3).unwrap(), 1).unwrap();
        assert_eq!(k, 0);
    }

    #[test]
    fn constant_max_column_leaves_ranking_unchanged() {
        let a = matrix(&[vec![0.3, 1.0], vec![0.9, 1.0], vec![0.6, 1.0]]);
        let w = WeightVector::new(vec![0.4, 0.6]).unwrap();
        let before = rank_by_score(&ArithmeticMean.score(&a, &w).unwrap());
        assert_eq!(improve_case_all(&a, &w, 1).unwrap().order(), before.order());
    }

    #[test]
    fn random_instances_match_rescoring() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for _ in 0..100 {
            let rows: Vec<Vec<f64>> = (0..20).map(|_| (0..5).map(|_| rng.gen()).collect()).collect();
            let a = matrix(&rows);
            let raw: Vec<f64> = (0..5).map(|_| rng.gen()).collect();
            let w = WeightVector::normalize(&raw).unwrap();
            let rep = improve_case_one(&a, &w).unwrap();
            let all: Vec<usize> = (0..20).collect();
            for r in &rep.rows {
                assert!(r.delta >= 0.0);
                assert_eq!(r.case_one_rank, oracle_rank(&a, &w, &[r.row], r.attribute, r.row));
                assert_eq!(r.case_all_rank, oracle_rank(&a, &w, &all, r.attribute, r.row));
                assert!(r.case_one_rank <= r.old_rank);
                assert!((0.0..=1.0).contains(&r.improvement));
                assert!((r.new_score - r.old_score - r.delta).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn case_all_matches_dropping_the_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let rows: Vec<Vec<f64>> = (0..15).map(|_| (0..4).map(|_| rng.gen()).collect()).collect();
            let a = matrix(&rows);
            let w = WeightVector::normalize(&[1.0, 2.0, 3.0, 4.0]).unwrap();
            for k in 0..4 {
                let kept: Vec<usize> = (0..4).filter(|&j| j != k).collect();
                let dropped: Vec<Vec<f64>> = rows.iter().map(|r| kept.iter().map(|&j| r[j]).collect()).collect();
                let wk: Vec<f64> = kept.iter().map(|&j| w.as_slice()[j]).collect();
                let s: Vec<f64> = dropped.iter().map(|r| r.iter().zip(&wk).map(|(x, y)| x * y).sum()).collect();
                let expect = rank_by_score(&ScoreVector::new(s).unwrap());
                let got = improve_case_all(&a, &w, k).unwrap();
                // equal up to floating ties; compare scores pairwise instead of exact order
                for p in 1..got.len() {
                    let (u, v) = (got.order()[p - 1], got.order()[p]);
                    let (su, sv) = (expect.scores().unwrap()[u], expect.scores().unwrap()[v]);
                    assert!(su >= sv - 1e-12, "{k}: {u} before {v}");
                }
            }
        }
    }

    #[test]
    fn histogram_examples() {
        let h = improvement_histogram(&[0.0; 7], 10).unwrap();
        assert_eq!(h.counts[0], 7);
        assert!(h.cumulative.iter().all(|&c| c == 7));
        let spread: Vec<f64> = (0..10).map(|i| i as f64 / 10.0 + 0.05).collect();
        let h = improvement_histogram(&spread, 10).unwrap();
        assert_eq!(h.counts, vec![1; 10]);
        let h = improvement_histogram(&[1.0, -0.5], 10).unwrap();
        assert_eq!((h.counts[9], h.counts[0]), (1, 1));
        assert!(improvement_histogram(&[0.5], 0).is_err());
    }

    proptest! {
        #[test]
        fn others_drop_at_most_one_place(
            rows in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 2..12),
            raw in prop::collection::vec(0.01f64..1.0, 3),
        ) {
            let a = matrix(&rows);
            let w = WeightVector::normalize(&raw).unwrap();
            let scores = ArithmeticMean.score(&a, &w).unwrap();
            let old = rank_by_score(&scores);
            let rep = improve_case_one(&a, &w).unwrap();
            for r in &rep.rows {
                let mut s = scores.as_slice().to_vec();
                s[r.row] = r.new_score;
                let new = rank_by_score(&ScoreVector::new(s).unwrap());
                for j in (0..a.rows()).filter(|&j| j != r.row) {
                    prop_assert!(new.rank_of(j) <= old.rank_of(j) + 1);
                    prop_assert!(new.rank_of(j) >= old.rank_of(j));
                }
                if r.old_rank == 1 {
                    prop_assert_eq!(r.improvement, 0.0);
                }
            }
        }

        #[test]
        fn histogram_conserves_mass(v in prop::collection::vec(-0.5f64..1.5, 0..50)) {
            let h = improvement_histogram(&v, DEFAULT_BUCKETS).unwrap();
            prop_assert_eq!(*h.cumulative.last().unwrap(), v.len());
        }
    }
}
