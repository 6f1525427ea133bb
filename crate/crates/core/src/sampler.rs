//! Monte Carlo exploration of the weight simplex.
//!
//! Run `t` draws its weights from ChaCha8 seeded with the master seed on
//! stream `t`. Runs are processed in fixed-size chunks whose partial
//! statistics are merged in chunk order, so the result does not depend on the
//! number of worker threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::AttributeMatrix;
use crate::error::{Error, Result};
use crate::scoring::{rank_by_score, Ranking, Scorer, WeightVector};

pub const DEFAULT_RUNS: u64 = 10_000;
pub const DEFAULT_TOP_K: usize = 20;
pub const DEFAULT_GROUP_SIZE: usize = 10;
/// Above this many rows the rank histogram is stored sparsely.
pub const SPARSE_HISTOGRAM_ROWS: usize = 2_000;

const CHUNK_RUNS: u64 = 256;
const CHUNKS_PER_BATCH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededGenerator {
    seed: u64,
}

impl SeededGenerator {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent random stream for one run.
    pub fn run_rng(&self, run: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(run);
        rng
    }

    pub fn weights(&self, run: u64, m: usize) -> Result<WeightVector> {
        sample_simplex(m, &mut self.run_rng(run))
    }
}

/// Uniform point on the probability simplex: the gaps between `m - 1` sorted
/// uniforms on [0, 1], including both boundary gaps.
pub fn sample_simplex<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<WeightVector> {
    if m == 0 {
        return Err(Error::InvalidWeights("cannot sample weights of dimension 0".into()));
    }
    let mut cuts: Vec<f64> = (0..m - 1).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut w = Vec::with_capacity(m);
    let mut prev = 0.0;
    for c in cuts {
        w.push(c - prev);
        prev = c;
    }
    w.push(1.0 - prev);
    WeightVector::new(w)
}

/// Ranks of one Monte Carlo run.
pub fn run_ranking(
    matrix: &AttributeMatrix,
    scorer: &dyn Scorer,
    gen: &SeededGenerator,
    run: u64,
) -> Result<Ranking> {
    let w = gen.weights(run, matrix.cols())?;
    Ok(rank_by_score(&scorer.score(matrix, &w)?))
}

/// How often each row attained each rank.
#[derive(Debug, Clone, PartialEq)]
pub enum RankHistogram {
    Dense { n: usize, counts: Vec<u64> },
    Sparse { n: usize, rows: Vec<BTreeMap<usize, u64>> },
}

impl RankHistogram {
    pub fn new(n: usize) -> Self {
        if n > SPARSE_HISTOGRAM_ROWS {
            Self::sparse(n)
        } else {
            Self::Dense {
                n,
                counts: vec![0; n * n],
            }
        }
    }

    pub fn sparse(n: usize) -> Self {
        Self::Sparse {
            n,
            rows: vec![BTreeMap::new(); n],
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            Self::Dense { n, .. } | Self::Sparse { n, .. } => *n,
        }
    }

    /// Records one occurrence of the 1-based `rank` for `row`.
    pub fn record(&mut self, row: usize, rank: usize) {
        self.add(row, rank, 1);
    }

    fn add(&mut self, row: usize, rank: usize, count: u64) {
        match self {
            Self::Dense { n, counts } => counts[row * *n + rank - 1] += count,
            Self::Sparse { rows, .. } => *rows[row].entry(rank).or_insert(0) += count,
        }
    }

    pub fn count(&self, row: usize, rank: usize) -> u64 {
        match self {
            Self::Dense { n, counts } => counts[row * n + rank - 1],
            Self::Sparse { rows, .. } => rows[row].get(&rank).copied().unwrap_or(0),
        }
    }

    /// Non-zero `(rank, count)` pairs of one row, ascending by rank.
    pub fn row_counts(&self, row: usize) -> Vec<(usize, u64)> {
        match self {
            Self::Dense { n, counts } => counts[row * n..(row + 1) * n]
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(r, &c)| (r + 1, c))
                .collect(),
            Self::Sparse { rows, .. } => rows[row].iter().map(|(&r, &c)| (r, c)).collect(),
        }
    }

    fn merge(&mut self, other: &RankHistogram) {
        for row in 0..other.rows() {
            for (rank, c) in other.row_counts(row) {
                self.add(row, rank, c);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0.0 {
            return;
        }
        if self.n == 0.0 {
            *self = *o;
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n / n;
        self.m2 += o.m2 + d * d * self.n * o.n / n;
        self.n = n;
    }

    /// Population standard deviation.
    fn std(&self) -> f64 {
        if self.n == 0.0 {
            0.0
        } else {
            (self.m2 / self.n).max(0.0).sqrt()
        }
    }
}

struct Partial {
    score: Vec<Moments>,
    rank: Vec<Moments>,
    histogram: RankHistogram,
}

impl Partial {
    fn new(n: usize) -> Self {
        Self {
            score: vec![Moments::default(); n],
            rank: vec![Moments::default(); n],
            histogram: RankHistogram::new(n),
        }
    }

    fn merge(&mut self, o: &Partial) {
        for (a, b) in self.score.iter_mut().zip(&o.score) {
            a.merge(b);
        }
        for (a, b) in self.rank.iter_mut().zip(&o.rank) {
            a.merge(b);
        }
        self.histogram.merge(&o.histogram);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub runs: u64,
    pub top_k: usize,
    pub group_size: usize,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            runs: DEFAULT_RUNS,
            top_k: DEFAULT_TOP_K,
            group_size: DEFAULT_GROUP_SIZE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowStats {
    pub label: String,
    pub score_avg: f64,
    pub score_std: f64,
    /// `None` when the average is zero.
    pub score_cv: Option<f64>,
    pub rank_avg: f64,
    pub rank_std: f64,
    pub rank_cv: Option<f64>,
    pub prob_top_k: f64,
    pub group: usize,
    /// Worst (numerically largest) rank attained.
    pub max_rank: usize,
    pub min_rank: usize,
    pub max_count: u64,
    pub min_count: u64,
    pub product: Product,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Product {
    pub raw: f64,
    /// Raw divided by the smallest raw product; `None` if that is zero.
    pub relative: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloStats {
    pub config: MonteCarloConfig,
    pub seed: u64,
    pub mean: &'static str,
    pub rows: Vec<RowStats>,
    pub histogram: RankHistogram,
}

pub fn monte_carlo(
    matrix: &AttributeMatrix,
    scorer: &dyn Scorer,
    gen: &SeededGenerator,
    config: MonteCarloConfig,
) -> Result<MonteCarloStats> {
    if config.runs == 0 {
        return Err(Error::Config("Monte Carlo needs at least one run".into()));
    }
    if config.group_size == 0 {
        return Err(Error::Config("group size must be positive".into()));
    }
    let n = matrix.rows();
    let chunks: Vec<(u64, u64)> = (0..config.runs.div_ceil(CHUNK_RUNS))
        .map(|c| (c * CHUNK_RUNS, ((c + 1) * CHUNK_RUNS).min(config.runs)))
        .collect();

    let mut total = Partial::new(n);
    for batch in chunks.chunks(CHUNKS_PER_BATCH) {
        let partials: Vec<Result<Partial>> = batch
            .par_iter()
            .map(|&(start, end)| {
                let mut p = Partial::new(n);
                for run in start..end {
                    let w = gen.weights(run, matrix.cols())?;
                    let scores = scorer.score(matrix, &w)?;
                    let ranking = rank_by_score(&scores);
                    for (i, &s) in scores.as_slice().iter().enumerate() {
                        let r = ranking.rank_of(i);
                        p.score[i].push(s);
                        p.rank[i].push(r as f64);
                        p.histogram.record(i, r);
                    }
                }
                Ok(p)
            })
            .collect();
        for p in partials {
            total.merge(&p?);
        }
    }

    let groups = assign_groups(&total.histogram, config.group_size)?;
    let runs = config.runs as f64;
    let cv = |m: &Moments| (m.mean != 0.0).then(|| m.std() / m.mean);
    let mut rows: Vec<RowStats> = (0..n)
        .map(|i| {
            let counts = total.histogram.row_counts(i);
            let (min_rank, min_count) = counts[0];
            let (max_rank, max_count) = counts[counts.len() - 1];
            let top: u64 = counts.iter().filter(|(r, _)| *r <= config.top_k).map(|(_, c)| c).sum();
            RowStats {
                label: matrix.labels()[i].clone(),
                score_avg: total.score[i].mean,
                score_std: total.score[i].std(),
                score_cv: cv(&total.score[i]),
                rank_avg: total.rank[i].mean,
                rank_std: total.rank[i].std(),
                rank_cv: cv(&total.rank[i]),
                prob_top_k: top as f64 / runs,
                group: groups[i],
                max_rank,
                min_rank,
                max_count,
                min_count,
                product: Product {
                    raw: 0.0,
                    relative: None,
                },
            }
        })
        .collect();
    let products = product_heuristic(&rows);
    for (row, p) in rows.iter_mut().zip(products) {
        row.product = p;
    }
    Ok(MonteCarloStats {
        config,
        seed: gen.seed(),
        mean: scorer.name(),
        rows,
        histogram: total.histogram,
    })
}

/// `rankAvg * rankStd * minRank * (maxRank - minRank)`.
pub fn product_raw(rank_avg: f64, rank_std: f64, min_rank: usize, max_rank: usize) -> f64 {
    rank_avg * rank_std * min_rank as f64 * (max_rank - min_rank) as f64
}

pub fn product_heuristic(rows: &[RowStats]) -> Vec<Product> {
    let raw: Vec<f64> = rows
        .iter()
        .map(|r| product_raw(r.rank_avg, r.rank_std, r.min_rank, r.max_rank))
        .collect();
    let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    raw.iter()
        .map(|&p| Product {
            raw: p,
            relative: (min > 0.0).then(|| p / min),
        })
        .collect()
}

/// Group `g` covers ranks `(g-1)*size+1 ..= g*size`; each row joins the group
/// it lands in most often, preferring the better group on ties.
pub fn assign_groups(histogram: &RankHistogram, group_size: usize) -> Result<Vec<usize>> {
    if group_size == 0 {
        return Err(Error::Config("group size must be positive".into()));
    }
    Ok((0..histogram.rows())
        .map(|row| {
            let mut buckets: BTreeMap<usize, u64> = BTreeMap::new();
            for (rank, c) in histogram.row_counts(row) {
                *buckets.entry((rank - 1) / group_size + 1).or_insert(0) += c;
            }
            let mut best = (1, 0);
            for (g, c) in buckets {
                if c > best.1 {
                    best = (g, c);
                }
            }
            best.0
        })
        .collect())
}
