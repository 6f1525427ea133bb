//! Composite scores, score rankings and domination.

use crate::dataset::AttributeMatrix;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// Attributes are floored at this value before taking logarithms in the
/// geometric mean.
pub const GEOMETRIC_FLOOR: f64 = 1e-6;

const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Non-negative attribute weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {v} is negative or not finite")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(values))
    }

    /// Divides raw non-negative weights by their sum.
    pub fn normalize(raw: &[f64]) -> Result<Self> {
        if let Some(v) = raw.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {v} is negative or not finite")));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        Self::new(raw.iter().map(|v| v / sum).collect())
    }

    /// Clamps solver round-off below zero, then renormalizes.
    pub(crate) fn from_solver(raw: &[f64]) -> Result<Self> {
        let clean: Vec<f64> = raw.iter().map(|v| v.max(0.0)).collect();
        Self::normalize(&clean)
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        Ok(Self(vec![1.0 / m as f64; m]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest minus smallest weight.
    pub fn spread(&self) -> f64 {
        let hi = self.0.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.0.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

/// One finite score per matrix row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite score".into()));
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// A total order over rows: `order[p]` is the row at rank `p + 1` and
/// `ranks[i]` is the 1-based rank of row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    order: Vec<usize>,
    ranks: Vec<usize>,
    scores: Option<Vec<f64>>,
}

impl Ranking {
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut ranks = vec![0; n];
        for (p, &i) in order.iter().enumerate() {
            if i >= n {
                return Err(Error::OutOfRange { index: i, len: n });
            }
            if ranks[i] != 0 {
                return Err(Error::ItemMismatch(format!("row {i} appears twice")));
            }
            ranks[i] = p + 1;
        }
        Ok(Self {
            order,
            ranks,
            scores: None,
        })
    }

    /// `ranks` must be a permutation of 1..=n.
    pub fn from_ranks(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut order = vec![usize::MAX; n];
        for (i, &r) in ranks.iter().enumerate() {
            if r == 0 || r > n {
                return Err(Error::OutOfRange { index: r, len: n });
            }
            if order[r - 1] != usize::MAX {
                return Err(Error::ItemMismatch(format!("rank {r} assigned twice")));
            }
            order[r - 1] = i;
        }
        Ok(Self {
            order,
            ranks,
            scores: None,
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_of(&self, row: usize) -> usize {
        self.ranks[row]
    }

    pub fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Descending sort by score; equal scores keep input order.
pub fn rank_by_score(scores: &ScoreVector) -> Ranking {
    let mut ranking = rank_values_desc(scores.as_slice());
    ranking.scores = Some(scores.as_slice().to_vec());
    ranking
}

/// Ordinal ranking of raw values, highest first, ties by index.
pub(crate) fn rank_values_desc(values: &[f64]) -> Ranking {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    Ranking::from_order(order).expect("sorted indices form a permutation")
}

/// An aggregation formula turning one attribute row into a score.
pub trait Scorer: Named + Send + Sync {
    fn score_row(&self, row: &[f64], weights: &[f64]) -> f64;

    fn score(&self, matrix: &AttributeMatrix, weights: &WeightVector) -> Result<ScoreVector> {
        if weights.len() != matrix.cols() {
            return Err(Error::Dimension {
                expected: matrix.cols(),
                found: weights.len(),
            });
        }
        let w = weights.as_slice();
        ScoreVector::new((0..matrix.rows()).map(|i| self.score_row(matrix.row(i), w)).collect())
    }
}

/// Weighted arithmetic mean, `s_i = sum_j w_j a_ij`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArithmeticMean;

impl Named for ArithmeticMean {
    fn name(&self) -> &'static str {
        "arith"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["arithmetic"]
    }
}

impl Scorer for ArithmeticMean {
    fn score_row(&self, row: &[f64], weights: &[f64]) -> f64 {
        row.iter().zip(weights).map(|(a, w)| a * w).sum()
    }
}

/// Weighted geometric mean, `s_i = exp(sum_j w_j ln max(a_ij, floor))`.
#[derive(Debug, Clone, Copy)]
pub struct GeometricMean {
    pub floor: f64,
}

impl Default for GeometricMean {
    fn default() -> Self {
        Self {
            floor: GEOMETRIC_FLOOR,
        }
    }
}

impl Named for GeometricMean {
    fn name(&self) -> &'static str {
        "geom"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["geometric"]
    }
}

impl Scorer for GeometricMean {
    fn score_row(&self, row: &[f64], weights: &[f64]) -> f64 {
        row.iter()
            .zip(weights)
            .map(|(a, w)| w * a.max(self.floor).ln())
            .sum::<f64>()
            .exp()
    }
}

/// Registry holding `arith` and `geom`.
pub fn scorers() -> Registry<dyn Scorer> {
    let mut r: Registry<dyn Scorer> = Registry::new("mean");
    r.register(Box::new(ArithmeticMean));
    r.register(Box::new(GeometricMean::default()));
    r
}

pub fn score_arithmetic(matrix: &AttributeMatrix, weights: &WeightVector) -> Result<ScoreVector> {
    ArithmeticMean.score(matrix, weights)
}

pub fn score_geometric(matrix: &AttributeMatrix, weights: &WeightVector) -> Result<ScoreVector> {
    GeometricMean::default().score(matrix, weights)
}

/// True iff `ax[j] >= ay[j]` for every attribute.
pub fn strictly_dominates(ax: &[f64], ay: &[f64]) -> Result<bool> {
    if ax.len() != ay.len() {
        return Err(Error::Dimension {
            expected: ax.len(),
            found: ay.len(),
        });
    }
    Ok(ax.iter().zip(ay).all(|(x, y)| x >= y))
}
