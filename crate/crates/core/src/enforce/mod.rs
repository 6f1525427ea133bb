//! Weight-space programs: forcing a target to the top, enforcing a top-k
//! order, locating the orderings that block it, near-uniform witness weights
//! and the best rank each row can reach.
//!
//! Every ordering requirement "row `a` scores at least ε above row `b`" is a
//! single linear row `sum_j (A[a][j] - A[b][j]) w_j >= ε` over weights on the
//! probability simplex.

use rayon::prelude::*;

use crate::dataset::AttributeMatrix;
use crate::error::{Error, Result};
use crate::lp::{solve, LpBuilder, LpModel, Relation, Sense, SolveResult, SolveStatus, SolverOptions, VarId};
use crate::sampler::MonteCarloStats;
use crate::scoring::{rank_by_score, score_arithmetic, score_geometric, WeightVector};

pub const DEFAULT_EPSILON: f64 = 0.0005;
pub const DEFAULT_BIG_M_SLACK: f64 = 1000.0;
pub const DEFAULT_BIG_M_RANK: f64 = 10.0;
/// Slack values above this count as nonzero.
pub const SLACK_TOL: f64 = 1e-7;
/// Allowed shortfall of a verified score gap below ε.
pub const WITNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct EnforceConfig {
    pub epsilon: f64,
    pub big_m_slack: f64,
    pub big_m_rank: f64,
    pub solver: SolverOptions,
}

impl Default for EnforceConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            big_m_slack: DEFAULT_BIG_M_SLACK,
            big_m_rank: DEFAULT_BIG_M_RANK,
            solver: SolverOptions::default(),
        }
    }
}

impl EnforceConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        for (name, m) in [("big-m-slack", self.big_m_slack), ("big-m-rank", self.big_m_rank)] {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::Config(format!("{name} must be > 0, got {m}")));
            }
        }
        Ok(())
    }
}

/// `(above, below)`: row `above` must outscore row `below` by ε.
pub type Pair = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub weights: Option<WeightVector>,
    /// Ordering requirements that had to be given up (diagnosis only).
    pub violated: Vec<Pair>,
    pub objective: Option<f64>,
}

impl FeasibilityReport {
    fn infeasible() -> Self {
        Self {
            feasible: false,
            weights: None,
            violated: Vec::new(),
            objective: None,
        }
    }
}

/// `row_pivot - row_other` for each other row.
pub fn difference_rows(a: &AttributeMatrix, pivot: usize, others: &[usize]) -> Result<Vec<Vec<f64>>> {
    check_row(a, pivot)?;
    others
        .iter()
        .map(|&o| {
            check_row(a, o)?;
            if o == pivot {
                return Err(Error::Config(format!("row {o} cannot be compared with itself")));
            }
            Ok(a.row(pivot).iter().zip(a.row(o)).map(|(x, y)| x - y).collect())
        })
        .collect()
}

fn check_row(a: &AttributeMatrix, row: usize) -> Result<()> {
    if row >= a.rows() {
        return Err(Error::OutOfRange {
            index: row,
            len: a.rows(),
        });
    }
    Ok(())
}

/// Adjacent pairs inside the first `k` entries of `order`, then the k-th
/// entry above every row not in the prefix.
pub fn topk_pairs(a: &AttributeMatrix, order: &[usize], k: usize) -> Result<Vec<Pair>> {
    let n = a.rows();
    if k == 0 || k > order.len() || k > n {
        return Err(Error::Config(format!(
            "k must be between 1 and {} (order has {} rows), got {k}",
            n.min(order.len()),
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &r in order {
        check_row(a, r)?;
        if std::mem::replace(&mut seen[r], true) {
            return Err(Error::Config(format!("row {r} appears twice in the order")));
        }
    }
    let prefix = &order[..k];
    let mut in_prefix = vec![false; n];
    for &r in prefix {
        in_prefix[r] = true;
    }
    let mut pairs: Vec<Pair> = prefix.windows(2).map(|w| (w[0], w[1])).collect();
    let last = prefix[k - 1];
    pairs.extend((0..n).filter(|&r| !in_prefix[r]).map(|r| (last, r)));
    Ok(pairs)
}

pub fn top1_pairs(a: &AttributeMatrix, target: usize) -> Result<Vec<Pair>> {
    topk_pairs(a, &[target], 1)
}

fn gap(a: &AttributeMatrix, (hi, lo): Pair, j: usize) -> f64 {
    a.get(hi, j) - a.get(lo, j)
}

fn gap_terms(a: &AttributeMatrix, pair: Pair, w: &[VarId]) -> Vec<(VarId, f64)> {
    w.iter().enumerate().map(|(j, &v)| (v, gap(a, pair, j))).collect()
}

fn simplex_weights(b: &mut LpBuilder, m: usize) -> Vec<VarId> {
    let w: Vec<VarId> = (0..m).map(|j| b.nonneg(format!("w{}", j + 1))).collect();
    b.named_constraint("sum_w", w.iter().map(|&v| (v, 1.0)).collect(), Relation::Eq, 1.0);
    w
}

/// An LP/ILP built for one of the programs, with handles to its variables.
#[derive(Debug, Clone)]
pub struct EnforceModel {
    pub model: LpModel,
    pub weights: Vec<VarId>,
    pub pairs: Vec<Pair>,
    slacks: Vec<Option<VarId>>,
    indicators: Vec<Option<VarId>>,
    forced: Vec<bool>,
}

fn pair_name(prefix: &str, (hi, lo): Pair) -> String {
    format!("{prefix}_{}_{}", hi + 1, lo + 1)
}

/// Plain feasibility program over the given pairs.
pub fn pairs_model(a: &AttributeMatrix, pairs: &[Pair], cfg: &EnforceConfig) -> Result<EnforceModel> {
    cfg.validate()?;
    let mut b = LpBuilder::new();
    let w = simplex_weights(&mut b, a.cols());
    for &p in pairs {
        b.named_constraint(pair_name("gap", p), gap_terms(a, p, &w), Relation::Ge, cfg.epsilon);
    }
    Ok(EnforceModel {
        model: b.build()?,
        weights: w,
        pairs: pairs.to_vec(),
        slacks: vec![None; pairs.len()],
        indicators: vec![None; pairs.len()],
        forced: vec![false; pairs.len()],
    })
}

pub fn topk_model(a: &AttributeMatrix, order: &[usize], k: usize, cfg: &EnforceConfig) -> Result<EnforceModel> {
    pairs_model(a, &topk_pairs(a, order, k)?, cfg)
}

fn run(model: &LpModel, opts: &SolverOptions) -> Result<Option<SolveResult>> {
    let r = solve(model, opts);
    match r.status {
        SolveStatus::Optimal => Ok(Some(r)),
        SolveStatus::Infeasible => Ok(None),
        SolveStatus::Unbounded => Err(Error::Numerical("weight program reported unbounded".into())),
        SolveStatus::NumericalFailure => Err(Error::Numerical(format!(
            "no verified solution after {} iterations",
            r.iterations
        ))),
        SolveStatus::NodeLimit => Err(Error::Budget(format!(
            "branch-and-bound stopped after {} nodes",
            r.nodes
        ))),
    }
}

fn extract_weights(em: &EnforceModel, r: &SolveResult) -> Result<WeightVector> {
    let raw: Vec<f64> = em.weights.iter().map(|&v| r.value(v)).collect();
    WeightVector::from_solver(&raw)
}

fn pair_gap(scores: &[f64], (hi, lo): Pair) -> f64 {
    scores[hi] - scores[lo]
}

/// Checks every pair against the re-scored weights; with ε > 0 the ranked
/// prefix must also come out exactly as requested.
fn verify_prefix(a: &AttributeMatrix, w: &WeightVector, pairs: &[Pair], prefix: &[usize], eps: f64) -> Result<()> {
    let scores = score_arithmetic(a, w)?;
    let s = scores.as_slice();
    for &p in pairs {
        let g = pair_gap(s, p);
        if g < eps - WITNESS_TOL {
            return Err(Error::Witness(format!(
                "rows {} and {}: gap {g} below margin {eps}",
                p.0 + 1,
                p.1 + 1
            )));
        }
    }
    if eps > WITNESS_TOL {
        let ranking = rank_by_score(&scores);
        if &ranking.order()[..prefix.len()] != prefix {
            return Err(Error::Witness("re-scored order does not reproduce the prefix".into()));
        }
    }
    Ok(())
}

/// Can `target` be placed strictly first (by margin ε)?
pub fn feasible_top1(a: &AttributeMatrix, target: usize, cfg: &EnforceConfig) -> Result<FeasibilityReport> {
    feasible_topk(a, &[target], 1, cfg)
}

/// Can the first `k` rows of `order` be made the top k, in that order?
pub fn feasible_topk(a: &AttributeMatrix, order: &[usize], k: usize, cfg: &EnforceConfig) -> Result<FeasibilityReport> {
    let em = topk_model(a, order, k, cfg)?;
    let Some(r) = run(&em.model, &cfg.solver)? else {
        return Ok(FeasibilityReport::infeasible());
    };
    let w = extract_weights(&em, &r)?;
    verify_prefix(a, &w, &em.pairs, &order[..k], cfg.epsilon)?;
    Ok(FeasibilityReport {
        feasible: true,
        weights: Some(w),
        violated: Vec::new(),
        objective: Some(r.objective),
    })
}

/// [`feasible_top1`] for every row, in row order.
pub fn feasible_top1_all(a: &AttributeMatrix, cfg: &EnforceConfig) -> Result<Vec<FeasibilityReport>> {
    (0..a.rows()).into_par_iter().map(|t| feasible_top1(a, t, cfg)).collect()
}

/// Largest k such that the first k rows of `order` can be enforced, scanning
/// k upward and stopping at the first infeasible k.
pub fn max_feasible_k(a: &AttributeMatrix, order: &[usize], cfg: &EnforceConfig) -> Result<(usize, Vec<FeasibilityReport>)> {
    let mut reports = Vec::new();
    let limit = order.len().min(a.rows());
    for k in 1..=limit {
        let r = feasible_topk(a, order, k, cfg)?;
        let ok = r.feasible;
        reports.push(r);
        if !ok {
            return Ok((k - 1, reports));
        }
    }
    Ok((limit, reports))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagnoseMode {
    /// Continuous slack per ordering row, objective `M * sum d`.
    #[default]
    Slack,
    /// Indicator per ordering row; minimizes the number of violated rows.
    MinCount,
}

/// Slack program: each ordering row gets `d >= 0` added to its left side.
pub fn slack_model(a: &AttributeMatrix, pairs: &[Pair], cfg: &EnforceConfig) -> Result<EnforceModel> {
    cfg.validate()?;
    let mut b = LpBuilder::new();
    let w = simplex_weights(&mut b, a.cols());
    let mut slacks = Vec::with_capacity(pairs.len());
    for &p in pairs {
        let d = b.nonneg(pair_name("d", p));
        let mut terms = gap_terms(a, p, &w);
        terms.push((d, 1.0));
        b.named_constraint(pair_name("gap", p), terms, Relation::Ge, cfg.epsilon);
        slacks.push(Some(d));
    }
    let obj = slacks.iter().flatten().map(|&d| (d, cfg.big_m_slack)).collect();
    b.objective(Sense::Minimize, obj, 0.0);
    Ok(EnforceModel {
        model: b.build()?,
        weights: w,
        pairs: pairs.to_vec(),
        slacks,
        indicators: vec![None; pairs.len()],
        forced: vec![false; pairs.len()],
    })
}

/// Slack every pair could need: `ε - min_j gap_j`.
fn slack_bound(a: &AttributeMatrix, p: Pair, eps: f64) -> f64 {
    let min = (0..a.cols()).map(|j| gap(a, p, j)).fold(f64::INFINITY, f64::min);
    eps - min
}

fn max_gap(a: &AttributeMatrix, p: Pair) -> f64 {
    (0..a.cols()).map(|j| gap(a, p, j)).fold(f64::NEG_INFINITY, f64::max)
}

/// Violation-counting program: `gap·w + d >= ε`, `d - M y <= 0`, minimize
/// `sum y`.
///
/// With `presolve`, pairs that hold for every weight vector are dropped,
/// pairs that hold for none are counted as violated up front, and each
/// remaining pair uses the smallest valid big-M. The optimum is unchanged.
pub fn count_model(a: &AttributeMatrix, pairs: &[Pair], cfg: &EnforceConfig, presolve: bool) -> Result<EnforceModel> {
    cfg.validate()?;
    let eps = cfg.epsilon;
    for &p in pairs {
        let need = slack_bound(a, p, eps);
        if need >= cfg.big_m_rank {
            return Err(Error::Config(format!(
                "big-M {} is too small: rows {} and {} may need slack {need}",
                cfg.big_m_rank,
                p.0 + 1,
                p.1 + 1
            )));
        }
    }
    let mut b = LpBuilder::new();
    let w = simplex_weights(&mut b, a.cols());
    let mut slacks = Vec::with_capacity(pairs.len());
    let mut indicators = Vec::with_capacity(pairs.len());
    let mut forced = Vec::with_capacity(pairs.len());
    for &p in pairs {
        let need = slack_bound(a, p, eps);
        if presolve && (need <= 0.0 || max_gap(a, p) < eps) {
            slacks.push(None);
            indicators.push(None);
            forced.push(need > 0.0);
            continue;
        }
        let big_m = if presolve { need } else { cfg.big_m_rank };
        let d = b.nonneg(pair_name("d", p));
        let y = b.binary(pair_name("y", p));
        let mut terms = gap_terms(a, p, &w);
        terms.push((d, 1.0));
        b.named_constraint(pair_name("gap", p), terms, Relation::Ge, eps);
        b.named_constraint(pair_name("link", p), vec![(d, 1.0), (y, -big_m)], Relation::Le, 0.0);
        slacks.push(Some(d));
        indicators.push(Some(y));
        forced.push(false);
    }
    let obj = indicators.iter().flatten().map(|&y| (y, 1.0)).collect();
    let constant = forced.iter().filter(|&&f| f).count() as f64;
    b.objective(Sense::Minimize, obj, constant);
    Ok(EnforceModel {
        model: b.build()?,
        weights: w,
        pairs: pairs.to_vec(),
        slacks,
        indicators,
        forced,
    })
}

fn violated_pairs(em: &EnforceModel, r: &SolveResult, mode: DiagnoseMode) -> Vec<Pair> {
    em.pairs
        .iter()
        .enumerate()
        .filter(|&(i, _)| match mode {
            DiagnoseMode::Slack => em.slacks[i].is_some_and(|d| r.value(d) > SLACK_TOL),
            DiagnoseMode::MinCount => em.forced[i] || em.indicators[i].is_some_and(|y| r.value(y) > 0.5),
        })
        .map(|(_, &p)| p)
        .collect()
}

/// Pairs whose re-scored gap falls short of ε by more than `tol`.
fn short_pairs(a: &AttributeMatrix, w: &WeightVector, pairs: &[Pair], eps: f64, tol: f64) -> Result<Vec<Pair>> {
    let scores = score_arithmetic(a, w)?;
    Ok(pairs
        .iter()
        .copied()
        .filter(|&p| pair_gap(scores.as_slice(), p) < eps - tol)
        .collect())
}

/// Finds the orderings that must be reversed for the top-k order to hold.
pub fn diagnose_topk(
    a: &AttributeMatrix,
    order: &[usize],
    k: usize,
    cfg: &EnforceConfig,
    mode: DiagnoseMode,
) -> Result<FeasibilityReport> {
    let pairs = topk_pairs(a, order, k)?;
    diagnose_pairs(a, &pairs, cfg, mode)
}

pub fn diagnose_pairs(a: &AttributeMatrix, pairs: &[Pair], cfg: &EnforceConfig, mode: DiagnoseMode) -> Result<FeasibilityReport> {
    let em = match mode {
        DiagnoseMode::Slack => slack_model(a, pairs, cfg)?,
        DiagnoseMode::MinCount => count_model(a, pairs, cfg, true)?,
    };
    let r = run(&em.model, &cfg.solver)?
        .ok_or_else(|| Error::Numerical("slack program cannot be infeasible".into()))?;
    let w = extract_weights(&em, &r)?;
    let violated = violated_pairs(&em, &r, mode);
    let tol = match mode {
        DiagnoseMode::Slack => SLACK_TOL + WITNESS_TOL,
        DiagnoseMode::MinCount => WITNESS_TOL,
    };
    let short = short_pairs(a, &w, pairs, cfg.epsilon, tol)?;
    if short.iter().any(|p| !violated.contains(p)) {
        return Err(Error::Witness("a pair reported as satisfied falls short of ε".into()));
    }
    if mode == DiagnoseMode::MinCount && short.len() < violated.len() {
        return Err(Error::Witness(format!(
            "weights violate {} pairs but {} were reported",
            short.len(),
            violated.len()
        )));
    }
    Ok(FeasibilityReport {
        feasible: violated.is_empty(),
        weights: Some(w),
        violated,
        objective: Some(r.objective),
    })
}

/// Enforcement weights of smallest spread `max w - min w`.
pub fn appealing_model(a: &AttributeMatrix, pairs: &[Pair], cfg: &EnforceConfig) -> Result<EnforceModel> {
    cfg.validate()?;
    let mut b = LpBuilder::new();
    let w = simplex_weights(&mut b, a.cols());
    let hi = b.nonneg("max_w");
    let lo = b.nonneg("min_w");
    for (j, &v) in w.iter().enumerate() {
        b.named_constraint(format!("upper_{}", j + 1), vec![(v, 1.0), (hi, -1.0)], Relation::Le, 0.0);
        b.named_constraint(format!("lower_{}", j + 1), vec![(v, 1.0), (lo, -1.0)], Relation::Ge, 0.0);
    }
    for &p in pairs {
        b.named_constraint(pair_name("gap", p), gap_terms(a, p, &w), Relation::Ge, cfg.epsilon);
    }
    b.objective(Sense::Minimize, vec![(hi, 1.0), (lo, -1.0)], 0.0);
    Ok(EnforceModel {
        model: b.build()?,
        weights: w,
        pairs: pairs.to_vec(),
        slacks: vec![None; pairs.len()],
        indicators: vec![None; pairs.len()],
        forced: vec![false; pairs.len()],
    })
}

/// Near-uniform weights enforcing the top-k prefix of `order`; `k = 0`
/// imposes no ordering at all.
pub fn appealing_weights(a: &AttributeMatrix, order: &[usize], k: usize, cfg: &EnforceConfig) -> Result<FeasibilityReport> {
    let pairs = if k == 0 { Vec::new() } else { topk_pairs(a, order, k)? };
    let em = appealing_model(a, &pairs, cfg)?;
    let Some(r) = run(&em.model, &cfg.solver)? else {
        return Ok(FeasibilityReport::infeasible());
    };
    let w = extract_weights(&em, &r)?;
    verify_prefix(a, &w, &pairs, &order[..k], cfg.epsilon)?;
    Ok(FeasibilityReport {
        feasible: true,
        weights: Some(w),
        violated: Vec::new(),
        objective: Some(r.objective),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestRank {
    pub target: usize,
    pub rank: usize,
    pub weights: WeightVector,
    /// Rows that stay above the target under the witness weights.
    pub above: Vec<usize>,
    pub nodes: u64,
}

/// Literal best-rank program for `target` (no presolve), as handed to an
/// external solver.
pub fn best_rank_model(a: &AttributeMatrix, target: usize, cfg: &EnforceConfig) -> Result<EnforceModel> {
    check_row(a, target)?;
    let pairs: Vec<Pair> = (0..a.rows()).filter(|&i| i != target).map(|i| (target, i)).collect();
    count_model(a, &pairs, cfg, false)
}

/// Best rank `target` can reach: one plus the fewest rows that cannot be
/// pushed ε below it by any weight vector.
pub fn best_rank(a: &AttributeMatrix, target: usize, cfg: &EnforceConfig) -> Result<BestRank> {
    check_row(a, target)?;
    let pairs: Vec<Pair> = (0..a.rows()).filter(|&i| i != target).map(|i| (target, i)).collect();
    let em = count_model(a, &pairs, cfg, true)?;
    let r = run(&em.model, &cfg.solver)?
        .ok_or_else(|| Error::Numerical("best-rank program cannot be infeasible".into()))?;
    let w = extract_weights(&em, &r)?;
    let violated = violated_pairs(&em, &r, DiagnoseMode::MinCount);
    let rank = 1 + violated.len();
    let short = short_pairs(a, &w, &pairs, cfg.epsilon, WITNESS_TOL)?;
    if short.len() != violated.len() {
        return Err(Error::Witness(format!(
            "row {}: reported rank {rank} but witness weights give {}",
            target + 1,
            1 + short.len()
        )));
    }
    Ok(BestRank {
        target,
        rank,
        weights: w,
        above: short.iter().map(|p| p.1).collect(),
        nodes: r.nodes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestRankRow {
    pub row: usize,
    pub label: String,
    /// Rank under uniform weights and the geometric mean.
    pub deterministic: usize,
    /// Best rank seen during Monte Carlo.
    pub random: usize,
    pub optimal: usize,
    pub weights: WeightVector,
}

/// Deterministic, Monte Carlo and optimal ranks for the selected rows.
pub fn best_rank_table(
    a: &AttributeMatrix,
    cfg: &EnforceConfig,
    mc: &MonteCarloStats,
    rows: &[usize],
) -> Result<Vec<BestRankRow>> {
    if mc.rows.len() != a.rows() {
        return Err(Error::Dimension {
            expected: a.rows(),
            found: mc.rows.len(),
        });
    }
    let uniform = rank_by_score(&score_geometric(a, &WeightVector::uniform(a.cols())?)?);
    rows.par_iter()
        .map(|&row| {
            let best = best_rank(a, row, cfg)?;
            Ok(BestRankRow {
                row,
                label: a.labels()[row].clone(),
                deterministic: uniform.rank_of(row),
                random: mc.rows[row].min_rank,
                optimal: best.rank,
                weights: best.weights,
            })
        })
        .collect()
}
