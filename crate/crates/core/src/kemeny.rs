//! Weight-free aggregation: per-attribute rankings, pairwise precedence
//! counts, exact Kemeny orders and Spearman footrule distances.

use crate::dataset::AttributeMatrix;
use crate::error::{Error, Result};
use crate::lp::{self, LpBuilder, LpModel, Relation, Sense, SolveStatus, SolverOptions, VarId};
use crate::registry::{Named, Registry};
use crate::scoring::{rank_values_desc, Ranking};

pub const MAX_ILP_ITEMS: usize = 25;
pub const MAX_DP_ITEMS: usize = 20;

/// Several complete rankings of the same items.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    items: Vec<String>,
    sources: Vec<String>,
    rankings: Vec<Ranking>,
}

impl RankTable {
    pub fn new(items: Vec<String>, sources: Vec<String>, rankings: Vec<Ranking>) -> Result<Self> {
        if sources.len() != rankings.len() {
            return Err(Error::Dimension {
                expected: rankings.len(),
                found: sources.len(),
            });
        }
        if let Some(r) = rankings.iter().find(|r| r.len() != items.len()) {
            return Err(Error::ItemMismatch(format!(
                "ranking covers {} items, table has {}",
                r.len(),
                items.len()
            )));
        }
        Ok(Self {
            items,
            sources,
            rankings,
        })
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Parses delimiter-separated lists: the header names each source, and
    /// row `r` holds the item each source places at rank `r`. Columns may
    /// be of unequal length and cover different items; every ranking is
    /// completed by appending its missing items in first-appearance order.
    pub fn parse_lists(text: &str, delimiter: u8) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let sources: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if sources.is_empty() || sources.iter().any(String::is_empty) {
            return Err(Error::Schema("every column needs a source name".into()));
        }
        let mut lists: Vec<Vec<String>> = vec![Vec::new(); sources.len()];
        let mut ended = vec![false; sources.len()];
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() > sources.len() {
                return Err(Error::RowLength {
                    line: line + 2,
                    expected: sources.len(),
                    found: record.len(),
                });
            }
            for (s, list) in lists.iter_mut().enumerate() {
                let cell = record.get(s).unwrap_or("");
                if cell.is_empty() {
                    ended[s] = true;
                    continue;
                }
                if ended[s] {
                    return Err(Error::Schema(format!("gap in column `{}` before line {}", sources[s], line + 2)));
                }
                if list.iter().any(|x| x == cell) {
                    return Err(Error::DuplicateKey(format!("{cell} (column `{}`)", sources[s])));
                }
                list.push(cell.to_string());
            }
        }

        let mut items: Vec<String> = Vec::new();
        for pos in 0..lists.iter().map(Vec::len).max().unwrap_or(0) {
            for list in &lists {
                if let Some(x) = list.get(pos) {
                    if !items.contains(x) {
                        items.push(x.clone());
                    }
                }
            }
        }
        let index = |name: &str| items.iter().position(|x| x == name).expect("collected above");
        let mut rankings = Vec::with_capacity(lists.len());
        for list in &lists {
            let mut order: Vec<usize> = list.iter().map(|x| index(x)).collect();
            let mut seen = vec![false; items.len()];
            order.iter().for_each(|&i| seen[i] = true);
            order.extend((0..items.len()).filter(|&i| !seen[i]));
            rankings.push(Ranking::from_order(order)?);
        }
        Self::new(items, sources, rankings)
    }
}

/// One ranking per column, highest value first, ties by row index.
pub fn per_attribute_ranks(a: &AttributeMatrix) -> RankTable {
    let rankings = (0..a.cols())
        .map(|j| rank_values_desc(&a.column(j).collect::<Vec<_>>()))
        .collect();
    RankTable {
        items: a.labels().to_vec(),
        sources: a.columns().to_vec(),
        rankings,
    }
}

/// `ahead(a, b)` is the number of input rankings placing `a` before `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceMatrix {
    n: usize,
    rankings: usize,
    counts: Vec<u32>,
}

impl PrecedenceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rankings(&self) -> usize {
        self.rankings
    }

    pub fn ahead(&self, a: usize, b: usize) -> u32 {
        self.counts[a * self.n + b]
    }

    /// Total pairwise disagreement of `order` with the inputs.
    pub fn cost(&self, order: &[usize]) -> u64 {
        let mut total = 0;
        for (p, &a) in order.iter().enumerate() {
            for &b in &order[p + 1..] {
                total += u64::from(self.ahead(b, a));
            }
        }
        total
    }
}

pub fn precedence_counts(t: &RankTable) -> PrecedenceMatrix {
    let n = t.len();
    let mut counts = vec![0u32; n * n];
    for r in &t.rankings {
        let order = r.order();
        for (p, &a) in order.iter().enumerate() {
            for &b in &order[p + 1..] {
                counts[a * n + b] += 1;
            }
        }
    }
    PrecedenceMatrix {
        n,
        rankings: t.rankings.len(),
        counts,
    }
}

/// The complete binary program: `x_ab = 1` means `a` before `b`, stored
/// for `a < b` only, with both cyclic triangle inequalities per triple.
pub fn kemeny_model(p: &PrecedenceMatrix) -> Result<LpModel> {
    let n = p.len();
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push((a, b, c, true));
                triples.push((a, b, c, false));
            }
        }
    }
    build_model(p, &triples).map(|(m, _)| m)
}

type Triangle = (usize, usize, usize, bool);

fn build_model(p: &PrecedenceMatrix, triangles: &[Triangle]) -> Result<(LpModel, Vec<Vec<Option<VarId>>>)> {
    let n = p.len();
    let mut b = LpBuilder::new();
    let mut x = vec![vec![None; n]; n];
    let mut terms = Vec::new();
    let mut constant = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let v = b.binary(format!("x_{}_{}", i + 1, j + 1));
            x[i][j] = Some(v);
            // n_ji * x_ij + n_ij * (1 - x_ij)
            constant += f64::from(p.ahead(i, j));
            let c = f64::from(p.ahead(j, i)) - f64::from(p.ahead(i, j));
            if c != 0.0 {
                terms.push((v, c));
            }
        }
    }
    for &(i, j, k, forward) in triangles {
        let (xij, xjk, xik) = (x[i][j].unwrap(), x[j][k].unwrap(), x[i][k].unwrap());
        let name = format!("tri_{}_{}_{}{}", i + 1, j + 1, k + 1, if forward { "a" } else { "b" });
        if forward {
            // x_ij + x_jk + x_ki <= 2
            b.named_constraint(name, vec![(xij, 1.0), (xjk, 1.0), (xik, -1.0)], Relation::Le, 1.0);
        } else {
            // x_ji + x_kj + x_ik <= 2
            b.named_constraint(name, vec![(xij, -1.0), (xjk, -1.0), (xik, 1.0)], Relation::Le, 0.0);
        }
    }
    b.objective(Sense::Minimize, terms, constant);
    Ok((b.build()?, x))
}

/// Exact Kemeny order by integer programming.
///
/// Triangle rows are added lazily: the model starts without them and each
/// round adds every triangle the current tournament violates, so the final
/// answer is optimal for the complete program.
pub fn kemeny_ilp(p: &PrecedenceMatrix, opts: &SolverOptions) -> Result<Ranking> {
    let n = p.len();
    if n > MAX_ILP_ITEMS {
        return Err(Error::TooLarge(format!("{n} items exceed the ILP limit of {MAX_ILP_ITEMS}")));
    }
    let mut triangles: Vec<Triangle> = Vec::new();
    loop {
        let (model, x) = build_model(p, &triangles)?;
        let res = lp::solve(&model, opts);
        let before = |i: usize, j: usize| -> bool {
            if i < j {
                res.value(x[i][j].unwrap()) > 0.5
            } else {
                res.value(x[j][i].unwrap()) < 0.5
            }
        };
        match res.status {
            SolveStatus::Optimal => {}
            SolveStatus::NodeLimit if !res.values.is_empty() => {
                let order = tournament_order(n, before);
                return Err(Error::Budget(format!(
                    "Kemeny node budget exhausted; incumbent order {:?} with cost {}",
                    order,
                    p.cost(&order)
                )));
            }
            other => return Err(Error::Numerical(format!("Kemeny program ended with {other:?}"))),
        }
        let mut added = 0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ij, jk, ik) = (before(i, j), before(j, k), before(i, k));
                    if ij && jk && !ik {
                        triangles.push((i, j, k, true));
                        added += 1;
                    } else if !ij && !jk && ik {
                        triangles.push((i, j, k, false));
                        added += 1;
                    }
                }
            }
        }
        if added == 0 {
            return Ranking::from_order(tournament_order(n, before));
        }
    }
}

/// Sorts by wins, most first; ties by index.
fn tournament_order(n: usize, before: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let wins: Vec<usize> = (0..n).map(|a| (0..n).filter(|&b| b != a && before(a, b)).count()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| wins[b].cmp(&wins[a]).then(a.cmp(&b)));
    order
}

/// Exact Kemeny order by dynamic programming over prefixes.
///
/// `best[S]` is the least disagreement of any order whose first `|S|`
/// items are `S`; appending `v` costs the inputs that put `v` ahead of
/// some member of `S`. Ties go to the smallest appended item.
pub fn kemeny_dp(p: &PrecedenceMatrix) -> Result<Ranking> {
    let n = p.len();
    if n > MAX_DP_ITEMS {
        return Err(Error::TooLarge(format!("{n} items exceed the DP limit of {MAX_DP_ITEMS}")));
    }
    let full = (1usize << n) - 1;
    let mut best = vec![u64::MAX; full + 1];
    let mut last = vec![u8::MAX; full + 1];
    best[0] = 0;
    for s in 0..full {
        let base = best[s];
        if base == u64::MAX {
            continue;
        }
        for v in 0..n {
            if s & (1 << v) != 0 {
                continue;
            }
            let mut add = 0u64;
            let mut rest = s;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                add += u64::from(p.ahead(v, u));
                rest &= rest - 1;
            }
            let t = s | (1 << v);
            // Improve when strictly cheaper, or equal with a smaller last item
            let cand = base + add;
            if cand < best[t] || (cand == best[t] && (v as u8) < last[t]) {
                best[t] = cand;
                last[t] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ranking::from_order(order)
}

/// Ascending mean rank, ties by item index.
pub fn average_rank(t: &RankTable) -> Ranking {
    let n = t.len();
    let mut sums = vec![0usize; n];
    for r in &t.rankings {
        for (i, s) in sums.iter_mut().enumerate() {
            *s += r.rank_of(i);
        }
    }
    // equal rank sums give equal means, so integer sums order exactly
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (sums[i], i));
    Ranking::from_order(order).expect("permutation")
}

/// Sum over items of the absolute rank difference.
pub fn footrule(r1: &Ranking, r2: &Ranking) -> Result<u64> {
    if r1.len() != r2.len() {
        return Err(Error::ItemMismatch(format!("{} vs {} items", r1.len(), r2.len())));
    }
    Ok(r1
        .ranks()
        .iter()
        .zip(r2.ranks())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum())
}

/// A rule combining several rankings into one.
pub trait RankAggregator: Named + Send + Sync {
    fn aggregate(&self, table: &RankTable) -> Result<Ranking>;
}

#[derive(Debug, Clone, Default)]
pub struct KemenyIlp {
    pub options: SolverOptions,
}

impl Named for KemenyIlp {
    fn name(&self) -> &'static str {
        "kemeny-ilp"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["kemeny", "ilp"]
    }
}

impl RankAggregator for KemenyIlp {
    fn aggregate(&self, table: &RankTable) -> Result<Ranking> {
        kemeny_ilp(&precedence_counts(table), &self.options)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct KemenyDp;

impl Named for KemenyDp {
    fn name(&self) -> &'static str {
        "kemeny-dp"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["dp"]
    }
}

impl RankAggregator for KemenyDp {
    fn aggregate(&self, table: &RankTable) -> Result<Ranking> {
        kemeny_dp(&precedence_counts(table))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AverageRank;

impl Named for AverageRank {
    fn name(&self) -> &'static str {
        "average"
    }

    fn aliases(&self) -> &'static [&'static str] {
        &["average-rank"]
    }
}

impl RankAggregator for AverageRank {
    fn aggregate(&self, table: &RankTable) -> Result<Ranking> {
        Ok(average_rank(table))
    }
}

pub fn aggregators() -> Registry<dyn RankAggregator> {
    let mut r: Registry<dyn RankAggregator> = Registry::new("aggregator");
    r.register(Box::new(KemenyIlp::default()))
        .register(Box::new(KemenyDp))
        .register(Box::new(AverageRank));
    r
}

/// Consensus rankings of a table with each input's distance to the
/// Kemeny order.
#[derive(Debug, Clone)]
pub struct KemenyReport {
    pub table: RankTable,
    pub kemeny: Ranking,
    pub kemeny_cost: u64,
    pub average: Ranking,
    pub average_cost: u64,
    /// footrule(input, Kemeny) per source.
    pub distances: Vec<u64>,
    /// Unnormalized mean of `distances`.
    pub mean_distance: f64,
    pub average_vs_kemeny: u64,
}

pub fn kemeny_report(table: RankTable, method: &dyn RankAggregator) -> Result<KemenyReport> {
    let p = precedence_counts(&table);
    let kemeny = method.aggregate(&table)?;
    let average = average_rank(&table);
    let distances = table
        .rankings
        .iter()
        .map(|r| footrule(r, &kemeny))
        .collect::<Result<Vec<_>>>()?;
    let mean_distance = if distances.is_empty() {
        0.0
    } else {
        distances.iter().sum::<u64>() as f64 / distances.len() as f64
    };
    Ok(KemenyReport {
        kemeny_cost: p.cost(kemeny.order()),
        average_cost: p.cost(average.order()),
        average_vs_kemeny: footrule(&average, &kemeny)?,
        kemeny,
        average,
        distances,
        mean_distance,
        table,
    })
}
