//! Dense two-phase tableau simplex (Dantzig pricing with a Bland fallback).
//!
//! Variables are first mapped to non-negative columns (shifted, mirrored or
//! split), finite upper bounds become rows, and every inequality is written
//! as `<=` with a slack. Rows whose right-hand side is negative share a
//! single artificial column that is pivoted in once at the start, so phase
//! one needs one artificial per equality row plus at most one more.

use super::model::{LpModel, Relation, Sense};
use super::{SolveResult, SolveStatus, SolverOptions, FEASIBILITY_TOL};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const RATIO_TIE: f64 = 1e-12;
const STALL_LIMIT: u32 = 50;
const HARRIS_TOL: f64 = 1e-9;
const REFACTOR_EVERY: u32 = 1000;

/// Retry settings after a numerical failure.
const CAREFUL_PIVOT_TOL: f64 = 1e-7;
const CAREFUL_REFACTOR_EVERY: u32 = 100;

#[derive(Debug, Clone, Copy)]
enum Map {
    Fixed(f64),
    Shift { col: usize, offset: f64 },
    Mirror { col: usize, offset: f64 },
    Free { pos: usize, neg: usize },
}

struct Row {
    coefs: Vec<(usize, f64)>,
    relation: Relation,
    rhs: f64,
}

struct StdForm {
    ncols: usize,
    rows: Vec<Row>,
    cost: Vec<f64>,
    maps: Vec<Map>,
}

impl StdForm {
    /// Returns `None` when some row reduces to a violated constant relation
    /// or some bound interval is empty.
    fn build(model: &LpModel, bounds: &[(f64, f64)]) -> Option<Self> {
        let mut ncols = 0;
        let mut maps = Vec::with_capacity(bounds.len());
        let mut rows = Vec::new();
        for &(lo, hi) in bounds {
            if hi < lo - FEASIBILITY_TOL {
                return None;
            }
            let map = if (hi - lo).abs() <= 1e-12 {
                Map::Fixed(lo)
            } else if lo.is_finite() {
                let col = ncols;
                ncols += 1;
                if hi.is_finite() {
                    rows.push(Row {
                        coefs: vec![(col, 1.0)],
                        relation: Relation::Le,
                        rhs: hi - lo,
                    });
                }
                Map::Shift { col, offset: lo }
            } else if hi.is_finite() {
                let col = ncols;
                ncols += 1;
                Map::Mirror { col, offset: hi }
            } else {
                ncols += 2;
                Map::Free {
                    pos: ncols - 2,
                    neg: ncols - 1,
                }
            };
            maps.push(map);
        }

        let expand = |terms: &[(super::VarId, f64)], dense: &mut Vec<f64>| -> f64 {
            let mut shift = 0.0;
            for &(v, c) in terms {
                match maps[v.0] {
                    Map::Fixed(x) => shift += c * x,
                    Map::Shift { col, offset } => {
                        dense[col] += c;
                        shift += c * offset;
                    }
                    Map::Mirror { col, offset } => {
                        dense[col] -= c;
                        shift += c * offset;
                    }
                    Map::Free { pos, neg } => {
                        dense[pos] += c;
                        dense[neg] -= c;
                    }
                }
            }
            shift
        };

        let mut dense = vec![0.0; ncols];
        for c in model.constraints() {
            dense.iter_mut().for_each(|x| *x = 0.0);
            let shift = expand(&c.terms, &mut dense);
            let rhs = c.rhs - shift;
            let coefs: Vec<(usize, f64)> = dense
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(j, v)| (j, *v))
                .collect();
            if coefs.is_empty() {
                let tol = FEASIBILITY_TOL * (1.0 + c.rhs.abs());
                let ok = match c.relation {
                    Relation::Le => 0.0 <= rhs + tol,
                    Relation::Ge => 0.0 >= rhs - tol,
                    Relation::Eq => rhs.abs() <= tol,
                };
                if !ok {
                    return None;
                }
                continue;
            }
            rows.push(Row {
                coefs,
                relation: c.relation,
                rhs,
            });
        }

        let mut cost = vec![0.0; ncols];
        expand(&model.objective().terms, &mut cost);
        if model.objective().sense == Sense::Maximize {
            cost.iter_mut().for_each(|c| *c = -*c);
        }
        Some(Self {
            ncols,
            rows,
            cost,
            maps,
        })
    }

    fn recover(&self, x: &[f64]) -> Vec<f64> {
        self.maps
            .iter()
            .map(|m| match *m {
                Map::Fixed(v) => v,
                Map::Shift { col, offset } => offset + x[col],
                Map::Mirror { col, offset } => offset - x[col],
                Map::Free { pos, neg } => x[pos] - x[neg],
            })
            .collect()
    }
}

struct Tableau {
    nrows: usize,
    width: usize,
    a: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    enterable: Vec<bool>,
    iterations: u64,
    max_iterations: u64,
    scratch: Vec<usize>,
    /// Initial constraint block, kept for reinversion.
    orig: Vec<f64>,
    cost: Vec<f64>,
    since_refactor: u32,
    pivot_tol: f64,
    refactor_every: u32,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
    Singular,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.a[r * self.width + self.width - 1]
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.width + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let p = self.a[pr * w + pc];
        {
            let row = &mut self.a[pr * w..(pr + 1) * w];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[pc] = 1.0;
        }
        self.scratch.clear();
        for k in 0..w {
            if self.a[pr * w + k] != 0.0 {
                self.scratch.push(k);
            }
        }
        let (before, rest) = self.a.split_at_mut(pr * w);
        let (prow, after) = rest.split_at_mut(w);
        let nz = &self.scratch;
        let eliminate = |row: &mut [f64]| {
            let f = row[pc];
            if f != 0.0 {
                for &k in nz {
                    row[k] -= f * prow[k];
                }
                row[pc] = 0.0;
            }
        };
        before.chunks_exact_mut(w).for_each(eliminate);
        after.chunks_exact_mut(w).for_each(eliminate);
        eliminate(&mut self.obj);
        self.basis[pr] = pc;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    /// Rebuilds the tableau as `B^-1 [A | b]` from the initial block to
    /// discard accumulated round-off. Returns false if the basis is singular.
    fn refactor(&mut self) -> bool {
        let (m, w) = (self.nrows, self.width);
        // Sparse columns first keeps fill-in from the dense ones confined.
        let nnz = |c: usize| (0..m).filter(|&r| self.orig[r * w + c] != 0.0).count();
        let mut order: Vec<usize> = (0..m).collect();
        let counts: Vec<usize> = self.basis.iter().map(|&c| nnz(c)).collect();
        order.sort_by_key(|&k| (counts[k], k));

        let mut b = vec![0.0; m * m];
        for r in 0..m {
            for (k, &c) in self.basis.iter().enumerate() {
                b[r * m + k] = self.orig[r * w + c];
            }
        }
        let mut x = self.orig.clone();
        let mut used = vec![false; m];
        let mut row_of = vec![0; m];
        let mut nz_b = Vec::with_capacity(m);
        let mut nz_x = Vec::with_capacity(w);
        for &k in &order {
            let Some(p) = (0..m)
                .filter(|&r| !used[r])
                .max_by(|&i, &j| b[i * m + k].abs().total_cmp(&b[j * m + k].abs()).then(j.cmp(&i)))
            else {
                return false;
            };
            let piv = b[p * m + k];
            if piv.abs() < 1e-11 {
                return false;
            }
            used[p] = true;
            row_of[k] = p;
            nz_b.clear();
            for c in 0..m {
                if b[p * m + c] != 0.0 {
                    b[p * m + c] /= piv;
                    nz_b.push(c);
                }
            }
            nz_x.clear();
            for c in 0..w {
                if x[p * w + c] != 0.0 {
                    x[p * w + c] /= piv;
                    nz_x.push(c);
                }
            }
            for r in 0..m {
                let f = b[r * m + k];
                if r == p || f == 0.0 {
                    continue;
                }
                for &c in &nz_b {
                    b[r * m + c] -= f * b[p * m + c];
                }
                b[r * m + k] = 0.0;
                for &c in &nz_x {
                    x[r * w + c] -= f * x[p * w + c];
                }
            }
        }
        let mut a = vec![0.0; m * w];
        for k in 0..m {
            let src = row_of[k];
            a[k * w..(k + 1) * w].copy_from_slice(&x[src * w..(src + 1) * w]);
        }
        for (k, &c) in self.basis.iter().enumerate() {
            for r in 0..m {
                a[r * w + c] = if r == k { 1.0 } else { 0.0 };
            }
        }
        self.a = a;
        let cost = std::mem::take(&mut self.cost);
        self.set_objective(&cost);
        self.since_refactor = 0;
        true
    }

    /// Minimizes the current objective row. Entering columns follow Dantzig's
    /// rule until `STALL_LIMIT` consecutive degenerate pivots, then Bland's
    /// rule until the objective moves again, so cycling is impossible.
    fn run(&mut self) -> Outcome {
        let w = self.width;
        let mut stall = 0u32;
        loop {
            if self.iterations >= self.max_iterations {
                return Outcome::IterationLimit;
            }
            if self.since_refactor >= self.refactor_every && !self.refactor() {
                return Outcome::Singular;
            }
            let candidates = (0..w - 1).filter(|&j| self.enterable[j] && self.obj[j] < -COST_TOL);
            let entering = if stall < STALL_LIMIT {
                candidates.min_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]).then(a.cmp(&b)))
            } else {
                candidates.min()
            };
            let Some(pc) = entering else {
                return Outcome::Optimal;
            };
            let best = if stall < STALL_LIMIT {
                self.harris_row(pc)
            } else {
                self.bland_row(pc)
            };
            match best {
                None => return Outcome::Unbounded,
                Some((pr, ratio)) => {
                    if ratio * -self.obj[pc] > RATIO_TIE {
                        stall = 0;
                    } else {
                        stall += 1;
                    }
                    self.pivot(pr, pc);
                }
            }
        }
    }

    /// Two-pass ratio test: among rows whose ratio is within `HARRIS_TOL` of
    /// the minimum, take the largest pivot element.
    fn harris_row(&self, pc: usize) -> Option<(usize, f64)> {
        let mut bound = f64::INFINITY;
        for r in 0..self.nrows {
            let v = self.at(r, pc);
            if v > self.pivot_tol {
                bound = bound.min((self.rhs(r).max(0.0) + HARRIS_TOL) / v);
            }
        }
        let mut best: Option<(usize, f64, f64)> = None;
        for r in 0..self.nrows {
            let v = self.at(r, pc);
            if v <= self.pivot_tol {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / v;
            if ratio <= bound && best.map_or(true, |(_, bv, _)| v > bv) {
                best = Some((r, v, ratio));
            }
        }
        best.map(|(r, _, ratio)| (r, ratio))
    }

    /// Minimum ratio, ties to the smallest basic column index.
    fn bland_row(&self, pc: usize) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.nrows {
            let v = self.at(r, pc);
            if v <= self.pivot_tol {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / v;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio < bratio - RATIO_TIE || (ratio <= bratio + RATIO_TIE && self.basis[r] < self.basis[br]) {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best
    }

    fn set_objective(&mut self, cost: &[f64]) {
        let w = self.width;
        self.cost.clear();
        self.cost.extend_from_slice(cost);
        self.obj.clear();
        self.obj.extend_from_slice(cost);
        self.obj.push(0.0);
        for r in 0..self.nrows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for k in 0..w {
                    self.obj[k] -= cb * self.a[r * w + k];
                }
            }
        }
    }
}

/// Solves the continuous relaxation of `model` with the given bounds.
pub(crate) fn solve_relaxation(model: &LpModel, bounds: &[(f64, f64)], opts: &SolverOptions) -> SolveResult {
    let first = attempt(model, bounds, opts, PIVOT_TOL, REFACTOR_EVERY);
    if first.status != SolveStatus::NumericalFailure || first.iterations >= opts.max_iterations {
        return first;
    }
    let rest = SolverOptions {
        max_iterations: opts.max_iterations - first.iterations,
        ..*opts
    };
    let mut second = attempt(model, bounds, &rest, CAREFUL_PIVOT_TOL, CAREFUL_REFACTOR_EVERY);
    second.iterations += first.iterations;
    second
}

fn attempt(
    model: &LpModel,
    bounds: &[(f64, f64)],
    opts: &SolverOptions,
    pivot_tol: f64,
    refactor_every: u32,
) -> SolveResult {
    let infeasible = |iterations| SolveResult {
        status: SolveStatus::Infeasible,
        values: Vec::new(),
        objective: f64::NAN,
        iterations,
        nodes: 0,
    };
    let Some(sf) = StdForm::build(model, bounds) else {
        return infeasible(0);
    };

    let n = sf.ncols;
    let m = sf.rows.len();
    let n_ineq = sf.rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let mut signed: Vec<(Vec<(usize, f64)>, f64, bool)> = Vec::with_capacity(m);
    for row in &sf.rows {
        let (flip, is_eq) = match row.relation {
            Relation::Le => (false, false),
            Relation::Ge => (true, false),
            Relation::Eq => (row.rhs < 0.0, true),
        };
        let s = if flip { -1.0 } else { 1.0 };
        signed.push((row.coefs.iter().map(|&(j, c)| (j, s * c)).collect(), s * row.rhs, is_eq));
    }
    let needs_shared = signed.iter().any(|(_, b, eq)| !eq && *b < 0.0);
    let shared_col = n + n_ineq;
    let first_art = shared_col + usize::from(needs_shared);
    let n_eq = m - n_ineq;
    let cols = first_art + n_eq;
    let width = cols + 1;

    let mut t = Tableau {
        nrows: m,
        width,
        a: vec![0.0; m * width],
        obj: Vec::with_capacity(width),
        basis: vec![0; m],
        enterable: vec![true; cols],
        iterations: 0,
        max_iterations: opts.max_iterations,
        scratch: Vec::with_capacity(width),
        orig: Vec::new(),
        cost: Vec::new(),
        since_refactor: 0,
        pivot_tol,
        refactor_every,
    };
    let (mut slack, mut art) = (n, first_art);
    for (r, (coefs, b, is_eq)) in signed.iter().enumerate() {
        let base = r * width;
        for &(j, c) in coefs {
            t.a[base + j] = c;
        }
        t.a[base + width - 1] = *b;
        if *is_eq {
            t.a[base + art] = 1.0;
            t.basis[r] = art;
            art += 1;
        } else {
            t.a[base + slack] = 1.0;
            t.basis[r] = slack;
            slack += 1;
            if *b < 0.0 {
                t.a[base + shared_col] = -1.0;
            }
        }
    }

    t.orig = t.a.clone();

    let is_artificial = |c: usize| c >= shared_col && c < cols && (needs_shared || c >= first_art);
    let max_b = signed.iter().map(|(_, b, _)| b.abs()).fold(0.0, f64::max);

    if needs_shared || n_eq > 0 {
        let mut cost1 = vec![0.0; cols];
        for (c, v) in cost1.iter_mut().enumerate() {
            if is_artificial(c) {
                *v = 1.0;
            }
        }
        t.set_objective(&cost1);
        if needs_shared {
            let pr = (0..m)
                .filter(|&r| !signed[r].2)
                .min_by(|&x, &y| signed[x].1.total_cmp(&signed[y].1))
                .expect("a negative row exists");
            t.pivot(pr, shared_col);
        }
        let mut refactored = false;
        loop {
            match t.run() {
                Outcome::Optimal => {}
                // phase one is bounded below by zero
                Outcome::IterationLimit | Outcome::Unbounded | Outcome::Singular => return numerical(t.iterations),
            }
            let phase1 = -t.obj[width - 1];
            if phase1 <= FEASIBILITY_TOL * (1.0 + max_b) {
                break;
            }
            // A clear verdict after few pivots needs no reinversion.
            let clear = phase1 > 1e-4 * (1.0 + max_b) && t.since_refactor < 100;
            if clear || refactored || t.since_refactor == 0 || !t.refactor() {
                return infeasible(t.iterations);
            }
            refactored = true;
        }
        for c in 0..cols {
            if is_artificial(c) {
                t.enterable[c] = false;
            }
        }
        for r in 0..m {
            if !is_artificial(t.basis[r]) {
                continue;
            }
            let basic: Vec<bool> = {
                let mut b = vec![false; cols];
                t.basis.iter().for_each(|&c| b[c] = true);
                b
            };
            if let Some(c) = (0..cols)
                .filter(|&c| !is_artificial(c) && !basic[c])
                .find(|&c| t.at(r, c).abs() > PIVOT_TOL)
            {
                t.pivot(r, c);
            }
        }
    }

    let mut cost2 = sf.cost.clone();
    cost2.resize(cols, 0.0);
    t.set_objective(&cost2);
    let mut refactored = false;
    loop {
        let status = match t.run() {
            Outcome::Optimal => SolveStatus::Optimal,
            Outcome::Unbounded => SolveStatus::Unbounded,
            Outcome::IterationLimit | Outcome::Singular => return numerical(t.iterations),
        };
        let mut x = vec![0.0; cols];
        for r in 0..m {
            x[t.basis[r]] = t.rhs(r).max(0.0);
        }
        let values = sf.recover(&x);
        let mut result = SolveResult {
            status,
            objective: if status == SolveStatus::Optimal {
                model.objective().value(&values)
            } else {
                f64::NAN
            },
            values,
            iterations: t.iterations,
            nodes: 0,
        };
        if status == SolveStatus::Optimal && !satisfies(model, bounds, &result.values) {
            if !refactored && t.since_refactor > 0 && t.refactor() {
                refactored = true;
                continue;
            }
            result.status = SolveStatus::NumericalFailure;
        }
        return result;
    }
}

fn numerical(iterations: u64) -> SolveResult {
    SolveResult {
        status: SolveStatus::NumericalFailure,
        values: Vec::new(),
        objective: f64::NAN,
        iterations,
        nodes: 0,
    }
}

/// Feasibility of `values` against every row and bound, within tolerance.
pub(crate) fn satisfies(model: &LpModel, bounds: &[(f64, f64)], values: &[f64]) -> bool {
    for c in model.constraints() {
        let act = c.activity(values);
        let scale = 1.0
            + c.rhs.abs()
            + c.terms
                .iter()
                .map(|(v, k)| (k * values[v.0]).abs())
                .fold(0.0, f64::max);
        let tol = FEASIBILITY_TOL * scale;
        let ok = match c.relation {
            Relation::Le => act <= c.rhs + tol,
            Relation::Ge => act >= c.rhs - tol,
            Relation::Eq => (act - c.rhs).abs() <= tol,
        };
        if !ok {
            return false;
        }
    }
    values.iter().zip(bounds).all(|(&x, &(lo, hi))| {
        let tol = FEASIBILITY_TOL * (1.0 + x.abs());
        x >= lo - tol && x <= hi + tol
    })
}
